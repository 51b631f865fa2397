// Copyright 2026 The rqcgap authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "rqcgap/moment_operator.hpp"
#include "rqcgap/spectra.hpp"

using rqc::MomentOperator;
using rqc::Shape;
using rqc::SolverOptions;
using rqc::SpectralReport;

namespace {

/// Dense reference for the second eigenvalue: diagonalize, verify that the
/// top `ground_rank` eigenvalues equal 1, and return the next one down.
double dense_second_eigenvalue(const MomentOperator& op, int ground_rank) {
  Eigen::MatrixXd m = op.dense_materialize();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  const Eigen::Index last = ev.size() - 1;
  for (int r = 0; r < ground_rank; ++r)
    REQUIRE(ev(last - r) == Catch::Approx(1.0).margin(1e-8));
  return ev(last - ground_rank);
}

int ground_rank_of(const Shape& shape) {
  return rqc::ground_space_basis(shape.n, shape.t, shape.d).rank;
}

}  // namespace

TEST_CASE("second_eigenvalue rejects non-walk operators", "[spectra]") {
  Shape shape(3, 1, 2);
  CHECK_THROWS_AS(
      rqc::second_eigenvalue(MomentOperator::projector(shape, 1)),
      std::invalid_argument);
  CHECK_THROWS_AS(
      rqc::second_eigenvalue(MomentOperator::hamiltonian(shape)),
      std::invalid_argument);
}

TEST_CASE("two-site walks are exactly gapped", "[spectra]") {
  for (int t : {1, 2, 3}) {
    for (long long d : {2LL, 3LL}) {
      Shape shape(2, t, d);
      SpectralReport g =
          rqc::second_eigenvalue(MomentOperator::local_moment(shape));
      CHECK(std::abs(g.value) <= 1e-10);
      SpectralReport gap = rqc::hamiltonian_gap(2, t, d);
      CHECK(gap.value == Catch::Approx(1.0).margin(1e-10));
    }
  }
  SpectralReport par = rqc::second_eigenvalue(
      MomentOperator::parallel_moment(Shape(2, 1, 2)));
  CHECK(par.value == Catch::Approx(0.5).margin(1e-10));
  CHECK(par.residual <= 1e-8);
}

TEST_CASE("matrix-free eigenvalues match dense diagonalization", "[spectra]") {
  struct Config {
    int n;
    int t;
    long long d;
  };
  const std::vector<Config> local_grid = {
      {2, 1, 2}, {3, 1, 2}, {4, 1, 2}, {5, 1, 2}, {2, 2, 2},
      {2, 1, 3}, {3, 1, 3}, {2, 1, 4},
  };
  for (const auto& c : local_grid) {
    Shape shape(c.n, c.t, c.d);
    MomentOperator op = MomentOperator::local_moment(shape);
    const double dense = dense_second_eigenvalue(op, ground_rank_of(shape));
    SpectralReport rep = rqc::second_eigenvalue(op);
    INFO("local n=" << c.n << " t=" << c.t << " d=" << c.d);
    CHECK(rep.value == Catch::Approx(dense).margin(1e-8));
    CHECK(rep.residual <= 1e-8);
  }
  const std::vector<Config> parallel_grid = {
      {2, 1, 2}, {4, 1, 2}, {2, 2, 2}, {2, 1, 3},
  };
  for (const auto& c : parallel_grid) {
    Shape shape(c.n, c.t, c.d);
    MomentOperator op = MomentOperator::parallel_moment(shape);
    const double dense = dense_second_eigenvalue(op, ground_rank_of(shape));
    SpectralReport rep = rqc::second_eigenvalue(op);
    INFO("parallel n=" << c.n << " t=" << c.t << " d=" << c.d);
    CHECK(rep.value == Catch::Approx(dense).margin(1e-8));
  }
}

TEST_CASE("pinned walk spectra at t=1", "[spectra]") {
  SpectralReport g312 =
      rqc::second_eigenvalue(MomentOperator::local_moment(Shape(3, 1, 2)));
  CHECK(g312.value == Catch::Approx(0.5).margin(1e-8));
  CHECK(rqc::hamiltonian_gap(3, 1, 2).value == Catch::Approx(1.0).margin(1e-8));

  SpectralReport g313 =
      rqc::second_eigenvalue(MomentOperator::local_moment(Shape(3, 1, 3)));
  CHECK(g313.value == Catch::Approx(0.5).margin(1e-8));

  SpectralReport g412 =
      rqc::second_eigenvalue(MomentOperator::local_moment(Shape(4, 1, 2)));
  CHECK(g412.value == Catch::Approx(2.0 / 3.0).margin(1e-8));
  CHECK(rqc::hamiltonian_gap(4, 1, 2).value == Catch::Approx(1.0).margin(1e-8));

  SpectralReport p412 =
      rqc::second_eigenvalue(MomentOperator::parallel_moment(Shape(4, 1, 2)));
  CHECK(p412.value == Catch::Approx(0.5).margin(1e-8));

  SpectralReport d412 = rqc::detectability_norm(4, 1, 2);
  CHECK(std::abs(d412.value) <= 1e-6);
}

TEST_CASE("pinned walk spectra at t=2", "[spectra]") {
  SpectralReport g322 =
      rqc::second_eigenvalue(MomentOperator::local_moment(Shape(3, 2, 2)));
  CHECK(g322.value == Catch::Approx(0.7).margin(1e-8));
  CHECK(rqc::hamiltonian_gap(3, 2, 2).value == Catch::Approx(0.6).margin(1e-8));

  SolverOptions opts;
  opts.power_iter_limit = 300;  // engage Lanczos early on the bigger chains
  SpectralReport g422 = rqc::second_eigenvalue(
      MomentOperator::local_moment(Shape(4, 2, 2)), opts);
  CHECK(g422.value == Catch::Approx(0.8552284749830793).margin(1e-8));
  CHECK(rqc::hamiltonian_gap(4, 2, 2, opts).value ==
        Catch::Approx(0.4343145750507621).margin(1e-8));

  SpectralReport p422 = rqc::second_eigenvalue(
      MomentOperator::parallel_moment(Shape(4, 2, 2)), opts);
  CHECK(p422.value == Catch::Approx(0.7828427124746191).margin(1e-8));

  SpectralReport d422 = rqc::detectability_norm(4, 2, 2, opts);
  CHECK(d422.value == Catch::Approx(0.5656854249492382).margin(1e-7));
}

TEST_CASE("five-site chain at t=2", "[spectra]") {
  SolverOptions opts;
  opts.power_iter_limit = 300;
  SpectralReport g = rqc::second_eigenvalue(
      MomentOperator::local_moment(Shape(5, 2, 2)), opts);
  CHECK(g.value == Catch::Approx(0.9118033988749896).margin(1e-8));
  CHECK(rqc::hamiltonian_gap(5, 2, 2, opts).value ==
        Catch::Approx(0.3527864045000415).margin(1e-8));
}

TEST_CASE("detectability chain inequalities at n=4", "[spectra]") {
  SolverOptions opts;
  opts.power_iter_limit = 300;
  for (int t : {1, 2}) {
    const double gap = rqc::hamiltonian_gap(4, t, 2, opts).value;
    const double detect = rqc::detectability_norm(4, t, 2, opts).value;
    const double lambda_par =
        rqc::second_eigenvalue(MomentOperator::parallel_moment(Shape(4, t, 2)),
                               opts)
            .value;
    INFO("t=" << t);
    CHECK(detect <= std::pow(1.0 + gap / 2.0, -1.0 / 3.0) + 1e-6);
    CHECK(lambda_par <= 0.5 + 0.5 * detect + 1e-6);
  }
}

TEST_CASE("k-step walk eigenvalue is the k-th power", "[spectra]") {
  Shape shape(3, 2, 2);
  MomentOperator op = MomentOperator::local_moment(shape);
  const double l1 = rqc::second_eigenvalue(op).value;
  for (int k : {2, 3}) {
    SpectralReport rep = rqc::convolved_second_eigenvalue(op, k);
    CHECK(rep.value == Catch::Approx(std::pow(l1, k)).margin(1e-6));
  }
}

TEST_CASE("iterates stay orthogonal to the deflated space", "[spectra]") {
  Shape shape(3, 2, 2);
  MomentOperator op = MomentOperator::local_moment(shape);
  rqc::GroundSpaceDeflator deflator(shape);
  rqc::ApplyWorkspace<double> ws;
  const long long dim = shape.total_dim();
  std::vector<double> x(static_cast<size_t>(dim)), y(static_cast<size_t>(dim));
  rqc::Rng rng(3);
  for (auto& v : x) v = 2.0 * rng.uniform() - 1.0;
  deflator.project_out(x.data());
  for (int it = 0; it < 10; ++it) {
    op.apply(x.data(), y.data(), ws);
    deflator.project_out(y.data());
    double ny = 0.0;
    for (double v : y) ny += v * v;
    ny = std::sqrt(ny);
    for (const double& o : deflator.basis_overlaps(y.data()))
      CHECK(std::abs(o) <= 1e-12 * ny);
    x = y;
  }
}

TEST_CASE("Lanczos path reproduces the same eigenvalues", "[spectra]") {
  SolverOptions opts;
  opts.power_iter_limit = 2;  // force the switch immediately
  SpectralReport g = rqc::second_eigenvalue(
      MomentOperator::local_moment(Shape(3, 2, 2)), opts);
  CHECK(g.method == "lanczos");
  CHECK(g.value == Catch::Approx(0.7).margin(1e-8));
  CHECK(g.residual <= opts.tol);

  // The deflated parallel walk at t=1 is half a projector, so the power
  // phase converges in two applications and Lanczos is never needed.
  SpectralReport p = rqc::second_eigenvalue(
      MomentOperator::parallel_moment(Shape(4, 1, 2)), opts);
  CHECK(p.value == Catch::Approx(0.5).margin(1e-8));
}

TEST_CASE("iteration budget exhaustion raises with the best estimate",
          "[spectra]") {
  SolverOptions opts;
  opts.tol = 1e-16;  // unreachable
  opts.max_iter = 3;
  bool thrown = false;
  try {
    rqc::second_eigenvalue(MomentOperator::local_moment(Shape(3, 2, 2)), opts);
  } catch (const rqc::ConvergenceError& e) {
    thrown = true;
    CHECK(e.best().iterations == 3);
    CHECK(e.best().value > 0.0);
    CHECK(e.best().value < 1.0);
  }
  CHECK(thrown);
}

TEST_CASE("twirled state minimum support eigenvalue", "[spectra]") {
  SpectralReport r21 = rqc::rho_haar_min_eig(2, 1);
  CHECK(r21.value == Catch::Approx(0.25).margin(1e-12));
  SpectralReport r22 = rqc::rho_haar_min_eig(2, 2);
  CHECK(r22.value == Catch::Approx(1.0 / 12.0).margin(1e-10));
  SpectralReport r32 = rqc::rho_haar_min_eig(3, 2);
  CHECK(r32.value == Catch::Approx(1.0 / 54.0).margin(1e-10));

  // Lower bound N^{-2t} in the regime N >= t.
  struct Nt { long long n_levels; int t; };
  for (auto [nl, t] : {Nt{2, 1}, Nt{2, 2}, Nt{3, 1}, Nt{3, 2}, Nt{4, 1}}) {
    const double v = rqc::rho_haar_min_eig(nl, t).value;
    CHECK(v >= std::pow(static_cast<double>(nl), -2.0 * t) - 1e-12);
  }

  CHECK_THROWS_AS(rqc::rho_haar_min_eig(2, 7), std::length_error);
}
