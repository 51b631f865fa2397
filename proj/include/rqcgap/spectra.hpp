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

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rqcgap/eigensolver.hpp"
#include "rqcgap/frame.hpp"
#include "rqcgap/moment_operator.hpp"
#include "rqcgap/state_vector.hpp"

namespace rqc {

enum class Quantity {
  kGLocal,
  kGParallel,
  kGapH,
  kDetectabilityNorm,
  kRhoHaarMinEig,
};

inline const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::kGLocal: return "g_local";
    case Quantity::kGParallel: return "g_parallel";
    case Quantity::kGapH: return "gap_H";
    case Quantity::kDetectabilityNorm: return "detectability_norm";
    case Quantity::kRhoHaarMinEig: return "rho_haar_min_eig";
  }
  return "unknown";
}

struct SpectralReport {
  Quantity quantity = Quantity::kGLocal;
  double value = 0.0;
  double residual = 0.0;
  long long iterations = 0;
  int n = 0;
  int t = 0;
  long long d = 0;
  int deflation_rank = 0;
  std::string method;
};

/// Raised when an eigensolve exhausts its iteration budget; carries the best
/// estimate so callers can still inspect or report it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& msg, SpectralReport best)
      : std::runtime_error(msg), best_(std::move(best)) {}
  const SpectralReport& best() const { return best_; }

 private:
  SpectralReport best_;
};

namespace detail {

inline SpectralReport finish(Quantity q, const Shape& shape, int rank,
                             const SolverResult& r) {
  SpectralReport rep;
  rep.quantity = q;
  rep.value = r.value;
  rep.residual = r.residual;
  rep.iterations = r.iterations;
  rep.n = shape.n;
  rep.t = shape.t;
  rep.d = shape.d;
  rep.deflation_rank = rank;
  rep.method = r.method;
  if (!r.converged)
    throw ConvergenceError("eigensolver did not reach tolerance within "
                           "the iteration budget",
                           rep);
  return rep;
}

}  // namespace detail

/// Second-largest eigenvalue of a walk operator (LocalMoment or
/// ParallelMoment): the eigenvalue-1 ground space is removed exactly by
/// analytic deflation, so the dominant eigenvalue of the deflated operator
/// is the walk's second eigenvalue, i.e. its tensor-product-expander value.
inline SpectralReport second_eigenvalue(const MomentOperator& op,
                                        const SolverOptions& opts = {}) {
  const OperatorKind kind = op.kind();
  if (kind != OperatorKind::kLocalMoment &&
      kind != OperatorKind::kParallelMoment)
    throw std::invalid_argument(
        "second_eigenvalue: operator must be a walk moment operator");
  const Shape& shape = op.shape();
  GroundSpaceDeflator deflator(shape);
  ApplyWorkspace<double> ws;
  const ApplyFn apply = [&](const double* in, double* out) {
    op.apply(in, out, ws);
  };
  const DeflateFn deflate = [&](double* v) { deflator.project_out(v); };
  const SolverResult r =
      largest_eigenvalue(shape.total_dim(), apply, deflate, opts);
  const Quantity q = (kind == OperatorKind::kLocalMoment)
                         ? Quantity::kGLocal
                         : Quantity::kGParallel;
  return detail::finish(q, shape, deflator.rank(), r);
}

/// Second eigenvalue of the k-fold applied walk operator (the walk run for
/// k steps); equals second_eigenvalue(op)^k up to solver tolerance.
inline SpectralReport convolved_second_eigenvalue(const MomentOperator& op,
                                                  int k,
                                                  const SolverOptions& opts = {}) {
  if (k < 1) throw std::invalid_argument("convolved_second_eigenvalue: k >= 1");
  const OperatorKind kind = op.kind();
  if (kind != OperatorKind::kLocalMoment &&
      kind != OperatorKind::kParallelMoment)
    throw std::invalid_argument(
        "convolved_second_eigenvalue: operator must be a walk moment operator");
  const Shape& shape = op.shape();
  GroundSpaceDeflator deflator(shape);
  ApplyWorkspace<double> ws;
  std::vector<double> mid_a(static_cast<size_t>(shape.total_dim()));
  std::vector<double> mid_b(static_cast<size_t>(shape.total_dim()));
  const ApplyFn apply = [&](const double* in, double* out) {
    const double* cur = in;
    for (int step = 0; step < k; ++step) {
      // Alternate scratch buffers: apply() requires disjoint in/out.
      double* dst = (step == k - 1) ? out
                    : (cur == mid_a.data()) ? mid_b.data()
                                            : mid_a.data();
      op.apply(cur, dst, ws);
      deflator.project_out(dst);
      cur = dst;
    }
  };
  const DeflateFn deflate = [](double*) {};  // deflated inside apply
  const SolverResult r =
      largest_eigenvalue(shape.total_dim(), apply, deflate, opts);
  const Quantity q = (kind == OperatorKind::kLocalMoment)
                         ? Quantity::kGLocal
                         : Quantity::kGParallel;
  return detail::finish(q, shape, deflator.rank(), r);
}

/// Spectral gap of the chain Hamiltonian, via the exact algebraic identity
/// gap = (n-1) * (1 - lambda_2(LocalMoment)).
inline SpectralReport hamiltonian_gap(int n, int t, long long d,
                                      const SolverOptions& opts = {}) {
  Shape shape(n, t, d);
  SpectralReport rep =
      second_eigenvalue(MomentOperator::local_moment(shape), opts);
  rep.quantity = Quantity::kGapH;
  const double scale = static_cast<double>(n - 1);
  rep.value = scale * (1.0 - rep.value);
  rep.residual *= scale;
  return rep;
}

/// Operator-norm distance between the product of the two layer projectors
/// and the ground-space projector: the largest singular value of
/// P_odd P_even - P_c, computed as sqrt(lambda_max(E O E - P_c)) with one
/// power/Lanczos solve on the composite map.
inline SpectralReport detectability_norm(int n, int t, long long d,
                                         const SolverOptions& opts = {}) {
  Shape shape(n, t, d);
  MomentOperator odd = MomentOperator::odd_product(shape);
  MomentOperator even = MomentOperator::even_product(shape);
  GroundSpaceDeflator deflator(shape);
  ApplyWorkspace<double> ws;
  std::vector<double> buf_a(static_cast<size_t>(shape.total_dim()));
  std::vector<double> buf_b(static_cast<size_t>(shape.total_dim()));
  const ApplyFn apply = [&](const double* in, double* out) {
    even.apply(in, buf_a.data(), ws);
    odd.apply(buf_a.data(), buf_b.data(), ws);
    even.apply(buf_b.data(), out, ws);
  };
  const DeflateFn deflate = [&](double* v) { deflator.project_out(v); };
  const SolverResult r =
      largest_eigenvalue(shape.total_dim(), apply, deflate, opts);
  SolverResult converted = r;
  converted.value = std::sqrt(std::max(0.0, r.value));
  return detail::finish(Quantity::kDetectabilityNorm, shape, deflator.rank(),
                        converted);
}

/// Minimum support eigenvalue of the twirled maximally entangled state: the
/// global frame projector at q = N is applied to one index pair of the
/// realigned state, which is then realigned back and eigendecomposed.
/// Dense computation, refused above `guard` dimensions.
inline SpectralReport rho_haar_min_eig(long long n_levels, int t,
                                       long long guard = 4096) {
  if (n_levels < 2)
    throw std::invalid_argument("rho_haar_min_eig: need N >= 2");
  const long long dim_a = Shape::ipow_ll(n_levels, t);  // N^t
  const long long dim = dim_a * dim_a;                  // N^{2t}
  if (dim > guard)
    throw std::length_error("rho_haar_min_eig: N^{2t} exceeds dense guard");

  FrameData frame = build_frame(t, n_levels);
  const auto group = enumerate_group(t);
  Eigen::MatrixXd twirl = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<Eigen::VectorXd> states;
  states.reserve(group.size());
  for (const auto& pi : group)
    states.push_back(site_permutation_state(t, n_levels, pi));
  for (size_t a = 0; a < group.size(); ++a)
    for (size_t b = 0; b < group.size(); ++b)
      twirl.noalias() += frame.dual(static_cast<Eigen::Index>(a),
                                    static_cast<Eigen::Index>(b)) *
                         states[a] * states[b].transpose();

  // rho[(a,b),(a2,b2)] = twirl[(a,a2),(b,b2)] / N^t
  Eigen::MatrixXd rho(dim, dim);
  for (long long a = 0; a < dim_a; ++a)
    for (long long b = 0; b < dim_a; ++b)
      for (long long a2 = 0; a2 < dim_a; ++a2)
        for (long long b2 = 0; b2 < dim_a; ++b2)
          rho(a + dim_a * b, a2 + dim_a * b2) =
              twirl(a + dim_a * a2, b + dim_a * b2) /
              static_cast<double>(dim_a);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  double min_support = top;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > kRankTolerance * top)
      min_support = std::min(min_support, ev(i));

  SpectralReport rep;
  rep.quantity = Quantity::kRhoHaarMinEig;
  rep.value = min_support;
  rep.residual = 0.0;
  rep.iterations = 0;
  rep.n = 1;
  rep.t = t;
  rep.d = n_levels;
  rep.deflation_rank = 0;
  rep.method = "dense";
  return rep;
}

}  // namespace rqc
