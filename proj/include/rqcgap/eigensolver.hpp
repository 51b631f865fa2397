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

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "rqcgap/rng.hpp"

namespace rqc {

struct SolverOptions {
  double tol = 1e-8;                  // residual ||Av - lambda v|| at ||v||=1
  long long max_iter = 1000000;       // total operator applications
  uint64_t seed = 0;                  // start-vector stream
  long long power_iter_limit = 10000; // switch to Lanczos past this
  int lanczos_basis = 16;             // thick-restart subspace size
};

struct SolverResult {
  double value = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  long long iterations = 0;
  bool converged = false;
  std::string method = "power";
};

using ApplyFn = std::function<void(const double*, double*)>;
using DeflateFn = std::function<void(double*)>;

/// Largest eigenvalue of a symmetric positive-semidefinite operator,
/// restricted to the orthogonal complement of a known invariant subspace.
///
/// `apply` computes out = A in on length-`dim` buffers; `deflate` projects a
/// vector onto the complement in place and is called on the start vector and
/// after every operator application, so iterates never re-acquire components
/// along the deflated space.  Power iteration runs first; if it has not met
/// the tolerance within `power_iter_limit` applications, a thick-restart
/// Lanczos process takes over until `max_iter`.  All randomness comes from
/// the seeded generator, so results are reproducible.
inline SolverResult largest_eigenvalue(long long dim, const ApplyFn& apply,
                                       const DeflateFn& deflate,
                                       const SolverOptions& opts) {
  SolverResult res;
  Eigen::VectorXd x(dim), y(dim);

  uint64_t stream = 0;
  const auto redraw = [&]() {
    Rng rng(opts.seed, stream++);
    for (long long i = 0; i < dim; ++i) x(i) = 2.0 * rng.uniform() - 1.0;
    deflate(x.data());
    return x.norm();
  };
  double nx = 0.0;
  for (int attempt = 0; attempt < 5 && nx < 1e-12; ++attempt) nx = redraw();
  if (nx < 1e-12) {
    // The complement is (numerically) empty; the restricted operator is 0.
    res.value = 0.0;
    res.residual = 0.0;
    res.converged = true;
    return res;
  }
  x /= nx;

  // --- Power iteration ---------------------------------------------------
  double lambda = 0.0;
  double prev = std::numeric_limits<double>::quiet_NaN();
  int stagnant = 0;
  bool redrawn = false;
  const long long power_budget = std::min(opts.power_iter_limit, opts.max_iter);
  while (res.iterations < power_budget) {
    apply(x.data(), y.data());
    deflate(y.data());
    ++res.iterations;
    lambda = x.dot(y);
    const double resid = (y - lambda * x).norm();
    res.value = lambda;
    res.residual = resid;
    if (resid <= opts.tol) {
      res.converged = true;
      return res;
    }
    const double ny = y.norm();
    if (ny < 1e-300) {
      // A annihilates the deflated space along this direction; with a PSD
      // operator this means lambda_max = 0 on the complement.
      res.value = 0.0;
      res.residual = ny;
      res.converged = true;
      return res;
    }
    x = y / ny;
    if (std::abs(lambda - prev) < 1e-14 * std::max(1.0, std::abs(lambda))) {
      if (++stagnant >= 100 && !redrawn) {
        nx = redraw();
        if (nx >= 1e-12) x /= nx;
        redrawn = true;
        stagnant = 0;
        prev = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
    } else {
      stagnant = 0;
    }
    prev = lambda;
  }
  if (res.iterations >= opts.max_iter) return res;

  // --- Thick-restart Lanczos ----------------------------------------------
  res.method = "lanczos";
  const int m = std::max(3, opts.lanczos_basis);
  const int keep = std::min(4, m - 2);
  Eigen::MatrixXd basis(dim, m + 1);
  Eigen::MatrixXd tmat = Eigen::MatrixXd::Zero(m + 1, m + 1);
  Eigen::VectorXd h1(m + 1), h2(m + 1);
  basis.col(0) = x;
  int j0 = 0;

  while (res.iterations < opts.max_iter) {
    int j = j0;
    bool breakdown = false;
    for (; j < m && res.iterations < opts.max_iter; ++j) {
      apply(basis.col(j).data(), y.data());
      deflate(y.data());
      ++res.iterations;
      // Full reorthogonalization (two classical Gram-Schmidt passes); the
      // first-pass coefficients are the projection entries of T, including
      // the arrow couplings present right after a thick restart.
      auto prefix = basis.leftCols(j + 1);
      h1.head(j + 1).noalias() = prefix.transpose() * y;
      y.noalias() -= prefix * h1.head(j + 1);
      h2.head(j + 1).noalias() = prefix.transpose() * y;
      y.noalias() -= prefix * h2.head(j + 1);
      for (int i = 0; i <= j; ++i) {
        const double v = h1(i) + h2(i);
        tmat(i, j) = v;
        tmat(j, i) = v;
      }
      const double beta = y.norm();
      if (beta <= 1e-13 * std::max(1.0, std::abs(res.value))) {
        breakdown = true;
        ++j;
        break;
      }
      tmat(j + 1, j) = beta;
      tmat(j, j + 1) = beta;
      basis.col(j + 1) = y / beta;
    }

    const int nb = j;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        tmat.topLeftCorner(nb, nb));
    const double theta = es.eigenvalues()(nb - 1);
    const double beta_last = breakdown ? 0.0 : tmat(nb, nb - 1);
    const double est = std::abs(beta_last * es.eigenvectors()(nb - 1, nb - 1));
    res.value = theta;
    res.residual = est;

    if ((est <= opts.tol || breakdown) && res.iterations < opts.max_iter) {
      // Promising: form the Ritz vector and measure the residual for real.
      x.noalias() = basis.leftCols(nb) * es.eigenvectors().col(nb - 1);
      x.normalize();
      apply(x.data(), y.data());
      deflate(y.data());
      ++res.iterations;
      lambda = x.dot(y);
      const double resid = (y - lambda * x).norm();
      res.value = lambda;
      res.residual = resid;
      if (resid <= opts.tol) {
        res.converged = true;
        return res;
      }
    }

    if (breakdown) {
      // Invariant subspace exhausted without convergence: start afresh from
      // a new random deflated vector.
      nx = redraw();
      if (nx < 1e-12) return res;
      basis.col(0) = x / nx;
      tmat.setZero();
      j0 = 0;
      continue;
    }

    // Thick restart: keep the top Ritz pairs plus the next Lanczos vector.
    Eigen::MatrixXd ykeep = es.eigenvectors().rightCols(keep);
    Eigen::MatrixXd unew = basis.leftCols(nb) * ykeep;
    basis.leftCols(keep) = unew;
    basis.col(keep) = basis.col(nb);
    tmat.setZero();
    for (int i = 0; i < keep; ++i) {
      tmat(i, i) = es.eigenvalues()(nb - keep + i);
      const double s = beta_last * ykeep(nb - 1, i);
      tmat(i, keep) = s;
      tmat(keep, i) = s;
    }
    j0 = keep;
  }
  return res;
}

}  // namespace rqc
