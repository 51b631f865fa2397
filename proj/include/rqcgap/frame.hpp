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

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rqcgap/permutation.hpp"

namespace rqc {

/// Relative cutoff under which Gram eigenvalues are treated as zero when
/// computing ranks, pseudo-inverses and deviations. Needed because the
/// permutation states become linearly dependent as soon as t exceeds the
/// local dimension (for a two-site block that happens when t > d^2).
inline constexpr double kRankTolerance = 1e-10;

namespace detail {

/// q^e computed by repeated multiplication in double precision; exact
/// whenever q^e fits in 53 bits, monotone overflow to +inf otherwise.
inline double ipow(double q, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= q;
  return r;
}

}  // namespace detail

/// Inner product of two permutation states at local dimension q,
///   <psi_sigma,q | psi_pi,q> = q^{c(pi sigma^{-1}) - t},
/// where c counts cycles. Equals 1 iff pi == sigma whenever t <= q.
/// Throws std::invalid_argument on degree mismatch or q < 2.
inline double overlap(const Permutation& pi, const Permutation& sigma, long long q) {
  if (pi.degree() != sigma.degree())
    throw std::invalid_argument("overlap: permutation degree mismatch");
  if (q < 2) throw std::invalid_argument("overlap: q must be >= 2");
  const int t = pi.degree();
  const int c = pi.compose(sigma.inverse()).cycle_count();
  return 1.0 / detail::ipow(static_cast<double>(q), t - c);  // c <= t always
}

/// Entry of the tensor-power Gram matrix: overlap(pi, sigma, d)^n = d^{n(c-t)}.
/// Evaluated in log space so huge n underflows gracefully to 0.
inline double tensor_power_overlap(const Permutation& pi, const Permutation& sigma,
                                   int d, int n) {
  if (pi.degree() != sigma.degree())
    throw std::invalid_argument("tensor_power_overlap: degree mismatch");
  const int t = pi.degree();
  const int c = pi.compose(sigma.inverse()).cycle_count();
  if (c == t) return 1.0;
  return std::exp(-static_cast<double>(n) * static_cast<double>(t - c) *
                  std::log(static_cast<double>(d)));
}

/// Gram matrix of the t! permutation states at local dimension q together
/// with its Moore-Penrose pseudo-inverse (the dual-frame coefficients) and
/// numerical rank. Immutable value type.
struct FrameData {
  int t = 0;
  long long q = 0;
  Eigen::MatrixXd gram;  // gram(a, b) = overlap(group[a], group[b], q)
  Eigen::MatrixXd dual;  // pseudo-inverse of gram
  int rank = 0;
};

/// Pseudo-inverse of a symmetric PSD matrix via eigendecomposition,
/// zeroing eigenvalues below kRankTolerance * lambda_max. Also reports rank.
inline Eigen::MatrixXd pseudo_inverse_psd(const Eigen::MatrixXd& m, int* rank_out) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("pseudo_inverse_psd: eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cutoff = kRankTolerance * std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  int rank = 0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) > cutoff) {
      inv(k) = 1.0 / ev(k);
      ++rank;
    }
  }
  if (rank_out) *rank_out = rank;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

/// Builds the permutation-state frame at copy count t and local dimension q.
/// The dual matrix satisfies gram * dual * gram = gram to working precision;
/// rank equals t! exactly when t <= q.
inline FrameData build_frame(int t, long long q) {
  const auto group = enumerate_group(t);  // validates 1 <= t <= kMaxCopies
  const auto m = static_cast<Eigen::Index>(group.size());
  FrameData f;
  f.t = t;
  f.q = q;
  f.gram.resize(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b)
      f.gram(a, b) = overlap(group[a], group[b], q);
  f.dual = pseudo_inverse_psd(f.gram, &f.rank);
  return f;
}

/// Column sum of the n-fold tensor-power Gram matrix,
///   sum_pi |<psi_sigma,d | psi_pi,d>|^n = prod_{j=0}^{t-1} (d^n + j) / d^{tn},
/// independent of sigma. Evaluated as prod_j (1 + j d^{-n}) in extended
/// precision, which never overflows: for n beyond floating-point range the
/// factors underflow to 1 and the product tends to its true limit 1.
inline double column_sum(int t, int d, int n) {
  if (t < 1 || d < 2 || n < 1)
    throw std::invalid_argument("column_sum: need t >= 1, d >= 2, n >= 1");
  const long double dn_inv =
      std::exp(-static_cast<long double>(n) * std::log(static_cast<long double>(d)));
  long double prod = 1.0L;
  for (int j = 1; j < t; ++j) prod *= (1.0L + static_cast<long double>(j) * dn_inv);
  return static_cast<double>(prod);
}

/// The closed-form cap on column_sum valid when t^2 <= d^n: 1 + t^2 / d^n.
inline double column_sum_bound(int t, int d, int n) {
  const double dn_inv = std::exp(-static_cast<double>(n) * std::log(static_cast<double>(d)));
  return 1.0 + static_cast<double>(t) * static_cast<double>(t) * dn_inv;
}

/// Whether the precondition t^2 <= d^n of the column-sum / deviation caps
/// holds; compared in log space so large n never overflows.
inline bool frame_bound_applicable(int t, int d, int n) {
  return 2.0 * std::log(static_cast<double>(t)) <=
         static_cast<double>(n) * std::log(static_cast<double>(d)) + 1e-12;
}

/// Gram matrix of the n-fold product states psi_pi^{(x) n} at local dim d;
/// identical to the Gram at local dimension d^n but safe for huge n.
inline Eigen::MatrixXd tensor_power_gram(int t, int d, int n) {
  const auto group = enumerate_group(t);
  const auto m = static_cast<Eigen::Index>(group.size());
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b)
      g(a, b) = tensor_power_overlap(group[a], group[b], d, n);
  return g;
}

/// Orthonormal combinations of the (generally non-orthogonal, possibly
/// rank-deficient) product frame: row k of `coeffs` gives coefficients c so
/// that sum_pi c[pi] psi_pi^{(x) n} has unit norm and the rows are mutually
/// orthogonal. Built by symmetric orthogonalization of the tensor-power Gram.
struct GroundSpaceBasis {
  int t = 0;
  int rank = 0;
  Eigen::MatrixXd coeffs;  // rank x t!
};

inline GroundSpaceBasis ground_space_basis(int n, int t, int d) {
  const Eigen::MatrixXd g = tensor_power_gram(t, d, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("ground_space_basis: eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cutoff = kRankTolerance * std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  GroundSpaceBasis basis;
  basis.t = t;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev(k) > cutoff) keep.push_back(k);
  basis.rank = static_cast<int>(keep.size());
  basis.coeffs.resize(basis.rank, g.rows());
  for (std::size_t r = 0; r < keep.size(); ++r)
    basis.coeffs.row(static_cast<Eigen::Index>(r)) =
        es.eigenvectors().col(keep[r]).transpose() / std::sqrt(ev(keep[r]));
  return basis;
}

/// Operator-norm distance between the frame operator of the product states
/// and the orthogonal projector onto their span: max_k |lambda_k - 1| over
/// the nonzero eigenvalues of the tensor-power Gram (the frame operator and
/// the Gram share their nonzero spectrum). Zero for t = 1.
inline double frame_operator_deviation(int n, int t, int d) {
  const Eigen::MatrixXd g = tensor_power_gram(t, d, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("frame_operator_deviation: eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cutoff = kRankTolerance * std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  double dev = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev(k) > cutoff) dev = std::max(dev, std::abs(ev(k) - 1.0));
  return dev;
}

/// The cap on frame_operator_deviation valid when t^2 <= d^n: t^2 / d^n.
inline double frame_deviation_bound(int t, int d, int n) {
  return static_cast<double>(t) * static_cast<double>(t) *
         std::exp(-static_cast<double>(n) * std::log(static_cast<double>(d)));
}

}  // namespace rqc
