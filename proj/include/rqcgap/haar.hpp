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

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/QR>

#include "rqcgap/rng.hpp"

namespace rqc {

/// Draws a Haar-distributed q x q unitary.
///
/// Method: fill a Ginibre matrix with i.i.d. standard complex Gaussians,
/// take its QR decomposition, and fix the gauge by multiplying column j of
/// Q with the phase of R_jj.  The phase correction makes the distribution
/// exactly Haar (plain QR alone is biased by the sign convention of R).
///
/// Draw order is fixed: columns outer, rows inner, real part before
/// imaginary part, so a given (seed, stream) always yields the same gate.
inline Eigen::MatrixXcd sample_haar_gate(long long q, Rng& rng) {
  if (q < 2) throw std::invalid_argument("sample_haar_gate: need q >= 2");
  Eigen::MatrixXcd g(q, q);
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  for (long long j = 0; j < q; ++j) {
    for (long long i = 0; i < q; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = std::complex<double>(re * kInvSqrt2, im * kInvSqrt2);
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd u = qr.householderQ() * Eigen::MatrixXcd::Identity(q, q);
  const Eigen::MatrixXcd& qrm = qr.matrixQR();
  for (long long j = 0; j < q; ++j) {
    const std::complex<double> r = qrm(j, j);
    const double a = std::abs(r);
    if (a > 0.0) u.col(j) *= r / a;
  }
  return u;
}

/// Max-norm deviation from unitarity, ||U^dagger U - I||_inf.
inline double unitarity_defect(const Eigen::MatrixXcd& u) {
  Eigen::MatrixXcd r = u.adjoint() * u;
  r -= Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return r.cwiseAbs().maxCoeff();
}

}  // namespace rqc
