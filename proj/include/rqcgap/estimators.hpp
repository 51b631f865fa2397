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
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rqcgap/circuit.hpp"

namespace rqc {

/// Monte Carlo estimate with its standard error and the sampling coordinates
/// needed to reproduce it exactly.
struct EstimatorResult {
  double estimate = 0.0;
  double std_error = 0.0;
  long long samples = 0;
  std::uint64_t seed = 0;
  CircuitModel model = CircuitModel::kLR;
  int n = 0;
  long long d = 0;
  int steps = 0;
  int t = 0;
};

/// Frame potential of the circuit ensemble: the mean of |tr(U^dag V)|^{2t}
/// over independent circuit pairs (U, V). Sample i uses RNG streams 2i and
/// 2i+1 of `seed`, so the estimate is reproducible regardless of scheduling.
/// Full d^n x d^n unitaries are materialized, so n log2(d) <= 12 is required;
/// steps = 0 short-circuits to the exact identity value d^{2tn}.
inline EstimatorResult frame_potential(
    CircuitModel model, int n, long long d, int steps, int t,
    long long samples, std::uint64_t seed,
    const std::vector<Eigen::MatrixXcd>* gate_set = nullptr) {
  if (t < 1 || t > 6)
    throw std::invalid_argument("frame_potential: need 1 <= t <= 6");
  if (samples < 1)
    throw std::invalid_argument("frame_potential: need samples >= 1");
  if (n < 2) throw std::invalid_argument("frame_potential: need n >= 2");
  if (d < 2) throw std::invalid_argument("frame_potential: need d >= 2");
  const long long dim = Shape::ipow_ll(d, n);
  if (dim > 4096)
    throw std::length_error("frame_potential: d^n exceeds the dense guard");

  EstimatorResult res;
  res.samples = samples;
  res.seed = seed;
  res.model = model;
  res.n = n;
  res.d = d;
  res.steps = steps;
  res.t = t;

  if (steps == 0) {
    // Every circuit is the identity: |tr I|^{2t} = d^{2tn} with no variance.
    double value = 1.0;
    for (int k = 0; k < 2 * t * n; ++k) value *= static_cast<double>(d);
    res.estimate = value;
    res.std_error = 0.0;
    return res;
  }

  std::vector<double> values(static_cast<size_t>(samples));
  for (long long i = 0; i < samples; ++i) {
    const CircuitSample cu = sample_circuit(
        model, n, d, steps, seed, static_cast<std::uint64_t>(2 * i), gate_set);
    const CircuitSample cv =
        sample_circuit(model, n, d, steps, seed,
                       static_cast<std::uint64_t>(2 * i + 1), gate_set);
    const Eigen::MatrixXcd u = circuit_unitary(cu);
    const Eigen::MatrixXcd v = circuit_unitary(cv);
    const std::complex<double> tr = u.conjugate().cwiseProduct(v).sum();
    values[static_cast<size_t>(i)] =
        std::pow(std::norm(tr), static_cast<double>(t));
  }

  long double mean = 0.0L;
  for (double x : values) mean += x;
  mean /= static_cast<long double>(samples);
  res.estimate = static_cast<double>(mean);
  if (samples > 1) {
    long double ss = 0.0L;
    for (double x : values) {
      const long double dev = x - mean;
      ss += dev * dev;
    }
    const long double var = ss / static_cast<long double>(samples - 1);
    res.std_error = static_cast<double>(
        std::sqrt(var / static_cast<long double>(samples)));
  }
  return res;
}

/// Maxima, over all contiguous regions X of length 1..region_len, of the
/// three diagnostics of the topological-order experiment: the trace distance
/// of each evolved state's reduced density matrix from the maximally mixed
/// state, and the trace norm of the reduced off-diagonal block.
struct TqoResult {
  double max_state0_distance = 0.0;
  double max_state1_distance = 0.0;
  double max_offdiag_norm = 0.0;
  int n = 0;
  long long d = 0;
  int steps = 0;
  int region_len = 0;
  std::uint64_t seed = 0;
};

namespace detail {

/// Trace distance ||m - I/q||_1 of a Hermitian q x q density matrix from
/// the maximally mixed state: the absolute eigenvalue sum of the difference.
inline double trace_distance_from_mixed(const Eigen::MatrixXcd& m) {
  const long long q = m.rows();
  Eigen::MatrixXcd diff = m;
  diff.diagonal().array() -= 1.0 / static_cast<double>(q);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff,
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

/// Trace norm ||m||_1 of a general complex matrix: its singular value sum.
inline double trace_norm(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().sum();
}

}  // namespace detail

/// Samples one PLR circuit of `steps` layers, evolves the two orthonormal
/// initial states through it, and scans every contiguous region of length
/// up to region_len. The region ceiling is capped at n/4.
inline TqoResult tqo_experiment(int n, long long d, int steps, int region_len,
                                std::uint64_t seed, const QuditState& psi0,
                                const QuditState& psi1,
                                long long guard = 1LL << 26) {
  if (region_len < 1)
    throw std::invalid_argument("tqo_experiment: need region_len >= 1");
  if (4 * region_len > n)
    throw std::invalid_argument("tqo_experiment: need region_len <= n/4");
  if (psi0.n() != n || psi0.d() != d || psi1.n() != n || psi1.d() != d)
    throw std::invalid_argument("tqo_experiment: state shape mismatch");
  if (std::abs(psi0.norm() - 1.0) > 1e-10 ||
      std::abs(psi1.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("tqo_experiment: states must be normalized");
  if (std::abs(psi0.inner(psi1)) > 1e-10)
    throw std::invalid_argument("tqo_experiment: states must be orthogonal");

  const CircuitSample c = sample_circuit(CircuitModel::kPLR, n, d, steps, seed);
  const QuditState phi0 = simulate_statevector(c, psi0, guard);
  const QuditState phi1 = simulate_statevector(c, psi1, guard);
  const long long dim = phi0.dim();

  TqoResult res;
  res.n = n;
  res.d = d;
  res.steps = steps;
  res.region_len = region_len;
  res.seed = seed;

  Eigen::VectorXcd u0, u1;
  for (int len = 1; len <= region_len; ++len) {
    const long long q = Shape::ipow_ll(d, len);
    u0.resize(q);
    u1.resize(q);
    for (int start = 0; start + len <= n; ++start) {
      const long long stride = Shape::ipow_ll(d, start);
      const long long block = stride * q;
      Eigen::MatrixXcd rho00 = Eigen::MatrixXcd::Zero(q, q);
      Eigen::MatrixXcd rho11 = Eigen::MatrixXcd::Zero(q, q);
      Eigen::MatrixXcd rho01 = Eigen::MatrixXcd::Zero(q, q);
      for (long long base_h = 0; base_h < dim; base_h += block) {
        for (long long lo = 0; lo < stride; ++lo) {
          const long long base = base_h + lo;
          for (long long y = 0; y < q; ++y) {
            u0(y) = phi0[base + stride * y];
            u1(y) = phi1[base + stride * y];
          }
          rho00.noalias() += u0 * u0.adjoint();
          rho11.noalias() += u1 * u1.adjoint();
          rho01.noalias() += u0 * u1.adjoint();
        }
      }
      res.max_state0_distance = std::max(
          res.max_state0_distance, detail::trace_distance_from_mixed(rho00));
      res.max_state1_distance = std::max(
          res.max_state1_distance, detail::trace_distance_from_mixed(rho11));
      res.max_offdiag_norm =
          std::max(res.max_offdiag_norm, detail::trace_norm(rho01));
    }
  }
  return res;
}

}  // namespace rqc
