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
#include <complex>
#include <cstdint>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "rqcgap/haar.hpp"
#include "rqcgap/rng.hpp"
#include "rqcgap/state_vector.hpp"

namespace rqc {

/// Circuit ensembles: LR picks one uniformly random nearest-neighbour pair
/// per step; PLR applies a full brickwork layer per step (odd pairs or even
/// pairs, a fair coin each step); GLocal is LR with gates drawn uniformly
/// from a fixed user-supplied set instead of from the Haar measure.
enum class CircuitModel { kLR, kPLR, kGLocal };

inline const char* circuit_model_name(CircuitModel m) {
  switch (m) {
    case CircuitModel::kLR: return "LR";
    case CircuitModel::kPLR: return "PLR";
    case CircuitModel::kGLocal: return "GLocal";
  }
  return "?";
}

/// One two-site gate: `site` is 1-based, acting on qudits (site, site+1).
struct Gate {
  int site = 1;
  Eigen::MatrixXcd matrix;  ///< d^2 x d^2 unitary
};

/// A fully sampled circuit realization: the ordered gate list produced by
/// `steps` draws of the model's update rule, plus the RNG coordinates that
/// generated it (stream allows many independent circuits per master seed).
struct CircuitSample {
  CircuitModel model = CircuitModel::kLR;
  int n = 2;
  long long d = 2;
  int steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::vector<Gate> gates;
};

/// State of n qudits on the single-copy space (C^d)^{tensor n}, stored
/// site-major with site 0 fastest: index x = sum_j x_j d^j. This is the
/// plain simulation space, not the 2t-copy space used by StateVector.
class QuditState {
 public:
  /// Maximum amplitude count; the constructor refuses anything larger.
  static constexpr long long kMaxAmplitudes = 1LL << 26;

  QuditState(int n, long long d) : n_(n), d_(d) {
    if (n < 1) throw std::invalid_argument("QuditState: need n >= 1");
    if (d < 2) throw std::invalid_argument("QuditState: need d >= 2");
    dim_ = 1;
    for (int j = 0; j < n; ++j) {
      if (dim_ > kMaxAmplitudes / d)
        throw std::length_error("QuditState: d^n exceeds the memory guard");
      dim_ *= d;
    }
    amp_.assign(static_cast<size_t>(dim_), {0.0, 0.0});
  }

  static QuditState basis_state(int n, long long d, long long index) {
    QuditState s(n, d);
    if (index < 0 || index >= s.dim_)
      throw std::out_of_range("QuditState::basis_state: index out of range");
    s.amp_[static_cast<size_t>(index)] = {1.0, 0.0};
    return s;
  }

  int n() const { return n_; }
  long long d() const { return d_; }
  long long dim() const { return dim_; }
  std::complex<double>* data() { return amp_.data(); }
  const std::complex<double>* data() const { return amp_.data(); }
  std::complex<double>& operator[](long long i) {
    return amp_[static_cast<size_t>(i)];
  }
  const std::complex<double>& operator[](long long i) const {
    return amp_[static_cast<size_t>(i)];
  }

  double norm() const {
    long double acc = 0.0L;
    for (const auto& a : amp_) acc += std::norm(a);
    return static_cast<double>(std::sqrt(acc));
  }

  /// Hermitian inner product <this|other>.
  std::complex<double> inner(const QuditState& other) const {
    if (other.dim_ != dim_)
      throw std::invalid_argument("QuditState::inner: dimension mismatch");
    std::complex<long double> acc = 0.0L;
    for (size_t i = 0; i < amp_.size(); ++i)
      acc += std::complex<long double>(std::conj(amp_[i]) * other.amp_[i]);
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  }

 private:
  int n_;
  long long d_;
  long long dim_ = 1;
  std::vector<std::complex<double>> amp_;
};

namespace detail {

/// Applies a two-site gate to a raw amplitude array of length `dim`.
/// The gate acts on qudits (site-1, site) in 0-based terms; the local pair
/// index is y = x_lower + d * x_upper, matching the site-major layout.
inline void apply_gate_raw(std::complex<double>* amp, long long dim,
                           long long d, const Gate& gate) {
  const long long q = d * d;
  const long long stride = Shape::ipow_ll(d, gate.site - 1);
  const long long block = stride * q;
  Eigen::VectorXcd in(q), out(q);
  for (long long base_h = 0; base_h < dim; base_h += block) {
    for (long long lo = 0; lo < stride; ++lo) {
      const long long base = base_h + lo;
      for (long long y = 0; y < q; ++y) in(y) = amp[base + stride * y];
      out.noalias() = gate.matrix * in;
      for (long long y = 0; y < q; ++y) amp[base + stride * y] = out(y);
    }
  }
}

}  // namespace detail

/// Checks the structural invariants of a circuit sample: site indices in
/// [1, n-1], all matrices d^2 x d^2 and unitary within 1e-12.
inline void validate_circuit(const CircuitSample& c) {
  if (c.n < 2) throw std::invalid_argument("CircuitSample: need n >= 2");
  if (c.d < 2) throw std::invalid_argument("CircuitSample: need d >= 2");
  if (c.steps < 0) throw std::invalid_argument("CircuitSample: steps >= 0");
  const long long q = c.d * c.d;
  for (const Gate& g : c.gates) {
    if (g.site < 1 || g.site > c.n - 1)
      throw std::invalid_argument("CircuitSample: gate site out of range");
    if (g.matrix.rows() != q || g.matrix.cols() != q)
      throw std::invalid_argument("CircuitSample: gate matrix is not d^2 x d^2");
    if (unitarity_defect(g.matrix) > 1e-12)
      throw std::invalid_argument("CircuitSample: gate matrix is not unitary");
  }
}

/// Draws one circuit realization. Per step, LR draws the site first and the
/// Haar gate second; PLR draws one fair coin (< 0.5 selects the odd layer,
/// pairs (1,2),(3,4),...) and then fresh Haar gates in ascending site order;
/// GLocal draws the site first and a uniform index into `gate_set` second.
/// PLR requires even n; the even layer at n = 2 is empty.
inline CircuitSample sample_circuit(
    CircuitModel model, int n, long long d, int steps, std::uint64_t seed,
    std::uint64_t stream = 0,
    const std::vector<Eigen::MatrixXcd>* gate_set = nullptr) {
  if (n < 2) throw std::invalid_argument("sample_circuit: need n >= 2");
  if (d < 2) throw std::invalid_argument("sample_circuit: need d >= 2");
  if (steps < 0) throw std::invalid_argument("sample_circuit: steps >= 0");
  const long long q = d * d;
  if (model == CircuitModel::kPLR && n % 2 != 0)
    throw std::invalid_argument(
        "sample_circuit: the PLR layering is defined for even n only");
  if (model == CircuitModel::kGLocal) {
    if (gate_set == nullptr || gate_set->empty())
      throw std::invalid_argument("sample_circuit: GLocal needs a gate set");
    for (const auto& u : *gate_set) {
      if (u.rows() != q || u.cols() != q)
        throw std::invalid_argument(
            "sample_circuit: gate-set matrix is not d^2 x d^2");
      if (unitarity_defect(u) > 1e-12)
        throw std::invalid_argument(
            "sample_circuit: gate-set matrix is not unitary");
    }
  }

  CircuitSample c;
  c.model = model;
  c.n = n;
  c.d = d;
  c.steps = steps;
  c.seed = seed;
  c.stream = stream;
  Rng rng(seed, stream);
  for (int step = 0; step < steps; ++step) {
    switch (model) {
      case CircuitModel::kLR: {
        const int site = 1 + static_cast<int>(rng.uniform_int(
                                 static_cast<std::uint64_t>(n - 1)));
        c.gates.push_back({site, sample_haar_gate(q, rng)});
        break;
      }
      case CircuitModel::kPLR: {
        const int first = (rng.uniform() < 0.5) ? 1 : 2;
        for (int site = first; site + 1 <= n; site += 2)
          c.gates.push_back({site, sample_haar_gate(q, rng)});
        break;
      }
      case CircuitModel::kGLocal: {
        const int site = 1 + static_cast<int>(rng.uniform_int(
                                 static_cast<std::uint64_t>(n - 1)));
        const auto idx = rng.uniform_int(gate_set->size());
        c.gates.push_back({site, (*gate_set)[static_cast<size_t>(idx)]});
        break;
      }
    }
  }
  return c;
}

/// Applies the circuit's gates in order to a copy of `initial`.
inline QuditState simulate_statevector(const CircuitSample& c,
                                       QuditState initial,
                                       long long guard = 1LL << 26) {
  validate_circuit(c);
  if (initial.n() != c.n || initial.d() != c.d)
    throw std::invalid_argument("simulate_statevector: state/circuit mismatch");
  if (initial.dim() > guard)
    throw std::length_error("simulate_statevector: d^n exceeds the guard");
  for (const Gate& g : c.gates)
    detail::apply_gate_raw(initial.data(), initial.dim(), c.d, g);
  return initial;
}

/// Materializes the full d^n x d^n circuit unitary by running every gate
/// over the columns of an identity matrix. Refused above `guard` dimension.
inline Eigen::MatrixXcd circuit_unitary(const CircuitSample& c,
                                        long long guard = 4096) {
  validate_circuit(c);
  const long long dim = Shape::ipow_ll(c.d, c.n);
  if (dim > guard)
    throw std::length_error("circuit_unitary: d^n exceeds the dense guard");
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const Gate& g : c.gates)
    for (long long col = 0; col < dim; ++col)
      detail::apply_gate_raw(u.col(col).data(), dim, c.d, g);
  return u;
}

/// Loads a GLocal gate set from a JSON file of the form
///   {"d": 2, "gates": [[[re, im], ...d^4 pairs, row-major], ...]}
/// and validates that every matrix is a d^2 x d^2 unitary within 1e-12.
inline std::vector<Eigen::MatrixXcd> load_gate_set(const std::string& path,
                                                   long long d) {
  if (d < 2) throw std::invalid_argument("load_gate_set: need d >= 2");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_gate_set: cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("load_gate_set: JSON parse error: " +
                             std::string(e.what()));
  }
  if (!doc.is_object() || !doc.contains("d") || !doc.contains("gates"))
    throw std::invalid_argument(
        "load_gate_set: expected an object with keys \"d\" and \"gates\"");
  if (!doc["d"].is_number_integer() || doc["d"].get<long long>() != d)
    throw std::invalid_argument(
        "load_gate_set: file qudit dimension does not match the requested d");
  const long long q = d * d;
  std::vector<Eigen::MatrixXcd> set;
  for (const auto& entry : doc["gates"]) {
    if (!entry.is_array() || entry.size() != static_cast<size_t>(q * q))
      throw std::invalid_argument(
          "load_gate_set: each gate needs d^4 row-major [re, im] pairs");
    Eigen::MatrixXcd u(q, q);
    for (long long r = 0; r < q; ++r) {
      for (long long col = 0; col < q; ++col) {
        const auto& pair = entry[static_cast<size_t>(r * q + col)];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
            !pair[1].is_number())
          throw std::invalid_argument(
              "load_gate_set: matrix entries must be [re, im] pairs");
        u(r, col) = {pair[0].get<double>(), pair[1].get<double>()};
      }
    }
    if (unitarity_defect(u) > 1e-12)
      throw std::invalid_argument(
          "load_gate_set: a gate fails the unitarity check");
    set.push_back(std::move(u));
  }
  if (set.empty())
    throw std::invalid_argument("load_gate_set: the gate list is empty");
  return set;
}

}  // namespace rqc
