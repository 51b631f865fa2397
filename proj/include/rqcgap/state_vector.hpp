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
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "rqcgap/permutation.hpp"

namespace rqc {

/// Geometry of the doubled t-copy space on which moment operators act:
/// a chain of n sites, each carrying t forward and t conjugate copies of a
/// d-level system, so each site has local dimension d^{2t} and the full
/// space has dimension d^{2tn}.
///
/// Indexing convention (fixed everywhere in this library): amplitudes are
/// stored site-major with site 0 fastest.  Within a site the 2t legs are
/// ordered as (t forward copies, then t conjugate copies), least-significant
/// leg fastest, i.e. a site index decomposes as
///   x = sum_j a_j d^j + sum_j b_j d^{t+j}
/// with a_j the forward-copy digits and b_j the conjugate-copy digits.
struct Shape {
  int n;
  int t;
  long long d;

  Shape(int n_sites, int copies, long long local_d)
      : n(n_sites), t(copies), d(local_d) {
    if (n < 1) throw std::invalid_argument("Shape: need at least one site");
    if (t < 1 || t > kMaxCopies)
      throw std::invalid_argument("Shape: copy count out of range");
    if (d < 2) throw std::invalid_argument("Shape: local dimension must be >= 2");
    // Indices must fit comfortably in a signed 64-bit integer.
    if (2.0 * t * n * std::log2(static_cast<double>(d)) >= 62.0)
      throw std::invalid_argument("Shape: total dimension exceeds 2^62");
  }

  /// d^t: the dimension of one copy layer (forward or conjugate) of a site.
  long long copy_dim() const { return ipow_ll(d, t); }

  /// d^{2t}: the local dimension of one site of the doubled space.
  long long site_dim() const { return ipow_ll(d, 2 * t); }

  /// d^{4t}: the dimension of a two-site block.
  long long block_dim() const { return ipow_ll(d, 4 * t); }

  /// d^{2tn}: the dimension of the full state space.
  long long total_dim() const { return ipow_ll(d, 2 * t * n); }

  friend bool operator==(const Shape& a, const Shape& b) {
    return a.n == b.n && a.t == b.t && a.d == b.d;
  }

  static long long ipow_ll(long long base, int exp) {
    long long r = 1;
    for (int k = 0; k < exp; ++k) r *= base;
    return r;
  }
};

/// A vector in the doubled t-copy space, with a cached Euclidean norm.
/// Mutable access through data() invalidates the cache.
class StateVector {
 public:
  explicit StateVector(const Shape& shape)
      : shape_(shape), amp_(static_cast<size_t>(shape.total_dim())) {}

  /// Computational basis state |index>.
  static StateVector basis_state(const Shape& shape, long long index) {
    StateVector v(shape);
    if (index < 0 || index >= shape.total_dim())
      throw std::out_of_range("basis_state: index out of range");
    v.amp_[static_cast<size_t>(index)] = 1.0;
    return v;
  }

  /// Product state over sites: site_states[s] is the local vector of site s
  /// (length site_dim()).  Site 0 is the fastest-running index.
  static StateVector product_state(
      const Shape& shape, const std::vector<Eigen::VectorXcd>& site_states) {
    if (static_cast<int>(site_states.size()) != shape.n)
      throw std::invalid_argument("product_state: need one local vector per site");
    const long long sd = shape.site_dim();
    for (const auto& s : site_states)
      if (s.size() != sd)
        throw std::invalid_argument("product_state: local vector has wrong length");
    StateVector v(shape);
    std::vector<long long> digits(shape.n, 0);
    for (long long g = 0; g < shape.total_dim(); ++g) {
      long long rest = g;
      std::complex<double> a = 1.0;
      for (int s = 0; s < shape.n; ++s) {
        a *= site_states[s](rest % sd);
        rest /= sd;
      }
      v.amp_[static_cast<size_t>(g)] = a;
    }
    return v;
  }

  const Shape& shape() const { return shape_; }
  long long size() const { return static_cast<long long>(amp_.size()); }

  const std::complex<double>* data() const { return amp_.data(); }
  std::complex<double>* data() {
    norm_valid_ = false;
    return amp_.data();
  }

  std::complex<double> operator[](long long i) const {
    return amp_[static_cast<size_t>(i)];
  }

  /// Euclidean norm, cached until the amplitudes are next mutated.
  double norm() const {
    if (!norm_valid_) {
      long double s = 0.0L;
      for (const auto& a : amp_) s += std::norm(a);
      norm_ = static_cast<double>(std::sqrt(s));
      norm_valid_ = true;
    }
    return norm_;
  }

 private:
  Shape shape_;
  std::vector<std::complex<double>> amp_;
  mutable double norm_ = 0.0;
  mutable bool norm_valid_ = false;
};

}  // namespace rqc
