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
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "rqcgap/frame.hpp"
#include "rqcgap/permutation.hpp"
#include "rqcgap/state_vector.hpp"

namespace rqc {

namespace detail {

/// Image of a copy-layer index l (t base-d digits) under a leg permutation:
/// digit j of l becomes digit pi(j) of the result.
inline long long permute_copy_index(const Permutation& pi, long long l,
                                    long long d) {
  const int t = pi.degree();
  long long m = 0;
  long long rest = l;
  for (int j = 0; j < t; ++j) {
    const long long digit = rest % d;
    rest /= d;
    long long place = 1;
    for (int k = 0; k < pi(j); ++k) place *= d;
    m += digit * place;
  }
  return m;
}

}  // namespace detail

/// Nonzero positions of the one-site permutation state for pi: the site
/// index l + d^t * m runs over all copy-layer indices l, with m the
/// pi-permuted image of l.  All d^t nonzero amplitudes equal d^{-t/2}.
inline std::vector<long long> single_site_support(int t, long long d,
                                                  const Permutation& pi) {
  const long long copy_dim = Shape::ipow_ll(d, t);
  std::vector<long long> supp;
  supp.reserve(static_cast<size_t>(copy_dim));
  for (long long l = 0; l < copy_dim; ++l)
    supp.push_back(l + copy_dim * detail::permute_copy_index(pi, l, d));
  return supp;
}

/// Dense one-site permutation state (length d^{2t}), mostly for tests and
/// for assembling small product states.
inline Eigen::VectorXd site_permutation_state(int t, long long d,
                                              const Permutation& pi) {
  const long long copy_dim = Shape::ipow_ll(d, t);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(copy_dim * copy_dim);
  const double amp = 1.0 / std::sqrt(static_cast<double>(copy_dim));
  for (long long p : single_site_support(t, d, pi)) v(p) = amp;
  return v;
}

/// Two-site frame data used by every moment operator: for each pi in S_t,
/// the sorted nonzero positions of psi_pi tensor psi_pi inside a two-site
/// block (d^{2t} positions, uniform amplitude d^{-t}), plus the dual-frame
/// mixing matrix at q = d^2.
struct PairFrame {
  int t = 0;
  long long d = 0;
  long long copy_dim = 0;              // d^t
  long long site_dim = 0;              // d^{2t}
  double amplitude = 0.0;              // d^{-t}
  std::vector<Permutation> group;      // S_t in enumeration order
  std::vector<std::vector<long long>> block_support;
  Eigen::MatrixXd dual;                // pseudo-inverse of the Gram at q = d^2
  int rank = 0;
};

inline PairFrame build_pair_frame(int t, long long d) {
  PairFrame f;
  f.t = t;
  f.d = d;
  f.copy_dim = Shape::ipow_ll(d, t);
  f.site_dim = f.copy_dim * f.copy_dim;
  f.amplitude = 1.0 / static_cast<double>(f.copy_dim);
  f.group = enumerate_group(t);
  FrameData frame = build_frame(t, d * d);
  f.dual = frame.dual;
  f.rank = frame.rank;
  f.block_support.reserve(f.group.size());
  for (const auto& pi : f.group) {
    const auto site = single_site_support(t, d, pi);
    std::vector<long long> block;
    block.reserve(site.size() * site.size());
    for (long long high : site)
      for (long long low : site) block.push_back(low + f.site_dim * high);
    std::sort(block.begin(), block.end());
    f.block_support.push_back(std::move(block));
  }
  return f;
}

/// Scratch buffers reused across apply calls; sized lazily to the operator's
/// total dimension.  Only the product-type operators need them.
template <class Scalar>
struct ApplyWorkspace {
  std::vector<Scalar> a;
  std::vector<Scalar> b;
};

enum class OperatorKind {
  kProjector,
  kHamiltonian,
  kLocalMoment,
  kParallelMoment,
  kOddProduct,
  kEvenProduct,
};

/// Matrix-free Hermitian operators on the doubled t-copy chain:
///   Projector       P_i on the block (i, i+1), identity elsewhere
///   Hamiltonian     sum_i (I - P_i)
///   LocalMoment     (1/(n-1)) sum_i P_i
///   OddProduct      P_1 P_3 P_5 ...   (disjoint blocks, n even)
///   EvenProduct     P_2 P_4 ...       (empty product = identity at n = 2)
///   ParallelMoment  (OddProduct + EvenProduct) / 2
///
/// All matrix elements are real in the computational basis, so apply() is
/// available on both real and complex buffers; eigensolvers use the real
/// path.  Operators are immutable after construction and hold no mutable
/// state, so a single instance may be shared freely.
class MomentOperator {
 public:
  static MomentOperator projector(const Shape& shape, int site) {
    require_chain(shape);
    if (site < 1 || site >= shape.n)
      throw std::invalid_argument("projector: site must lie in [1, n-1]");
    return MomentOperator(shape, OperatorKind::kProjector, site);
  }
  static MomentOperator hamiltonian(const Shape& shape) {
    require_chain(shape);
    return MomentOperator(shape, OperatorKind::kHamiltonian, 0);
  }
  static MomentOperator local_moment(const Shape& shape) {
    require_chain(shape);
    return MomentOperator(shape, OperatorKind::kLocalMoment, 0);
  }
  static MomentOperator parallel_moment(const Shape& shape) {
    require_even_chain(shape);
    return MomentOperator(shape, OperatorKind::kParallelMoment, 0);
  }
  static MomentOperator odd_product(const Shape& shape) {
    require_even_chain(shape);
    return MomentOperator(shape, OperatorKind::kOddProduct, 0);
  }
  static MomentOperator even_product(const Shape& shape) {
    require_even_chain(shape);
    return MomentOperator(shape, OperatorKind::kEvenProduct, 0);
  }

  const Shape& shape() const { return shape_; }
  OperatorKind kind() const { return kind_; }
  int site() const { return site_; }
  const PairFrame& frame() const { return frame_; }

  /// out = Op * in.  Buffers must have length shape().total_dim() and must
  /// not alias.  Deterministic: fixed summation order, no threading.
  template <class Scalar>
  void apply(const Scalar* in, Scalar* out, ApplyWorkspace<Scalar>& ws) const {
    const long long dim = shape_.total_dim();
    switch (kind_) {
      case OperatorKind::kProjector:
        std::fill(out, out + dim, Scalar(0));
        accumulate_block(site_ - 1, in, out, 1.0);
        break;
      case OperatorKind::kHamiltonian: {
        const double c = static_cast<double>(shape_.n - 1);
        for (long long i = 0; i < dim; ++i) out[i] = c * in[i];
        for (int s = 0; s <= shape_.n - 2; ++s)
          accumulate_block(s, in, out, -1.0);
        break;
      }
      case OperatorKind::kLocalMoment: {
        std::fill(out, out + dim, Scalar(0));
        const double w = 1.0 / static_cast<double>(shape_.n - 1);
        for (int s = 0; s <= shape_.n - 2; ++s)
          accumulate_block(s, in, out, w);
        break;
      }
      case OperatorKind::kOddProduct:
        ensure(ws.a);
        product_apply(odd_sites_, in, out, ws.a.data());
        break;
      case OperatorKind::kEvenProduct:
        ensure(ws.a);
        product_apply(even_sites_, in, out, ws.a.data());
        break;
      case OperatorKind::kParallelMoment: {
        ensure(ws.a);
        ensure(ws.b);
        product_apply(odd_sites_, in, out, ws.a.data());
        product_apply(even_sites_, in, ws.b.data(), ws.a.data());
        for (long long i = 0; i < dim; ++i)
          out[i] = 0.5 * out[i] + 0.5 * ws.b[static_cast<size_t>(i)];
        break;
      }
    }
  }

  /// Convenience overload for whole state vectors (allocates scratch).
  StateVector apply(const StateVector& v) const {
    if (!(v.shape() == shape_))
      throw std::invalid_argument("apply: state shape does not match operator");
    StateVector out(shape_);
    ApplyWorkspace<std::complex<double>> ws;
    apply(v.data(), out.data(), ws);
    return out;
  }

  /// Brute-force dense form, refused above `guard` dimensions.
  Eigen::MatrixXd dense_materialize(long long guard = 4096) const {
    const long long dim = shape_.total_dim();
    if (dim > guard)
      throw std::length_error("dense_materialize: dimension exceeds guard");
    Eigen::MatrixXd m(dim, dim);
    std::vector<double> e(static_cast<size_t>(dim), 0.0);
    std::vector<double> col(static_cast<size_t>(dim));
    ApplyWorkspace<double> ws;
    for (long long j = 0; j < dim; ++j) {
      e[static_cast<size_t>(j)] = 1.0;
      apply(e.data(), col.data(), ws);
      e[static_cast<size_t>(j)] = 0.0;
      for (long long i = 0; i < dim; ++i) m(i, j) = col[static_cast<size_t>(i)];
    }
    return m;
  }

 private:
  MomentOperator(const Shape& shape, OperatorKind kind, int site)
      : shape_(shape),
        kind_(kind),
        site_(site),
        frame_(build_pair_frame(shape.t, shape.d)) {
    for (int s = 0; s + 1 <= shape_.n - 1; s += 2) odd_sites_.push_back(s);
    for (int s = 1; s + 1 <= shape_.n - 1; s += 2) even_sites_.push_back(s);
  }

  static void require_chain(const Shape& shape) {
    if (shape.n < 2)
      throw std::invalid_argument("moment operator: need at least two sites");
  }
  static void require_even_chain(const Shape& shape) {
    require_chain(shape);
    if (shape.n % 2 != 0)
      throw std::invalid_argument("parallel operators: n must be even");
  }

  template <class Scalar>
  void ensure(std::vector<Scalar>& buf) const {
    buf.resize(static_cast<size_t>(shape_.total_dim()));
  }

  /// out += weight * (P_{s0,s0+1} in), the two-site dual-frame projector on
  /// the 0-based block (s0, s0+1) and identity elsewhere.  The two active
  /// sites are processed as contiguous panels of length site_dim^{s0}
  /// (everything below the block), mixed through the dual matrix with one
  /// small matrix product per panel.
  template <class Scalar>
  void accumulate_block(int s0, const Scalar* in, Scalar* out,
                        double weight) const {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const long long D = frame_.site_dim;
    const long long count_lo = Shape::ipow_ll(D, s0);
    const long long block = count_lo * D * D;
    const long long count_hi = shape_.total_dim() / block;
    const int group = static_cast<int>(frame_.group.size());
    const double scale = weight * frame_.amplitude * frame_.amplitude;
    const Mat dual_scaled =
        (frame_.dual * scale).template cast<Scalar>().eval();

    Mat c_raw(count_lo, group);
    Mat mixed(count_lo, group);
    for (long long hi = 0; hi < count_hi; ++hi) {
      const long long base = hi * block;
      c_raw.setZero();
      for (int s = 0; s < group; ++s) {
        auto col = c_raw.col(s);
        for (long long p : frame_.block_support[static_cast<size_t>(s)])
          col += Eigen::Map<const Vec>(in + base + p * count_lo, count_lo);
      }
      mixed.noalias() = c_raw * dual_scaled;
      for (int pi = 0; pi < group; ++pi) {
        const auto col = mixed.col(pi);
        for (long long p : frame_.block_support[static_cast<size_t>(pi)])
          Eigen::Map<Vec>(out + base + p * count_lo, count_lo) += col;
      }
    }
  }

  /// out = (product of disjoint block projectors) in.  Factors commute, so
  /// they are applied sequentially, alternating between `out` and `scratch`
  /// such that the final factor lands in `out`.
  template <class Scalar>
  void product_apply(const std::vector<int>& sites, const Scalar* in,
                     Scalar* out, Scalar* scratch) const {
    const long long dim = shape_.total_dim();
    const int k = static_cast<int>(sites.size());
    if (k == 0) {
      std::copy(in, in + dim, out);
      return;
    }
    const Scalar* cur = in;
    for (int j = 0; j < k; ++j) {
      Scalar* dst = ((k - j) % 2 == 1) ? out : scratch;
      std::fill(dst, dst + dim, Scalar(0));
      accumulate_block(sites[static_cast<size_t>(j)], cur, dst, 1.0);
      cur = dst;
    }
  }

  Shape shape_;
  OperatorKind kind_;
  int site_;
  PairFrame frame_;
  std::vector<int> odd_sites_;
  std::vector<int> even_sites_;
};

/// Exact projector onto the common fixed space of all block projectors,
/// spanned by the n-fold permutation states.  Used to deflate the known
/// eigenvalue-1 eigenspace out of walk operators, and as the P_c reference
/// of the detectability quantity.
class GroundSpaceDeflator {
 public:
  explicit GroundSpaceDeflator(const Shape& shape) : shape_(shape) {
    GroundSpaceBasis basis = ground_space_basis(shape.n, shape.t, shape.d);
    coeffs_ = basis.coeffs;
    rank_ = basis.rank;
    const long long copy_dim = shape.copy_dim();
    long long global_support = 1;
    for (int s = 0; s < shape.n; ++s) global_support *= copy_dim;
    amp_ = 1.0 / std::sqrt(static_cast<double>(global_support));
    const auto group = enumerate_group(shape.t);
    support_.reserve(group.size());
    for (const auto& pi : group) {
      const auto site = single_site_support(shape.t, shape.d, pi);
      std::vector<long long> cur{0};
      long long stride = 1;
      for (int s = 0; s < shape.n; ++s) {
        std::vector<long long> next;
        next.reserve(cur.size() * site.size());
        for (long long x : cur)
          for (long long v : site) next.push_back(x + v * stride);
        cur.swap(next);
        stride *= shape.site_dim();
      }
      std::sort(cur.begin(), cur.end());
      support_.push_back(std::move(cur));
    }
  }

  const Shape& shape() const { return shape_; }
  int rank() const { return rank_; }
  const Eigen::MatrixXd& coefficients() const { return coeffs_; }

  /// Overlaps <Psi_pi, v> with every (unnormalized-frame) ground state.
  template <class Scalar>
  std::vector<Scalar> frame_overlaps(const Scalar* v) const {
    std::vector<Scalar> o(support_.size(), Scalar(0));
    for (size_t s = 0; s < support_.size(); ++s) {
      Scalar acc(0);
      for (long long p : support_[s]) acc += v[p];
      o[s] = amp_ * acc;
    }
    return o;
  }

  /// Overlaps <w_r, v> with the orthonormal ground basis vectors.
  template <class Scalar>
  std::vector<Scalar> basis_overlaps(const Scalar* v) const {
    const auto o = frame_overlaps(v);
    std::vector<Scalar> a(static_cast<size_t>(rank_), Scalar(0));
    for (int r = 0; r < rank_; ++r)
      for (size_t s = 0; s < o.size(); ++s)
        a[static_cast<size_t>(r)] += coeffs_(r, static_cast<Eigen::Index>(s)) * o[s];
    return a;
  }

  /// v -= P_c v.
  template <class Scalar>
  void project_out(Scalar* v) const {
    scatter(v, v, /*subtract=*/true);
  }

  /// out = P_c in (out is overwritten).
  template <class Scalar>
  void apply_projector(const Scalar* in, Scalar* out) const {
    std::fill(out, out + shape_.total_dim(), Scalar(0));
    scatter(in, out, /*subtract=*/false);
  }

 private:
  template <class Scalar>
  void scatter(const Scalar* in, Scalar* out, bool subtract) const {
    const auto a = basis_overlaps(in);
    std::vector<Scalar> b(support_.size(), Scalar(0));
    for (size_t s = 0; s < support_.size(); ++s)
      for (int r = 0; r < rank_; ++r)
        b[s] += coeffs_(r, static_cast<Eigen::Index>(s)) * a[static_cast<size_t>(r)];
    const double sign = subtract ? -1.0 : 1.0;
    for (size_t s = 0; s < support_.size(); ++s) {
      const Scalar w = sign * amp_ * b[s];
      for (long long p : support_[s]) out[p] += w;
    }
  }

  Shape shape_;
  Eigen::MatrixXd coeffs_;
  int rank_ = 0;
  double amp_ = 0.0;
  std::vector<std::vector<long long>> support_;
};

}  // namespace rqc
