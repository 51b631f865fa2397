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
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace rqc {

/// Largest number of tensor copies supported by the frame machinery.
/// t! grows fast; 8! = 40320 bounds every Gram matrix we ever build.
inline constexpr int kMaxCopies = 8;

/// A permutation of {0, ..., t-1} stored in one-line form:
/// images()[i] is the image of i. Immutable after construction.
class Permutation {
 public:
  /// Builds a permutation from its one-line form; throws
  /// std::invalid_argument if `images` is not a bijection on {0..t-1}.
  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    const int t = static_cast<int>(images_.size());
    if (t == 0) throw std::invalid_argument("Permutation: empty one-line form");
    std::vector<bool> seen(t, false);
    for (int v : images_) {
      if (v < 0 || v >= t || seen[v])
        throw std::invalid_argument("Permutation: images are not a bijection");
      seen[v] = true;
    }
  }

  /// The identity permutation on t points.
  static Permutation identity(int t) {
    std::vector<int> im(t);
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im));
  }

  /// Number of points the permutation acts on.
  int degree() const { return static_cast<int>(images_.size()); }

  /// Image of point i.
  int operator()(int i) const { return images_[i]; }

  const std::vector<int>& images() const { return images_; }

  /// Composition acting left-to-right on points: (a.compose(b))(i) = a(b(i)).
  Permutation compose(const Permutation& rhs) const {
    require_same_degree(rhs);
    std::vector<int> im(images_.size());
    for (std::size_t i = 0; i < im.size(); ++i) im[i] = images_[rhs.images_[i]];
    return Permutation(std::move(im));
  }

  Permutation inverse() const {
    std::vector<int> im(images_.size());
    for (std::size_t i = 0; i < im.size(); ++i) im[images_[i]] = static_cast<int>(i);
    return Permutation(std::move(im));
  }

  /// Number of cycles, fixed points included; ranges over [1, t].
  int cycle_count() const {
    const int t = degree();
    std::vector<bool> seen(t, false);
    int cycles = 0;
    for (int i = 0; i < t; ++i) {
      if (seen[i]) continue;
      ++cycles;
      for (int j = i; !seen[j]; j = images_[j]) seen[j] = true;
    }
    return cycles;
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != static_cast<int>(i)) return false;
    return true;
  }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.images_ == b.images_;
  }
  friend bool operator<(const Permutation& a, const Permutation& b) {
    return a.images_ < b.images_;
  }

 private:
  void require_same_degree(const Permutation& other) const {
    if (other.degree() != degree())
      throw std::invalid_argument("Permutation: degree mismatch (" +
                                  std::to_string(degree()) + " vs " +
                                  std::to_string(other.degree()) + ")");
  }

  std::vector<int> images_;
};

/// All t! permutations of {0..t-1} in lexicographic one-line order, so the
/// identity comes first and the order is reproducible byte-for-byte.
/// Throws std::invalid_argument unless 1 <= t <= kMaxCopies.
inline std::vector<Permutation> enumerate_group(int t) {
  if (t < 1 || t > kMaxCopies)
    throw std::invalid_argument("enumerate_group: t must be in [1, " +
                                std::to_string(kMaxCopies) + "], got " +
                                std::to_string(t));
  std::vector<int> im(t);
  std::iota(im.begin(), im.end(), 0);
  std::vector<Permutation> group;
  do {
    group.emplace_back(im);
  } while (std::next_permutation(im.begin(), im.end()));
  return group;
}

/// t! as a 64-bit integer (valid for t <= kMaxCopies and well beyond).
inline long long factorial(int t) {
  long long f = 1;
  for (int k = 2; k <= t; ++k) f *= k;
  return f;
}

}  // namespace rqc
