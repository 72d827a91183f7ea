#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace jterw {

/// Largest ground set supported by the bitmask representation.
inline constexpr int kMaxGroundSet = 62;

/// C(v, k), extended by zero: returns 0 whenever k < 0 or k > v (including v < 0).
std::int64_t binomial(std::int64_t v, std::int64_t k);

/// A k-element subset of {1, ..., v}. Elements are 1-based and strictly increasing.
class KSubset {
 public:
  /// Throws std::invalid_argument unless the elements are strictly increasing and lie in [1, v].
  KSubset(int v, std::vector<int> elements);

  /// Bit b of `mask` set means element b+1 is present.
  static KSubset from_mask(int v, std::uint64_t mask);

  int ground_size() const { return v_; }
  int size() const { return static_cast<int>(elements_.size()); }
  std::span<const int> elements() const { return elements_; }
  std::uint64_t mask() const { return mask_; }

  friend bool operator==(const KSubset& a, const KSubset& b) {
    return a.v_ == b.v_ && a.mask_ == b.mask_;
  }

 private:
  int v_ = 0;
  std::vector<int> elements_;
  std::uint64_t mask_ = 0;
};

/// Colexicographic rank: sum over positions t of C(a_t - 1, t + 1).
std::size_t rank(const KSubset& s);

/// Inverse of rank. Throws std::out_of_range unless index < C(v, k).
KSubset unrank(int v, int k, std::size_t index);

/// All k-subsets of [v] in colex order.
std::vector<KSubset> enumerate(int v, int k);

/// Same order as enumerate(), as bitmasks. Increasing integer order of k-bit masks is colex.
std::vector<std::uint64_t> enumerate_masks(int v, int k);

/// Colex rank of a mask with popcount k.
std::size_t rank_mask(std::uint64_t mask);

/// |a ∩ b|. Throws std::invalid_argument when the ground sets differ.
int intersection_size(const KSubset& a, const KSubset& b);

}  // namespace jterw
