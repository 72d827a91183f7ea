#include "jterw/combinatorics.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace jterw {

std::int64_t binomial(std::int64_t v, std::int64_t k) {
  if (k < 0 || v < 0 || k > v) return 0;
  k = std::min(k, v - k);
  __int128 result = 1;
  for (std::int64_t t = 1; t <= k; ++t) {
    result = result * (v - k + t) / t;
    if (result > static_cast<__int128>(INT64_MAX)) {
      throw std::overflow_error("binomial(" + std::to_string(v) + ", " + std::to_string(k) +
                                ") exceeds 64 bits");
    }
  }
  return static_cast<std::int64_t>(result);
}

namespace {

void check_ground_set(int v) {
  if (v < 0 || v > kMaxGroundSet) {
    throw std::invalid_argument("ground set size " + std::to_string(v) + " outside [0, " +
                                std::to_string(kMaxGroundSet) + "]");
  }
}

}  // namespace

KSubset::KSubset(int v, std::vector<int> elements) : v_(v), elements_(std::move(elements)) {
  check_ground_set(v);
  int previous = 0;
  for (int e : elements_) {
    if (e <= previous || e > v) {
      throw std::invalid_argument("subset elements must be strictly increasing within [1, " +
                                  std::to_string(v) + "]");
    }
    previous = e;
    mask_ |= std::uint64_t{1} << (e - 1);
  }
}

KSubset KSubset::from_mask(int v, std::uint64_t mask) {
  check_ground_set(v);
  if (v < 64 && (mask >> v) != 0) {
    throw std::invalid_argument("mask has bits beyond the ground set");
  }
  std::vector<int> elements;
  elements.reserve(static_cast<std::size_t>(std::popcount(mask)));
  for (int b = 0; b < v; ++b) {
    if (mask & (std::uint64_t{1} << b)) elements.push_back(b + 1);
  }
  return KSubset(v, std::move(elements));
}

std::size_t rank(const KSubset& s) { return rank_mask(s.mask()); }

std::size_t rank_mask(std::uint64_t mask) {
  std::size_t r = 0;
  int position = 0;
  while (mask != 0) {
    const int element = std::countr_zero(mask) + 1;
    r += static_cast<std::size_t>(binomial(element - 1, position + 1));
    ++position;
    mask &= mask - 1;
  }
  return r;
}

KSubset unrank(int v, int k, std::size_t index) {
  check_ground_set(v);
  const auto total = binomial(v, k);
  if (k < 0 || static_cast<std::int64_t>(index) >= total) {
    throw std::out_of_range("index " + std::to_string(index) + " out of range for C(" +
                            std::to_string(v) + ", " + std::to_string(k) + ")");
  }
  std::vector<int> elements(static_cast<std::size_t>(k));
  auto remaining = static_cast<std::int64_t>(index);
  int upper = v;
  for (int position = k; position >= 1; --position) {
    // Largest element a with C(a-1, position) <= remaining.
    int a = upper;
    while (binomial(a - 1, position) > remaining) --a;
    elements[static_cast<std::size_t>(position - 1)] = a;
    remaining -= binomial(a - 1, position);
    upper = a - 1;
  }
  return KSubset(v, std::move(elements));
}

std::vector<std::uint64_t> enumerate_masks(int v, int k) {
  check_ground_set(v);
  std::vector<std::uint64_t> out;
  if (k < 0 || k > v) return out;
  out.reserve(static_cast<std::size_t>(binomial(v, k)));
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  const std::uint64_t limit = std::uint64_t{1} << v;
  std::uint64_t mask = (std::uint64_t{1} << k) - 1;
  while (mask < limit) {
    out.push_back(mask);
    // Gosper's hack: next integer with the same popcount.
    const std::uint64_t lowest = mask & (~mask + 1);
    const std::uint64_t ripple = mask + lowest;
    mask = ripple | (((ripple ^ mask) >> 2) / lowest);
  }
  return out;
}

std::vector<KSubset> enumerate(int v, int k) {
  std::vector<KSubset> out;
  for (auto mask : enumerate_masks(v, k)) out.push_back(KSubset::from_mask(v, mask));
  return out;
}

int intersection_size(const KSubset& a, const KSubset& b) {
  if (a.ground_size() != b.ground_size()) {
    throw std::invalid_argument("intersection of subsets over different ground sets");
  }
  return std::popcount(a.mask() & b.mask());
}

}  // namespace jterw
