#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "jterw/combinatorics.hpp"

using namespace jterw;

TEST_CASE("binomial values and zero extension") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(4, -1) == 0);
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(-2, 0) == 0);
  CHECK(binomial(30, 15) == 155117520);
}

TEST_CASE("binomial obeys Pascal's rule for v <= 30") {
  for (int v = 1; v <= 30; ++v) {
    for (int k = 0; k <= v; ++k) {
      CHECK(binomial(v, k) == binomial(v - 1, k - 1) + binomial(v - 1, k));
    }
  }
}

TEST_CASE("unrank and rank in colex order") {
  const auto first = unrank(4, 2, 0);
  CHECK(std::vector<int>(first.elements().begin(), first.elements().end()) ==
        std::vector<int>{1, 2});
  CHECK(rank(unrank(5, 2, 7)) == 7);
  CHECK(enumerate(4, 2).size() == 6);

  // colex: {1,2} {1,3} {2,3} {1,4} {2,4} {3,4}
  const auto all = enumerate(4, 2);
  CHECK(all[2] == KSubset(4, {2, 3}));
  CHECK(all[3] == KSubset(4, {1, 4}));
  CHECK_THROWS_AS(unrank(4, 2, 6), std::out_of_range);
}

TEST_CASE("enumeration is a bijection onto [0, C(v,k)) for v <= 8") {
  for (int v = 0; v <= 8; ++v) {
    for (int k = 0; k <= v; ++k) {
      const auto subsets = enumerate(v, k);
      REQUIRE(static_cast<std::int64_t>(subsets.size()) == binomial(v, k));
      std::set<std::uint64_t> seen;
      for (std::size_t idx = 0; idx < subsets.size(); ++idx) {
        CHECK(subsets[idx].size() == k);
        CHECK(rank(subsets[idx]) == idx);
        CHECK(unrank(v, k, idx) == subsets[idx]);
        seen.insert(subsets[idx].mask());
      }
      CHECK(seen.size() == subsets.size());
    }
  }
}

TEST_CASE("intersection sizes") {
  CHECK(intersection_size(KSubset(4, {1, 2}), KSubset(4, {1, 3})) == 1);
  CHECK(intersection_size(KSubset(4, {1, 2}), KSubset(4, {1, 2})) == 2);
  CHECK(intersection_size(KSubset(4, {1, 2}), KSubset(4, {3, 4})) == 0);
  CHECK_THROWS_AS(intersection_size(KSubset(4, {1, 2}), KSubset(5, {1, 2})), std::invalid_argument);
}

TEST_CASE("subset validation") {
  CHECK_THROWS_AS(KSubset(4, {2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(KSubset(4, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(KSubset(4, {0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(KSubset(4, {1, 5}), std::invalid_argument);
  CHECK(KSubset::from_mask(5, 0b10110) == KSubset(5, {2, 3, 5}));
}
