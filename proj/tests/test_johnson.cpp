#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <bit>

#include "jterw/combinatorics.hpp"
#include "jterw/johnson.hpp"

using namespace jterw;

namespace {

RationalMatrix j_minus_i(std::size_t n) {
  return RationalMatrix::all_ones(n, n) - RationalMatrix::identity(n);
}

std::vector<Rational> row_sums(const RationalMatrix& m) {
  std::vector<Rational> out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Rational s(0);
    for (const auto& v : m.row_values(r)) s += v;
    out.push_back(s);
  }
  return out;
}

// Whether some k-set and h-set of [v] meet in exactly r points, by enumeration.
bool pattern_nonzero_check(int v, int k, int h, int r) {
  for (auto a : enumerate_masks(v, k))
    for (auto b : enumerate_masks(v, h))
      if (std::popcount(a & b) == r) return true;
  return false;
}

}  // namespace

TEST_CASE("scheme spec guards n >= 2d") {
  CHECK(SchemeSpec(4, 2).vertex_count() == 6);
  CHECK_THROWS_AS(SchemeSpec(3, 2), std::invalid_argument);
  CHECK_THROWS_AS(SchemeSpec(3, -1), std::invalid_argument);
}

TEST_CASE("intersection matrices") {
  CHECK(intersection_matrix(3, 1, 1, 0) == j_minus_i(3));
  CHECK(intersection_matrix(3, 1, 1, 1) == RationalMatrix::identity(3));
  CHECK(containment_matrix(2, 0, 2) == RationalMatrix::from_dense({{Rational(1)}}));
  // Outside the band the matrix is zero but keeps its shape.
  const auto zero = intersection_matrix(3, 2, 2, 0);
  CHECK(zero.rows() == 3);
  CHECK(zero.is_zero());
  CHECK_THROWS_AS(intersection_matrix(3, 4, 1, 0), std::invalid_argument);
}

TEST_CASE("adjacency matrices of J(4,2) and J(5,2)") {
  CHECK(adjacency_matrix(4, 2, 0) == RationalMatrix::identity(6));
  const auto a1 = adjacency_matrix(4, 2, 1);
  CHECK(a1.nnz() == 24);
  for (const auto& s : row_sums(a1)) CHECK(s == 4);

  RationalMatrix sum(10, 10);
  for (int m = 0; m <= 2; ++m) sum = sum + adjacency_matrix(5, 2, m);
  CHECK(sum == RationalMatrix::all_ones(10, 10));

  for (int m = 0; m <= 2; ++m) CHECK(adjacency_matrix(5, 2, m) == intersection_matrix(5, 2, 2, 2 - m));
  CHECK_THROWS_AS(adjacency_matrix(4, 2, 3), std::invalid_argument);
}

TEST_CASE("closed-form eigenvalues") {
  CHECK(eigenvalue_p1(5, 2, 0) == 6);
  CHECK(eigenvalue_p1(5, 2, 1) == 1);
  CHECK(eigenvalue_p1(5, 2, 2) == -2);
  CHECK(eigenvalue_pk(5, 2, 1) == -2);
  CHECK(eigenvalue_p1(4, 2, 1) == 0);
}

TEST_CASE("closed-form eigenvalues match the idempotent action for v <= 8") {
  for (int v = 1; v <= 8; ++v) {
    for (int k = 1; k <= v; ++k) {
      for (int j = 0; j < idempotent_count(v, k); ++j) {
        CHECK(eigenvalue_from_matrices(v, k, 1, j) == eigenvalue_p1(v, k, j));
        CHECK(eigenvalue_from_matrices(v, k, k, j) == eigenvalue_pk(v, k, j));
      }
    }
  }
}

TEST_CASE("primitive idempotents") {
  const auto& e42 = primitive_idempotents(4, 2);
  CHECK(e42.size() == 3);
  CHECK(e42[0] == Rational(1, 6) * RationalMatrix::all_ones(6, 6));

  const auto& e52 = primitive_idempotents(5, 2);
  RationalMatrix sum(10, 10);
  for (const auto& e : e52) sum = sum + e;
  CHECK(sum == RationalMatrix::identity(10));
  // Multiplicities of the triangular graph T(5): 1, 4, 5.
  CHECK(e52[0].trace() == 1);
  CHECK(e52[1].trace() == 4);
  CHECK(e52[2].trace() == 5);
  CHECK(rank(e52[1]) == 4);
  CHECK(rank(e52[2]) == 5);

  CHECK(primitive_idempotents(3, 0).size() == 1);
  CHECK(primitive_idempotents(3, 3).front() == RationalMatrix::identity(1));
  CHECK(idempotent_or_zero(5, 2, 3).is_zero());
  CHECK(idempotent_or_zero(5, 2, 3).rows() == 10);
}

TEST_CASE("idempotent identities for all v <= 8") {
  for (int v = 0; v <= 8; ++v) {
    for (int k = 0; k <= v; ++k) {
      const auto& es = primitive_idempotents(v, k);
      const auto size = static_cast<std::size_t>(binomial(v, k));
      const auto a1 = k >= 1 ? adjacency_matrix(v, k, 1) : RationalMatrix(size, size);
      RationalMatrix sum(size, size);
      for (std::size_t j = 0; j < es.size(); ++j) {
        sum = sum + es[j];
        CHECK(es[j].transpose() == es[j]);
        CHECK(multiply(a1, es[j]) == eigenvalue_p1(v, k, static_cast<int>(j)) * es[j]);
        for (std::size_t l = 0; l < es.size(); ++l) {
          const auto product = multiply(es[j], es[l]);
          if (j == l) {
            CHECK(product == es[j]);
          } else {
            CHECK(product.is_zero());
          }
        }
      }
      CHECK(sum == RationalMatrix::identity(size));
      CHECK(es[0] == Rational(1, static_cast<long>(size)) * RationalMatrix::all_ones(size, size));
    }
  }
}

TEST_CASE("triple product coefficients") {
  const auto c = triple_product_coefficients(3, 1, 1, 1, 0, 0);
  REQUIRE(c.size() == 2);
  CHECK(c[0] == 1);
  CHECK(c[1] == 2);

  // Negative lower index in C(v+g-i-k, .) contributes nothing: v=2, i=k=2, g=0 gives C(-2, .).
  const auto z = triple_product_coefficients(2, 2, 2, 2, 2, 2);
  CHECK(z[0] == 0);
  CHECK(z[2] == 1);
}

TEST_CASE("triple product expansion matches brute-force products for v <= 5") {
  for (int v = 0; v <= 5; ++v)
    for (int i = 0; i <= v; ++i)
      for (int j = 0; j <= v; ++j)
        for (int k = 0; k <= v; ++k)
          for (int l = 0; l <= std::min(i, j); ++l)
            for (int s = 0; s <= std::min(j, k); ++s) {
              const auto lhs =
                  multiply(intersection_matrix(v, i, j, l), intersection_matrix(v, j, k, s));
              const auto coeffs = triple_product_coefficients(v, i, j, k, l, s);
              RationalMatrix rhs(lhs.rows(), lhs.cols());
              for (int g = 0; g <= std::min(i, k); ++g) {
                rhs = rhs + coeffs[static_cast<std::size_t>(g)] * intersection_matrix(v, i, k, g);
              }
              CHECK(lhs == rhs);
            }
}

TEST_CASE("containment products agree with the triple product expansion") {
  for (int v = 1; v <= 6; ++v)
    for (int i = 0; i <= v; ++i)
      for (int j = 0; j <= v; ++j)
        for (int l = 0; l <= v; ++l) {
          const auto lhs = multiply(containment_matrix(v, i, j), containment_matrix(v, j, l));
          const auto general = triple_product_coefficients(v, i, j, l, std::min(i, j), std::min(j, l));
          std::vector<IntersectionTerm> terms;
          for (int g = 0; g < static_cast<int>(general.size()); ++g) {
            terms.push_back({g, general[static_cast<std::size_t>(g)]});
          }
          CHECK(expand_terms(v, i, l, terms) == lhs);
          if (i <= j && j <= l) CHECK(expand_terms(v, i, l, containment_product_chain(v, i, j, l)) == lhs);
          if (std::max(i, l) <= j)
            CHECK(expand_terms(v, i, l, containment_product_through_superset(v, i, j, l)) == lhs);
          if (j <= std::min(i, l))
            CHECK(expand_terms(v, i, l, containment_product_through_subset(v, i, j, l)) == lhs);
        }
}

TEST_CASE("through-superset superscript is min(i,l) - m; min(i, l - m) fails for i < l") {
  // H_{1,3}(4) H_{3,2}(4): a 3-set containing a point and a pair; pairs through the point
  // are counted twice, the others once.
  const auto lhs = multiply(containment_matrix(4, 1, 3), containment_matrix(4, 3, 2));
  const auto corrected = containment_product_through_superset(4, 1, 3, 2);
  CHECK(expand_terms(4, 1, 2, corrected) == lhs);
  std::vector<IntersectionTerm> shifted;
  for (int m = 0; m <= 1; ++m) shifted.push_back({std::min(1, 2 - m), corrected[static_cast<std::size_t>(m)].coefficient});
  CHECK_FALSE(expand_terms(4, 1, 2, shifted) == lhs);
}

TEST_CASE("feasible intersection sizes") {
  CHECK(feasible_r_set(4, 2, 2) == std::vector<int>{0, 1, 2});
  CHECK(feasible_r_set(2, 1, 2) == std::vector<int>{1});
  CHECK(feasible_r_set(3, 0, 2) == std::vector<int>{0});
  for (int v = 0; v <= 6; ++v)
    for (int k = 0; k <= v; ++k)
      for (int h = 0; h <= v; ++h) {
        const auto band = feasible_r_set(v, k, h);
        for (int r = 0; r <= std::min(k, h); ++r) {
          const bool in_band = std::find(band.begin(), band.end(), r) != band.end();
          CHECK(pattern_nonzero_check(v, k, h, r) == in_band);
        }
      }
}

TEST_CASE("entry flips corrupt exactly one matrix") {
  const IntersectionSource clean;
  const IntersectionSource dirty(EntryFlip{{3, 1, 1, 0}, 0, 1});
  CHECK(clean(3, 1, 1, 0) == intersection_matrix(3, 1, 1, 0));
  const auto flipped = dirty(3, 1, 1, 0);
  CHECK(flipped.at(0, 1) == 0);
  CHECK(flipped.nnz() == 5);
  CHECK(dirty(3, 1, 1, 1) == intersection_matrix(3, 1, 1, 1));
}
