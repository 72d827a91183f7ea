#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <sstream>

#include "jterw/algebra_basis.hpp"
#include "jterw/johnson.hpp"
#include "jterw/rational_matrix.hpp"

using namespace jterw;

namespace {

// Hand-rolled generator: sparse-ish matrices with small signed rationals.
RationalMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols,
                             double density = 0.6, int spread = 7) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> num(-spread, spread);
  std::uniform_int_distribution<int> den(1, spread);
  std::vector<RationalMatrix::Entry> entries;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (coin(rng) < density) {
        Rational q(num(rng), den(rng));
        q.canonicalize();
        entries.push_back({r, c, q});
      }
    }
  }
  return RationalMatrix::from_entries(rows, cols, std::move(entries));
}

// Schoolbook dense product, kept separate from the sparse kernel under test.
RationalMatrix dense_product(const RationalMatrix& a, const RationalMatrix& b) {
  const auto da = a.to_dense();
  const auto db = b.to_dense();
  std::vector<std::vector<Rational>> out(a.rows(), std::vector<Rational>(b.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) out[i][j] += da[i][k] * db[k][j];
  return RationalMatrix::from_dense(out);
}

}  // namespace

TEST_CASE("rationals serialize as num/den") {
  CHECK(to_string(Rational(3)) == "3/1");
  CHECK(to_string(Rational(-2) / 4) == "-1/2");
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(parse_rational("-5") == Rational(-5));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x/2"), std::invalid_argument);
}

TEST_CASE("multiply: identity, J - I squared, containment product") {
  std::mt19937 rng(7);
  const auto m = random_matrix(rng, 3, 3);
  CHECK(multiply(RationalMatrix::identity(3), m) == m);

  const auto j3 = RationalMatrix::all_ones(3, 3);
  const auto i3 = RationalMatrix::identity(3);
  CHECK(multiply(j3 - i3, j3 - i3) == j3 + i3);

  const auto product = multiply(containment_matrix(2, 0, 1), containment_matrix(2, 1, 2));
  CHECK(product == RationalMatrix::from_dense({{Rational(2)}}));
  CHECK(product == Rational(2) * containment_matrix(2, 0, 2));

  CHECK_THROWS_AS(multiply(RationalMatrix(2, 3), RationalMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("multiply agrees with a dense schoolbook product, including wide numerators") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = random_matrix(rng, 5, 4, 0.5, 9);
    const auto b = random_matrix(rng, 4, 6, 0.5, 9);
    CHECK(multiply(a, b) == dense_product(a, b));
  }
  // Entries beyond 64 bits force the arbitrary-precision kernel.
  const Rational huge(mpz_class("123456789012345678901234567890"), mpz_class(7));
  const auto big = RationalMatrix::from_dense({{huge, Rational(1)}, {Rational(-3), huge}});
  CHECK(multiply(big, big) == dense_product(big, big));
}

TEST_CASE("product is associative and transposes exactly") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_matrix(rng, 4, 5);
    const auto b = random_matrix(rng, 5, 3);
    const auto c = random_matrix(rng, 3, 4);
    CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
    CHECK(multiply(a, b).transpose() == multiply(b.transpose(), a.transpose()));
  }
}

TEST_CASE("kronecker product") {
  CHECK(kronecker(RationalMatrix::identity(2), RationalMatrix::identity(3)) ==
        RationalMatrix::identity(6));

  const auto row = RationalMatrix::all_ones(1, 2);
  const auto col = RationalMatrix::all_ones(2, 1);
  const auto k = kronecker(row, col);
  CHECK(k.rows() == 2);
  CHECK(k.cols() == 2);
  CHECK(k == RationalMatrix::all_ones(2, 2));

  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_matrix(rng, 2, 2);
    const auto b = random_matrix(rng, 2, 2);
    const auto c = random_matrix(rng, 2, 2);
    const auto d = random_matrix(rng, 2, 2);
    CHECK(multiply(kronecker(a, b), kronecker(c, d)) == kronecker(multiply(a, c), multiply(b, d)));
  }
}

TEST_CASE("block embedding implements the block map") {
  const std::vector<std::size_t> partition{1, 2};
  const auto e = block_embed(RationalMatrix::from_dense({{Rational(5)}}), 0, 0, partition);
  CHECK(e.rows() == 3);
  CHECK(e.nnz() == 1);
  CHECK(e.at(0, 0) == 5);

  std::mt19937 rng(9);
  const auto y = random_matrix(rng, 1, 2, 1.0);
  const auto z = random_matrix(rng, 2, 2, 1.0);
  const auto w = random_matrix(rng, 1, 1, 1.0);
  // y in block (0,1), w in block (0,0): block column 1 != block row 0.
  CHECK(multiply(block_embed(y, 0, 1, partition), block_embed(w, 0, 0, partition)).is_zero());
  CHECK(multiply(block_embed(y, 0, 1, partition), block_embed(z, 1, 1, partition)) ==
        block_embed(multiply(y, z), 0, 1, partition));
  CHECK(block_extract(block_embed(z, 1, 1, partition), 1, 1, partition) == z);
  CHECK_THROWS_AS(block_embed(z, 0, 1, partition), std::invalid_argument);
}

TEST_CASE("permute conjugates by a permutation") {
  std::mt19937 rng(13);
  const auto m = random_matrix(rng, 4, 4);
  const std::vector<std::size_t> order{2, 0, 3, 1};
  const auto p = permute(m, order);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(p.at(i, j) == m.at(order[i], order[j]));
}

TEST_CASE("rank") {
  CHECK(rank(RationalMatrix::identity(4)) == 4);
  CHECK(rank(RationalMatrix::all_ones(3, 5)) == 1);
  CHECK(rank(RationalMatrix(3, 3)) == 0);
  const auto m = RationalMatrix::from_dense(
      {{Rational(1), Rational(2), Rational(3)}, {Rational(2), Rational(4), Rational(6)},
       {Rational(1), Rational(0), Rational(1, 2)}});
  CHECK(rank(m) == 2);
}

TEST_CASE("saturate_span") {
  const auto i3 = RationalMatrix::identity(3);
  AlgebraBasis one(3);
  one.insert(i3);
  const std::vector<RationalMatrix> twice{Rational(2) * i3};
  CHECK(saturate_span(one, twice).dimension() == 1);
  CHECK(saturate_span(one, twice) == one);

  const std::vector<RationalMatrix> ij{i3, RationalMatrix::all_ones(3, 3)};
  CHECK(saturate_span(AlgebraBasis(3), ij).dimension() == 2);

  std::mt19937 rng(17);
  std::vector<RationalMatrix> inputs;
  for (int k = 0; k < 6; ++k) inputs.push_back(random_matrix(rng, 3, 3, 0.4));
  const auto basis = saturate_span(AlgebraBasis(3), inputs);
  for (const auto& m : inputs) {
    CHECK(basis.contains(m));
    CHECK(basis.residual(m).is_zero());
  }
  const auto pivots = basis.pivots();
  CHECK(std::is_sorted(pivots.begin(), pivots.end()));
  CHECK(std::adjacent_find(pivots.begin(), pivots.end()) == pivots.end());
  CHECK_THROWS_AS(saturate_span(AlgebraBasis(2), ij), std::invalid_argument);
}

TEST_CASE("closure under multiplication") {
  const std::vector<RationalMatrix> unit{RationalMatrix::identity(4)};
  CHECK(close_under_multiplication(unit).dimension() == 1);
  CHECK_THROWS_AS(close_under_multiplication(std::vector<RationalMatrix>{}), std::invalid_argument);

  std::vector<RationalMatrix> bose_mesner;
  for (int m = 0; m <= 2; ++m) bose_mesner.push_back(adjacency_matrix(4, 2, m));
  CHECK(close_under_multiplication(bose_mesner).dimension() == 3);

  // Upper-triangular 3x3 matrices are generated by two elementary units and the identity.
  auto unit_at = [](std::size_t r, std::size_t c) {
    return RationalMatrix::from_entries(3, 3, {{r, c, Rational(1)}});
  };
  std::vector<RationalMatrix> gens{unit_at(0, 1), unit_at(1, 2), RationalMatrix::identity(3),
                                   unit_at(1, 1)};
  const auto closed = close_under_multiplication(gens);
  CHECK(closed.dimension() == 5);
  CHECK(closed.contains(unit_at(0, 2)));
  CHECK_FALSE(closed.contains(unit_at(2, 0)));

  std::reverse(gens.begin(), gens.end());
  const auto reversed = close_under_multiplication(gens);
  CHECK(same_span(closed, reversed));
  CHECK(reversed == closed);
}

TEST_CASE("exchange format round trip is bit-exact") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = random_matrix(rng, 4, 6, 0.3);
    std::ostringstream out;
    write_matrix(out, m);
    std::istringstream in(out.str());
    const auto back = read_matrix(in);
    CHECK(back == m);
    std::ostringstream again;
    write_matrix(again, back);
    CHECK(again.str() == out.str());
  }
  std::istringstream unsorted("2 2\n1 0 1/1\n0 1 1/1\n");
  CHECK_THROWS_AS(read_matrix(unsorted), std::runtime_error);
  std::istringstream outside("2 2\n2 0 1/1\n");
  CHECK_THROWS_AS(read_matrix(outside), std::runtime_error);
}

TEST_CASE("residual summary locates the largest entry") {
  const auto a = RationalMatrix::identity(3);
  auto entries = a.entries();
  entries.push_back({2, 1, Rational(-5, 2)});
  entries.push_back({0, 2, Rational(1, 3)});
  const auto b = RationalMatrix::from_entries(3, 3, entries);
  const auto s = residual_summary(b, a);
  REQUIRE(s.has_value());
  CHECK(s->row == 2);
  CHECK(s->col == 1);
  CHECK(s->value == Rational(-5, 2));
  CHECK(s->nonzeros == 2);
  CHECK_FALSE(residual_summary(a, a).has_value());
}
