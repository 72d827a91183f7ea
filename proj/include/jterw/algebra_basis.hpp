#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jterw/rational_matrix.hpp"
#include "jterw/sparse_echelon.hpp"

namespace jterw {

/// Linear span of square matrices of a fixed size, held in reduced echelon form of the
/// row-major vectorization. Two bases with the same span compare equal.
class AlgebraBasis {
 public:
  explicit AlgebraBasis(std::size_t ambient);

  std::size_t ambient() const { return ambient_; }
  std::size_t dimension() const { return echelon_.dimension(); }

  /// Adds m to the span; returns true when the dimension grew.
  bool insert(const RationalMatrix& m);
  bool contains(const RationalMatrix& m) const;
  /// m minus its projection onto the span; zero iff m is in the span.
  RationalMatrix residual(const RationalMatrix& m) const;

  /// Echelon basis elements, ordered by increasing pivot.
  std::vector<RationalMatrix> elements() const;
  std::vector<std::uint32_t> pivots() const { return echelon_.pivots(); }

  friend bool operator==(const AlgebraBasis& a, const AlgebraBasis& b);

 private:
  friend AlgebraBasis close_under_multiplication(std::span<const RationalMatrix> generators);

  SparseVector vectorize(const RationalMatrix& m) const;
  RationalMatrix devectorize(const SparseVector& v) const;

  std::size_t ambient_;
  SparseEchelon echelon_;
};

/// Echelon basis of span(basis ∪ extra). Throws std::invalid_argument on a size mismatch.
AlgebraBasis saturate_span(AlgebraBasis basis, std::span<const RationalMatrix> extra);

/// Smallest subspace containing the generators and closed under matrix product.
/// Throws std::invalid_argument for an empty list or mismatched sizes.
AlgebraBasis close_under_multiplication(std::span<const RationalMatrix> generators);

/// Every element of `small` lies in span(`big`).
bool contains_all(const AlgebraBasis& big, const AlgebraBasis& small);

/// Mutual membership.
bool same_span(const AlgebraBasis& a, const AlgebraBasis& b);

}  // namespace jterw
