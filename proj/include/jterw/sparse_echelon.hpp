#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "jterw/rational.hpp"

namespace jterw {

/// Sparse rational vector; `index` strictly increasing, no stored zeros.
struct SparseVector {
  std::vector<std::uint32_t> index;
  std::vector<Rational> value;

  bool empty() const { return index.empty(); }
  std::size_t size() const { return index.size(); }
  Rational at(std::uint32_t i) const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

/// Reduced row echelon form of a growing set of sparse vectors. Every row has leading
/// coefficient 1 at its pivot, and no pivot column carries a nonzero in any other row.
class SparseEchelon {
 public:
  explicit SparseEchelon(std::size_t length);

  std::size_t length() const { return length_; }
  std::size_t dimension() const { return rows_.size(); }

  /// v minus its projection onto the span along the pivot columns; empty iff v is in the span.
  SparseVector reduce(const SparseVector& v) const;

  /// Adds v to the span. Returns the normalized residual that became a new row, or nothing
  /// when v was already in the span.
  std::optional<SparseVector> insert(const SparseVector& v);

  /// Rows ordered by strictly increasing pivot.
  std::vector<SparseVector> rows() const;
  std::vector<std::uint32_t> pivots() const;

 private:
  std::size_t length_;
  std::vector<SparseVector> rows_;
  std::vector<std::int32_t> pivot_row_;
};

}  // namespace jterw
