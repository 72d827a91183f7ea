#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "jterw/rational.hpp"

namespace jterw {

/// Exact rational matrix in compressed-row storage. Only nonzero entries are stored and
/// every row's column indices are strictly increasing. Immutable once built.
class RationalMatrix {
 public:
  struct Entry {
    std::size_t row;
    std::size_t col;
    Rational value;
  };

  RationalMatrix() = default;
  /// Zero matrix of the given shape.
  RationalMatrix(std::size_t rows, std::size_t cols);

  /// Duplicate coordinates are summed; zeros are dropped. Throws std::out_of_range for
  /// coordinates outside the shape.
  static RationalMatrix from_entries(std::size_t rows, std::size_t cols, std::vector<Entry> entries);
  static RationalMatrix from_dense(const std::vector<std::vector<Rational>>& rows);
  static RationalMatrix identity(std::size_t n);
  static RationalMatrix all_ones(std::size_t rows, std::size_t cols);
  static RationalMatrix diagonal(std::span<const Rational> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }
  bool is_square() const { return rows_ == cols_; }
  bool is_zero() const { return values_.empty(); }
  /// True when every stored entry has denominator 1.
  bool is_integral() const;

  Rational at(std::size_t row, std::size_t col) const;
  std::span<const std::uint32_t> row_cols(std::size_t row) const;
  std::span<const Rational> row_values(std::size_t row) const;

  std::vector<Entry> entries() const;
  std::vector<std::vector<Rational>> to_dense() const;

  RationalMatrix transpose() const;
  Rational trace() const;

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator*(const Rational& c, const RationalMatrix& m);
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);

 private:
  friend class MatrixAssembler;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_start_{0};
  std::vector<std::uint32_t> cols_index_;
  std::vector<Rational> values_;
};

/// Row-by-row construction with columns appended in increasing order.
class MatrixAssembler {
 public:
  MatrixAssembler(std::size_t rows, std::size_t cols);
  /// Appends to the current row; `col` must exceed the previous column of that row.
  /// Zero values are skipped.
  void push(std::uint32_t col, Rational value);
  void end_row();
  RationalMatrix finish();

 private:
  RationalMatrix m_;
  std::size_t current_row_ = 0;
};

/// Exact product. Throws std::invalid_argument when a.cols() != b.rows().
RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b);

/// Row (ia, ib) of the result is ia * b.rows() + ib; columns likewise.
RationalMatrix kronecker(const RationalMatrix& a, const RationalMatrix& b);

/// Full-size matrix whose (block_row, block_col) block is `y`, zero elsewhere.
RationalMatrix block_embed(const RationalMatrix& y, std::size_t block_row, std::size_t block_col,
                           std::span<const std::size_t> partition);

/// The (block_row, block_col) block of `m` under a square partition.
RationalMatrix block_extract(const RationalMatrix& m, std::size_t block_row, std::size_t block_col,
                             std::span<const std::size_t> partition);

/// result(p, q) = m(order[p], order[q]) for a permutation `order` of the row/column indices.
RationalMatrix permute(const RationalMatrix& m, std::span<const std::size_t> order);

/// Exact rank by sparse Gaussian elimination over the rows.
std::size_t rank(const RationalMatrix& m);

/// Location of the largest-magnitude entry of (actual - expected).
struct ResidualSummary {
  std::size_t row = 0;
  std::size_t col = 0;
  Rational value;
  std::size_t nonzeros = 0;
};

/// Empty when the two matrices are equal. Shapes must agree (throws otherwise).
std::optional<ResidualSummary> residual_summary(const RationalMatrix& actual,
                                                const RationalMatrix& expected);

/// Exchange format: "rows cols" then one "row col num/den" line per nonzero, 0-based,
/// sorted by (row, col).
void write_matrix(std::ostream& out, const RationalMatrix& m);
/// Throws std::runtime_error on malformed or out-of-order input.
RationalMatrix read_matrix(std::istream& in);

}  // namespace jterw
