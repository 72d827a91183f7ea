#include "jterw/rational_matrix.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "jterw/sparse_echelon.hpp"

namespace jterw {

namespace {

std::string shape_str(const RationalMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const RationalMatrix& a, const RationalMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch " + shape_str(a) + " vs " +
                                shape_str(b));
  }
}

mpz_class from_int128(__int128 x) {
  const bool negative = x < 0;
  unsigned __int128 u = negative ? -static_cast<unsigned __int128>(x)
                                 : static_cast<unsigned __int128>(x);
  mpz_class r(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  r <<= 64;
  r += static_cast<unsigned long>(static_cast<std::uint64_t>(u));
  if (negative) r = -r;
  return r;
}

// Integer numerators of m scaled by the lcm of its denominators.
struct ScaledIntegers {
  mpz_class denominator{1};
  std::vector<mpz_class> numerators;
  bool fits_int64 = true;
  int max_bits = 0;
};

ScaledIntegers scale_to_integers(std::span<const Rational> values) {
  ScaledIntegers s;
  for (const auto& v : values) {
    if (v.get_den() != 1) mpz_lcm(s.denominator.get_mpz_t(), s.denominator.get_mpz_t(),
                                  v.get_den().get_mpz_t());
  }
  s.numerators.reserve(values.size());
  for (const auto& v : values) {
    if (s.denominator == 1) {
      s.numerators.push_back(v.get_num());
    } else {
      s.numerators.push_back(v.get_num() * (s.denominator / v.get_den()));
    }
    const auto& n = s.numerators.back();
    if (!mpz_fits_slong_p(n.get_mpz_t())) s.fits_int64 = false;
    s.max_bits = std::max(s.max_bits, static_cast<int>(mpz_sizeinbase(n.get_mpz_t(), 2)));
  }
  return s;
}

}  // namespace

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_start_(rows + 1, 0) {
  if (cols > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("column count exceeds 32-bit index range");
  }
}

MatrixAssembler::MatrixAssembler(std::size_t rows, std::size_t cols) : m_(rows, cols) {
  m_.row_start_.assign(1, 0);
  m_.row_start_.reserve(rows + 1);
}

void MatrixAssembler::push(std::uint32_t col, Rational value) {
  if (current_row_ >= m_.rows_) throw std::logic_error("assembler: too many rows");
  if (col >= m_.cols_) throw std::out_of_range("assembler: column out of range");
  if (value == 0) return;
  if (m_.cols_index_.size() > m_.row_start_.back() && m_.cols_index_.back() >= col) {
    throw std::logic_error("assembler: columns must increase within a row");
  }
  m_.cols_index_.push_back(col);
  m_.values_.push_back(std::move(value));
}

void MatrixAssembler::end_row() {
  if (current_row_ >= m_.rows_) throw std::logic_error("assembler: too many rows");
  m_.row_start_.push_back(m_.values_.size());
  ++current_row_;
}

RationalMatrix MatrixAssembler::finish() {
  while (current_row_ < m_.rows_) end_row();
  return std::move(m_);
}

RationalMatrix RationalMatrix::from_entries(std::size_t rows, std::size_t cols,
                                            std::vector<Entry> entries) {
  for (const auto& e : entries) {
    if (e.row >= rows || e.col >= cols) {
      throw std::out_of_range("entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                              ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  MatrixAssembler out(rows, cols);
  std::size_t row = 0;
  for (std::size_t k = 0; k < entries.size();) {
    Rational acc = entries[k].value;
    const auto r = entries[k].row;
    const auto c = entries[k].col;
    ++k;
    while (k < entries.size() && entries[k].row == r && entries[k].col == c) {
      acc += entries[k].value;
      ++k;
    }
    while (row < r) {
      out.end_row();
      ++row;
    }
    out.push(static_cast<std::uint32_t>(c), std::move(acc));
  }
  return out.finish();
}

RationalMatrix RationalMatrix::from_dense(const std::vector<std::vector<Rational>>& rows) {
  const std::size_t n = rows.size();
  const std::size_t m = n == 0 ? 0 : rows.front().size();
  MatrixAssembler out(n, m);
  for (const auto& row : rows) {
    if (row.size() != m) throw std::invalid_argument("from_dense: ragged rows");
    for (std::size_t c = 0; c < m; ++c) out.push(static_cast<std::uint32_t>(c), row[c]);
    out.end_row();
  }
  return out.finish();
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  MatrixAssembler out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push(static_cast<std::uint32_t>(i), Rational(1));
    out.end_row();
  }
  return out.finish();
}

RationalMatrix RationalMatrix::all_ones(std::size_t rows, std::size_t cols) {
  MatrixAssembler out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out.push(static_cast<std::uint32_t>(j), Rational(1));
    out.end_row();
  }
  return out.finish();
}

RationalMatrix RationalMatrix::diagonal(std::span<const Rational> values) {
  MatrixAssembler out(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.push(static_cast<std::uint32_t>(i), values[i]);
    out.end_row();
  }
  return out.finish();
}

bool RationalMatrix::is_integral() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](const Rational& q) { return q.get_den() == 1; });
}

std::span<const std::uint32_t> RationalMatrix::row_cols(std::size_t row) const {
  return {cols_index_.data() + row_start_[row], row_start_[row + 1] - row_start_[row]};
}

std::span<const Rational> RationalMatrix::row_values(std::size_t row) const {
  return {values_.data() + row_start_[row], row_start_[row + 1] - row_start_[row]};
}

Rational RationalMatrix::at(std::size_t row, std::size_t col) const {
  if (row >= rows_ || col >= cols_) throw std::out_of_range("matrix index out of range");
  const auto cs = row_cols(row);
  const auto it = std::lower_bound(cs.begin(), cs.end(), static_cast<std::uint32_t>(col));
  if (it == cs.end() || *it != col) return Rational(0);
  return row_values(row)[static_cast<std::size_t>(it - cs.begin())];
}

std::vector<RationalMatrix::Entry> RationalMatrix::entries() const {
  std::vector<Entry> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto cs = row_cols(r);
    const auto vs = row_values(r);
    for (std::size_t k = 0; k < cs.size(); ++k) out.push_back({r, cs[k], vs[k]});
  }
  return out;
}

std::vector<std::vector<Rational>> RationalMatrix::to_dense() const {
  std::vector<std::vector<Rational>> out(rows_, std::vector<Rational>(cols_));
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto cs = row_cols(r);
    const auto vs = row_values(r);
    for (std::size_t k = 0; k < cs.size(); ++k) out[r][cs[k]] = vs[k];
  }
  return out;
}

RationalMatrix RationalMatrix::transpose() const {
  std::vector<std::size_t> count(cols_ + 1, 0);
  for (auto c : cols_index_) ++count[c + 1];
  for (std::size_t c = 0; c < cols_; ++c) count[c + 1] += count[c];
  RationalMatrix t(cols_, rows_);
  t.row_start_ = count;
  t.cols_index_.resize(nnz());
  t.values_.resize(nnz());
  auto next = count;
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto cs = row_cols(r);
    const auto vs = row_values(r);
    for (std::size_t k = 0; k < cs.size(); ++k) {
      const auto slot = next[cs[k]]++;
      t.cols_index_[slot] = static_cast<std::uint32_t>(r);
      t.values_[slot] = vs[k];
    }
  }
  return t;
}

Rational RationalMatrix::trace() const {
  if (!is_square()) throw std::invalid_argument("trace of non-square matrix");
  Rational t(0);
  for (std::size_t r = 0; r < rows_; ++r) t += at(r, r);
  return t;
}

bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.row_start_ == b.row_start_ &&
         a.cols_index_ == b.cols_index_ && a.values_ == b.values_;
}

namespace {

template <typename Combine>
RationalMatrix merge_rows(const RationalMatrix& a, const RationalMatrix& b, Combine combine) {
  MatrixAssembler out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto ac = a.row_cols(r);
    const auto av = a.row_values(r);
    const auto bc = b.row_cols(r);
    const auto bv = b.row_values(r);
    std::size_t p = 0;
    std::size_t q = 0;
    while (p < ac.size() || q < bc.size()) {
      if (q == bc.size() || (p < ac.size() && ac[p] < bc[q])) {
        out.push(ac[p], combine(av[p], Rational(0)));
        ++p;
      } else if (p == ac.size() || bc[q] < ac[p]) {
        out.push(bc[q], combine(Rational(0), bv[q]));
        ++q;
      } else {
        out.push(ac[p], combine(av[p], bv[q]));
        ++p;
        ++q;
      }
    }
    out.end_row();
  }
  return out.finish();
}

}  // namespace

RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
  require_same_shape(a, b, "add");
  return merge_rows(a, b, [](const Rational& x, const Rational& y) { return Rational(x + y); });
}

RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
  require_same_shape(a, b, "subtract");
  return merge_rows(a, b, [](const Rational& x, const Rational& y) { return Rational(x - y); });
}

RationalMatrix operator*(const Rational& c, const RationalMatrix& m) {
  if (c == 0) return RationalMatrix(m.rows(), m.cols());
  RationalMatrix out = m;
  for (auto& v : out.values_) v *= c;
  return out;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) { return multiply(a, b); }

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("multiply: inner dimension mismatch " + shape_str(a) + " * " +
                                shape_str(b));
  }
  // Work on integer numerators over a common denominator so the inner loop never reduces
  // fractions; each output entry is canonicalized once.
  std::vector<Rational> a_values;
  std::vector<Rational> b_values;
  a_values.reserve(a.nnz());
  b_values.reserve(b.nnz());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (const auto& v : a.row_values(r)) a_values.push_back(v);
  }
  for (std::size_t r = 0; r < b.rows(); ++r) {
    for (const auto& v : b.row_values(r)) b_values.push_back(v);
  }
  const ScaledIntegers sa = scale_to_integers(a_values);
  const ScaledIntegers sb = scale_to_integers(b_values);
  const mpz_class denominator = sa.denominator * sb.denominator;
  const int inner_bits = std::bit_width(std::max<std::size_t>(a.cols(), 1));
  const bool narrow = sa.fits_int64 && sb.fits_int64 &&
                      sa.max_bits + sb.max_bits + inner_bits <= 125;

  std::vector<std::size_t> a_offset(a.rows() + 1, 0);
  for (std::size_t r = 0; r < a.rows(); ++r) a_offset[r + 1] = a_offset[r] + a.row_cols(r).size();
  std::vector<std::size_t> b_offset(b.rows() + 1, 0);
  for (std::size_t r = 0; r < b.rows(); ++r) b_offset[r + 1] = b_offset[r] + b.row_cols(r).size();

  MatrixAssembler out(a.rows(), b.cols());
  std::vector<char> touched(b.cols(), 0);
  std::vector<std::uint32_t> touched_cols;

  auto emit = [&](std::uint32_t col, mpz_class numerator) {
    if (numerator == 0) return;
    if (denominator == 1) {
      out.push(col, Rational(numerator));
    } else {
      Rational q(numerator, denominator);
      q.canonicalize();
      out.push(col, std::move(q));
    }
  };

  if (narrow) {
    std::vector<std::int64_t> an(sa.numerators.size());
    std::vector<std::int64_t> bn(sb.numerators.size());
    for (std::size_t k = 0; k < an.size(); ++k) an[k] = sa.numerators[k].get_si();
    for (std::size_t k = 0; k < bn.size(); ++k) bn[k] = sb.numerators[k].get_si();
    std::vector<__int128> acc(b.cols(), 0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      const auto ac = a.row_cols(r);
      for (std::size_t p = 0; p < ac.size(); ++p) {
        const __int128 x = an[a_offset[r] + p];
        const auto bc = b.row_cols(ac[p]);
        const std::size_t base = b_offset[ac[p]];
        for (std::size_t q = 0; q < bc.size(); ++q) {
          const auto c = bc[q];
          if (!touched[c]) {
            touched[c] = 1;
            touched_cols.push_back(c);
          }
          acc[c] += x * bn[base + q];
        }
      }
      std::sort(touched_cols.begin(), touched_cols.end());
      for (auto c : touched_cols) {
        if (acc[c] != 0) emit(c, from_int128(acc[c]));
        acc[c] = 0;
        touched[c] = 0;
      }
      touched_cols.clear();
      out.end_row();
    }
  } else {
    std::vector<mpz_class> acc(b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
      const auto ac = a.row_cols(r);
      for (std::size_t p = 0; p < ac.size(); ++p) {
        const auto& x = sa.numerators[a_offset[r] + p];
        const auto bc = b.row_cols(ac[p]);
        const std::size_t base = b_offset[ac[p]];
        for (std::size_t q = 0; q < bc.size(); ++q) {
          const auto c = bc[q];
          if (!touched[c]) {
            touched[c] = 1;
            touched_cols.push_back(c);
          }
          mpz_addmul(acc[c].get_mpz_t(), x.get_mpz_t(), sb.numerators[base + q].get_mpz_t());
        }
      }
      std::sort(touched_cols.begin(), touched_cols.end());
      for (auto c : touched_cols) {
        emit(c, acc[c]);
        acc[c] = 0;
        touched[c] = 0;
      }
      touched_cols.clear();
      out.end_row();
    }
  }
  return out.finish();
}

RationalMatrix kronecker(const RationalMatrix& a, const RationalMatrix& b) {
  MatrixAssembler out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ra = 0; ra < a.rows(); ++ra) {
    const auto ac = a.row_cols(ra);
    const auto av = a.row_values(ra);
    for (std::size_t rb = 0; rb < b.rows(); ++rb) {
      const auto bc = b.row_cols(rb);
      const auto bv = b.row_values(rb);
      for (std::size_t p = 0; p < ac.size(); ++p) {
        const std::size_t col_base = ac[p] * b.cols();
        for (std::size_t q = 0; q < bc.size(); ++q) {
          out.push(static_cast<std::uint32_t>(col_base + bc[q]), av[p] * bv[q]);
        }
      }
      out.end_row();
    }
  }
  return out.finish();
}

namespace {

std::vector<std::size_t> offsets_of(std::span<const std::size_t> partition) {
  std::vector<std::size_t> offsets(partition.size() + 1, 0);
  for (std::size_t k = 0; k < partition.size(); ++k) offsets[k + 1] = offsets[k] + partition[k];
  return offsets;
}

}  // namespace

RationalMatrix block_embed(const RationalMatrix& y, std::size_t block_row, std::size_t block_col,
                           std::span<const std::size_t> partition) {
  if (block_row >= partition.size() || block_col >= partition.size()) {
    throw std::invalid_argument("block_embed: block index outside partition");
  }
  if (y.rows() != partition[block_row] || y.cols() != partition[block_col]) {
    throw std::invalid_argument("block_embed: block " + shape_str(y) + " does not fit (" +
                                std::to_string(partition[block_row]) + ", " +
                                std::to_string(partition[block_col]) + ")");
  }
  const auto offsets = offsets_of(partition);
  const std::size_t n = offsets.back();
  MatrixAssembler out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (r >= offsets[block_row] && r < offsets[block_row + 1]) {
      const auto local = r - offsets[block_row];
      const auto cs = y.row_cols(local);
      const auto vs = y.row_values(local);
      for (std::size_t k = 0; k < cs.size(); ++k) {
        out.push(static_cast<std::uint32_t>(offsets[block_col] + cs[k]), vs[k]);
      }
    }
    out.end_row();
  }
  return out.finish();
}

RationalMatrix block_extract(const RationalMatrix& m, std::size_t block_row, std::size_t block_col,
                             std::span<const std::size_t> partition) {
  const auto offsets = offsets_of(partition);
  if (m.rows() != offsets.back() || m.cols() != offsets.back()) {
    throw std::invalid_argument("block_extract: matrix does not match partition");
  }
  if (block_row >= partition.size() || block_col >= partition.size()) {
    throw std::invalid_argument("block_extract: block index outside partition");
  }
  const auto c0 = static_cast<std::uint32_t>(offsets[block_col]);
  const auto c1 = static_cast<std::uint32_t>(offsets[block_col + 1]);
  MatrixAssembler out(partition[block_row], partition[block_col]);
  for (std::size_t r = offsets[block_row]; r < offsets[block_row + 1]; ++r) {
    const auto cs = m.row_cols(r);
    const auto vs = m.row_values(r);
    for (std::size_t k = 0; k < cs.size(); ++k) {
      if (cs[k] >= c0 && cs[k] < c1) out.push(cs[k] - c0, vs[k]);
    }
    out.end_row();
  }
  return out.finish();
}

RationalMatrix permute(const RationalMatrix& m, std::span<const std::size_t> order) {
  if (!m.is_square() || order.size() != m.rows()) {
    throw std::invalid_argument("permute: order length must match a square matrix");
  }
  std::vector<std::size_t> position(order.size(), order.size());
  for (std::size_t p = 0; p < order.size(); ++p) {
    if (order[p] >= order.size() || position[order[p]] != order.size()) {
      throw std::invalid_argument("permute: not a permutation");
    }
    position[order[p]] = p;
  }
  MatrixAssembler out(m.rows(), m.cols());
  std::vector<std::pair<std::uint32_t, Rational>> row;
  for (std::size_t p = 0; p < order.size(); ++p) {
    const auto cs = m.row_cols(order[p]);
    const auto vs = m.row_values(order[p]);
    row.clear();
    for (std::size_t k = 0; k < cs.size(); ++k) {
      row.emplace_back(static_cast<std::uint32_t>(position[cs[k]]), vs[k]);
    }
    std::sort(row.begin(), row.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [c, v] : row) out.push(c, std::move(v));
    out.end_row();
  }
  return out.finish();
}

std::size_t rank(const RationalMatrix& m) {
  SparseEchelon echelon(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    SparseVector v;
    const auto cs = m.row_cols(r);
    const auto vs = m.row_values(r);
    v.index.assign(cs.begin(), cs.end());
    v.value.assign(vs.begin(), vs.end());
    echelon.insert(v);
  }
  return echelon.dimension();
}

std::optional<ResidualSummary> residual_summary(const RationalMatrix& actual,
                                                const RationalMatrix& expected) {
  require_same_shape(actual, expected, "residual");
  const RationalMatrix diff = actual - expected;
  if (diff.is_zero()) return std::nullopt;
  ResidualSummary s;
  s.nonzeros = diff.nnz();
  Rational best(-1);
  for (std::size_t r = 0; r < diff.rows(); ++r) {
    const auto cs = diff.row_cols(r);
    const auto vs = diff.row_values(r);
    for (std::size_t k = 0; k < cs.size(); ++k) {
      const Rational mag = abs(vs[k]);
      if (mag > best) {
        best = mag;
        s.row = r;
        s.col = cs[k];
        s.value = vs[k];
      }
    }
  }
  return s;
}

void write_matrix(std::ostream& out, const RationalMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto cs = m.row_cols(r);
    const auto vs = m.row_values(r);
    for (std::size_t k = 0; k < cs.size(); ++k) {
      out << r << ' ' << cs[k] << ' ' << to_string(vs[k]) << '\n';
    }
  }
}

RationalMatrix read_matrix(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };
  if (!next_line()) throw std::runtime_error("matrix file: missing header");
  std::size_t rows = 0;
  std::size_t cols = 0;
  {
    std::istringstream header(line);
    if (!(header >> rows >> cols)) throw std::runtime_error("matrix file: bad header '" + line + "'");
    std::string extra;
    if (header >> extra) throw std::runtime_error("matrix file: bad header '" + line + "'");
  }
  MatrixAssembler out(rows, cols);
  std::size_t current_row = 0;
  bool have_previous = false;
  std::size_t previous_row = 0;
  std::size_t previous_col = 0;
  while (next_line()) {
    std::istringstream fields(line);
    std::size_t r = 0;
    std::size_t c = 0;
    std::string value;
    std::string extra;
    if (!(fields >> r >> c >> value) || (fields >> extra)) {
      throw std::runtime_error("matrix file: bad entry line '" + line + "'");
    }
    if (r >= rows || c >= cols) throw std::runtime_error("matrix file: entry out of range '" + line + "'");
    if (have_previous && (r < previous_row || (r == previous_row && c <= previous_col))) {
      throw std::runtime_error("matrix file: entries not sorted by (row, col) at '" + line + "'");
    }
    Rational q;
    try {
      q = parse_rational(value);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(std::string("matrix file: ") + e.what());
    }
    if (q == 0) throw std::runtime_error("matrix file: explicit zero entry '" + line + "'");
    while (current_row < r) {
      out.end_row();
      ++current_row;
    }
    out.push(static_cast<std::uint32_t>(c), std::move(q));
    have_previous = true;
    previous_row = r;
    previous_col = c;
  }
  return out.finish();
}

}  // namespace jterw
