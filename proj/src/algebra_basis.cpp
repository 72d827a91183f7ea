#include "jterw/algebra_basis.hpp"

#include <stdexcept>
#include <string>

namespace jterw {

AlgebraBasis::AlgebraBasis(std::size_t ambient)
    : ambient_(ambient), echelon_(ambient * ambient) {}

SparseVector AlgebraBasis::vectorize(const RationalMatrix& m) const {
  if (m.rows() != ambient_ || m.cols() != ambient_) {
    throw std::invalid_argument("algebra basis of size " + std::to_string(ambient_) +
                                " given a " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + " matrix");
  }
  SparseVector v;
  v.index.reserve(m.nnz());
  v.value.reserve(m.nnz());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto cs = m.row_cols(r);
    const auto vs = m.row_values(r);
    for (std::size_t k = 0; k < cs.size(); ++k) {
      v.index.push_back(static_cast<std::uint32_t>(r * ambient_ + cs[k]));
      v.value.push_back(vs[k]);
    }
  }
  return v;
}

RationalMatrix AlgebraBasis::devectorize(const SparseVector& v) const {
  MatrixAssembler out(ambient_, ambient_);
  std::size_t row = 0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::size_t r = v.index[k] / ambient_;
    while (row < r) {
      out.end_row();
      ++row;
    }
    out.push(static_cast<std::uint32_t>(v.index[k] % ambient_), v.value[k]);
  }
  return out.finish();
}

bool AlgebraBasis::insert(const RationalMatrix& m) {
  return echelon_.insert(vectorize(m)).has_value();
}

bool AlgebraBasis::contains(const RationalMatrix& m) const {
  return echelon_.reduce(vectorize(m)).empty();
}

RationalMatrix AlgebraBasis::residual(const RationalMatrix& m) const {
  return devectorize(echelon_.reduce(vectorize(m)));
}

std::vector<RationalMatrix> AlgebraBasis::elements() const {
  std::vector<RationalMatrix> out;
  for (const auto& row : echelon_.rows()) out.push_back(devectorize(row));
  return out;
}

bool operator==(const AlgebraBasis& a, const AlgebraBasis& b) {
  return a.ambient_ == b.ambient_ && a.echelon_.rows() == b.echelon_.rows();
}

AlgebraBasis saturate_span(AlgebraBasis basis, std::span<const RationalMatrix> extra) {
  for (const auto& m : extra) basis.insert(m);
  return basis;
}

AlgebraBasis close_under_multiplication(std::span<const RationalMatrix> generators) {
  if (generators.empty()) {
    throw std::invalid_argument("closure needs at least one generator");
  }
  const std::size_t n = generators.front().rows();
  AlgebraBasis basis(n);

  // Semi-naive rounds over the reduced echelon rows, which stay much sparser than the raw
  // products. Rows whose pivot is new this round are linearly independent modulo the previous
  // span V', so V = V' + span(new rows). Since V' V' was absorbed last round, V V is covered by
  // the products (new row) x (any row) and (any row) x (new row).
  for (const auto& g : generators) {
    if (!g.is_square() || g.rows() != n) {
      throw std::invalid_argument("closure generators must be square of a common size");
    }
    basis.insert(g);
  }
  std::vector<bool> seen(n * n, false);
  while (true) {
    std::vector<RationalMatrix> rows;
    std::vector<bool> is_new;
    for (const auto& r : basis.echelon_.rows()) {
      const auto pivot = r.index.front();
      is_new.push_back(!seen[pivot]);
      seen[pivot] = true;
      rows.push_back(basis.devectorize(r));
    }
    const std::size_t before = basis.dimension();
    for (std::size_t f = 0; f < rows.size(); ++f) {
      if (!is_new[f]) continue;
      for (std::size_t a = 0; a < rows.size(); ++a) {
        basis.insert(multiply(rows[f], rows[a]));
        if (!is_new[a]) basis.insert(multiply(rows[a], rows[f]));
      }
    }
    if (basis.dimension() == before) break;
  }
  return basis;
}

bool contains_all(const AlgebraBasis& big, const AlgebraBasis& small) {
  for (const auto& m : small.elements()) {
    if (!big.contains(m)) return false;
  }
  return true;
}

bool same_span(const AlgebraBasis& a, const AlgebraBasis& b) {
  return a.dimension() == b.dimension() && contains_all(a, b) && contains_all(b, a);
}

}  // namespace jterw
