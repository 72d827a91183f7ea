#include "jterw/sparse_echelon.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace jterw {

Rational SparseVector::at(std::uint32_t i) const {
  const auto it = std::lower_bound(index.begin(), index.end(), i);
  if (it == index.end() || *it != i) return Rational(0);
  return value[static_cast<std::size_t>(it - index.begin())];
}

namespace {

// a - c * b, merged over sorted indices.
SparseVector axpy_merge(const SparseVector& a, const Rational& c, const SparseVector& b) {
  SparseVector out;
  out.index.reserve(a.size() + b.size());
  out.value.reserve(a.size() + b.size());
  std::size_t p = 0;
  std::size_t q = 0;
  Rational t;
  while (p < a.size() || q < b.size()) {
    if (q == b.size() || (p < a.size() && a.index[p] < b.index[q])) {
      out.index.push_back(a.index[p]);
      out.value.push_back(a.value[p]);
      ++p;
    } else if (p == a.size() || b.index[q] < a.index[p]) {
      out.index.push_back(b.index[q]);
      out.value.push_back(-c * b.value[q]);
      ++q;
    } else {
      t = a.value[p] - c * b.value[q];
      if (t != 0) {
        out.index.push_back(a.index[p]);
        out.value.push_back(t);
      }
      ++p;
      ++q;
    }
  }
  return out;
}

}  // namespace

SparseEchelon::SparseEchelon(std::size_t length)
    : length_(length), pivot_row_(length, -1) {}

SparseVector SparseEchelon::reduce(const SparseVector& v) const {
  if (!v.index.empty() && v.index.back() >= length_) {
    throw std::invalid_argument("vector index beyond echelon length");
  }
  // Rows are fully reduced, so subtracting one never disturbs another pivot column: the
  // coefficients can all be read from v directly.
  std::vector<std::pair<std::uint32_t, Rational>> terms;
  terms.reserve(v.size());
  bool hit = false;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto row = pivot_row_[v.index[k]];
    if (row < 0) {
      terms.emplace_back(v.index[k], v.value[k]);
      continue;
    }
    hit = true;
    const auto& r = rows_[static_cast<std::size_t>(row)];
    for (std::size_t t = 1; t < r.size(); ++t) {
      terms.emplace_back(r.index[t], -v.value[k] * r.value[t]);
    }
  }
  SparseVector out;
  if (!hit) {
    return v;
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  Rational acc;
  for (std::size_t k = 0; k < terms.size();) {
    const auto idx = terms[k].first;
    acc = terms[k].second;
    ++k;
    while (k < terms.size() && terms[k].first == idx) {
      acc += terms[k].second;
      ++k;
    }
    if (acc != 0) {
      out.index.push_back(idx);
      out.value.push_back(acc);
    }
  }
  return out;
}

std::optional<SparseVector> SparseEchelon::insert(const SparseVector& v) {
  SparseVector r = reduce(v);
  if (r.empty()) return std::nullopt;
  const Rational lead = r.value.front();
  if (lead != 1) {
    for (auto& x : r.value) x /= lead;
  }
  const auto pivot = r.index.front();
  for (auto& row : rows_) {
    const Rational c = row.at(pivot);
    if (c != 0) row = axpy_merge(row, c, r);
  }
  pivot_row_[pivot] = static_cast<std::int32_t>(rows_.size());
  rows_.push_back(r);
  return r;
}

std::vector<std::uint32_t> SparseEchelon::pivots() const {
  std::vector<std::uint32_t> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r.index.front());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SparseVector> SparseEchelon::rows() const {
  std::vector<std::size_t> order(rows_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rows_[a].index.front() < rows_[b].index.front();
  });
  std::vector<SparseVector> out;
  out.reserve(order.size());
  for (auto k : order) out.push_back(rows_[k]);
  return out;
}

}  // namespace jterw
