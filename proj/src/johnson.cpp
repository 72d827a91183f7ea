#include "jterw/johnson.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <utility>

#include "jterw/combinatorics.hpp"

namespace jterw {

SchemeSpec::SchemeSpec(int n_, int d_) : n(n_), d(d_) {
  if (d < 0 || n < 2 * d) {
    throw std::invalid_argument("J(" + std::to_string(n) + "," + std::to_string(d) +
                                ") violates n >= 2d >= 0");
  }
  if (n > kMaxGroundSet) throw std::invalid_argument("n too large");
}

std::size_t SchemeSpec::vertex_count() const { return static_cast<std::size_t>(binomial(n, d)); }

namespace {

void check_subset_sizes(int v, int i, int j) {
  if (v < 0 || v > kMaxGroundSet || i < 0 || j < 0 || i > v || j > v) {
    throw std::invalid_argument("intersection matrix sizes (" + std::to_string(i) + ", " +
                                std::to_string(j) + ") invalid for v = " + std::to_string(v));
  }
}

RationalMatrix pattern_matrix(int v, int row_size, int col_size, int meet) {
  const auto row_sets = enumerate_masks(v, row_size);
  const auto col_sets = enumerate_masks(v, col_size);
  MatrixAssembler out(row_sets.size(), col_sets.size());
  const Rational one(1);
  for (auto a : row_sets) {
    for (std::size_t c = 0; c < col_sets.size(); ++c) {
      if (std::popcount(a & col_sets[c]) == meet) out.push(static_cast<std::uint32_t>(c), one);
    }
    out.end_row();
  }
  return out.finish();
}

}  // namespace

RationalMatrix intersection_matrix(const IntersectionMatrixKey& key) {
  check_subset_sizes(key.v, key.i, key.j);
  if (key.r < std::max(0, key.i + key.j - key.v) || key.r > std::min(key.i, key.j)) {
    return RationalMatrix(static_cast<std::size_t>(binomial(key.v, key.i)),
                          static_cast<std::size_t>(binomial(key.v, key.j)));
  }
  return pattern_matrix(key.v, key.i, key.j, key.r);
}

RationalMatrix containment_matrix(int v, int i, int j) {
  return intersection_matrix(v, i, j, std::min(i, j));
}

RationalMatrix IntersectionSource::operator()(int v, int i, int j, int r) const {
  RationalMatrix m = intersection_matrix(v, i, j, r);
  if (!flip_ || !(flip_->key == IntersectionMatrixKey{v, i, j, r})) return m;
  if (flip_->row >= m.rows() || flip_->col >= m.cols()) {
    throw std::out_of_range("entry flip outside H matrix");
  }
  auto entries = m.entries();
  const Rational current = m.at(flip_->row, flip_->col);
  entries.push_back({flip_->row, flip_->col, current == 0 ? Rational(1) : Rational(-current)});
  return RationalMatrix::from_entries(m.rows(), m.cols(), std::move(entries));
}

RationalMatrix IntersectionSource::containment(int v, int i, int j) const {
  return (*this)(v, i, j, std::min(i, j));
}

RationalMatrix adjacency_matrix(int v, int k, int m) {
  if (k < 0 || k > v || m < 0 || m > k) {
    throw std::invalid_argument("adjacency_matrix: need 0 <= m <= k <= v, got v=" +
                                std::to_string(v) + " k=" + std::to_string(k) +
                                " m=" + std::to_string(m));
  }
  const auto vertices = enumerate(v, k);
  MatrixAssembler out(vertices.size(), vertices.size());
  const Rational one(1);
  for (const auto& x : vertices) {
    for (std::size_t c = 0; c < vertices.size(); ++c) {
      if (intersection_size(x, vertices[c]) == k - m) out.push(static_cast<std::uint32_t>(c), one);
    }
    out.end_row();
  }
  return out.finish();
}

Rational eigenvalue_p1(int v, int k, int j) {
  return Rational((k - j) * (v - k - j) - j);
}

Rational eigenvalue_pk(int v, int k, int j) {
  const Rational magnitude(static_cast<long>(binomial(v - k - j, k - j)));
  return (j % 2 == 0) ? magnitude : Rational(-magnitude);
}

int idempotent_count(int v, int k) {
  if (k < 0 || k > v) throw std::invalid_argument("idempotent_count: need 0 <= k <= v");
  return std::min(k, v - k) + 1;
}

EigenData eigen_data(int v, int k) {
  EigenData out{v, k, {}, {}};
  for (int j = 0; j < idempotent_count(v, k); ++j) {
    out.p1.push_back(eigenvalue_p1(v, k, j));
    out.pk.push_back(eigenvalue_pk(v, k, j));
  }
  return out;
}

namespace {

std::vector<RationalMatrix> build_idempotents(int v, int k) {
  const int count = idempotent_count(v, k);
  const auto size = static_cast<std::size_t>(binomial(v, k));
  if (count == 1) return {RationalMatrix::identity(size)};
  const EigenData eig = eigen_data(v, k);
  for (int j = 1; j < count; ++j) {
    if (!(eig.p1[static_cast<std::size_t>(j)] < eig.p1[static_cast<std::size_t>(j - 1)])) {
      throw std::logic_error("p_1 eigenvalues not strictly decreasing");
    }
  }
  const RationalMatrix a1 = adjacency_matrix(v, k, 1);
  const RationalMatrix identity = RationalMatrix::identity(size);
  std::vector<RationalMatrix> shifted;
  for (int m = 0; m < count; ++m) {
    shifted.push_back(a1 - eig.p1[static_cast<std::size_t>(m)] * identity);
  }
  std::vector<RationalMatrix> out;
  for (int j = 0; j < count; ++j) {
    RationalMatrix e;
    bool first = true;
    Rational scale(1);
    for (int m = 0; m < count; ++m) {
      if (m == j) continue;
      scale *= eig.p1[static_cast<std::size_t>(j)] - eig.p1[static_cast<std::size_t>(m)];
      e = first ? shifted[static_cast<std::size_t>(m)]
                : multiply(e, shifted[static_cast<std::size_t>(m)]);
      first = false;
    }
    out.push_back(Rational(1 / scale) * e);
  }
  return out;
}

struct IdempotentCache {
  std::shared_mutex mutex;
  std::map<std::pair<int, int>, std::unique_ptr<const std::vector<RationalMatrix>>> table;
};

IdempotentCache& idempotent_cache() {
  static IdempotentCache cache;
  return cache;
}

}  // namespace

const std::vector<RationalMatrix>& primitive_idempotents(int v, int k) {
  if (k < 0 || k > v || v > kMaxGroundSet) {
    throw std::invalid_argument("primitive_idempotents: need 0 <= k <= v");
  }
  auto& cache = idempotent_cache();
  const auto key = std::make_pair(v, k);
  {
    std::shared_lock lock(cache.mutex);
    if (auto it = cache.table.find(key); it != cache.table.end()) return *it->second;
  }
  auto built = std::make_unique<const std::vector<RationalMatrix>>(build_idempotents(v, k));
  std::unique_lock lock(cache.mutex);
  auto [it, inserted] = cache.table.try_emplace(key, std::move(built));
  return *it->second;
}

RationalMatrix idempotent_or_zero(int v, int k, int j) {
  const auto& es = primitive_idempotents(v, k);
  if (j < 0 || j >= static_cast<int>(es.size())) {
    const auto size = static_cast<std::size_t>(binomial(v, k));
    return RationalMatrix(size, size);
  }
  return es[static_cast<std::size_t>(j)];
}

Rational eigenvalue_from_matrices(int v, int k, int m, int j) {
  const RationalMatrix e = idempotent_or_zero(v, k, j);
  if (e.is_zero()) throw std::invalid_argument("eigenvalue_from_matrices: idempotent index out of range");
  if (m < 0) throw std::invalid_argument("eigenvalue_from_matrices: negative relation index");
  if (m > k) return Rational(0);
  const RationalMatrix image = multiply(adjacency_matrix(v, k, m), e);
  std::size_t row = 0;
  while (e.row_cols(row).empty()) ++row;
  const auto col = e.row_cols(row).front();
  const Rational c = image.at(row, col) / e.row_values(row).front();
  if (!(image == c * e)) throw std::logic_error("A_m E_j is not a multiple of E_j");
  return c;
}

Rational lift_factor_l(int v, int k, int j) { return Rational(v - k) + eigenvalue_p1(v, k, j); }
Rational lift_factor_p(int v, int k, int j) { return Rational(k) + eigenvalue_p1(v, k, j); }

std::vector<Rational> triple_product_coefficients(int v, int i, int j, int k, int l, int s) {
  std::vector<Rational> out;
  for (int g = 0; g <= std::min(i, k); ++g) {
    std::int64_t c = 0;
    for (int h = 0; h <= g; ++h) {
      c += binomial(g, h) * binomial(i - g, l - h) * binomial(k - g, s - h) *
           binomial(v + g - i - k, j + h - l - s);
    }
    out.emplace_back(static_cast<long>(c));
  }
  return out;
}

std::vector<IntersectionTerm> containment_product_chain(int v, int i, int j, int l) {
  if (!(0 <= i && i <= j && j <= l && l <= v)) {
    throw std::invalid_argument("containment_product_chain: need 0 <= i <= j <= l <= v");
  }
  return {{i, Rational(static_cast<long>(binomial(l - i, l - j)))}};
}

std::vector<IntersectionTerm> containment_product_through_superset(int v, int i, int j, int l) {
  const int top = std::max(i, l);
  if (!(i >= 0 && l >= 0 && top <= j && j <= v)) {
    throw std::invalid_argument("containment_product_through_superset: need max(i,l) <= j <= v");
  }
  std::vector<IntersectionTerm> out;
  for (int m = 0; m <= j - top; ++m) {
    out.push_back({std::min(i, l) - m, Rational(static_cast<long>(binomial(v - top - m, j - top - m)))});
  }
  return out;
}

std::vector<IntersectionTerm> containment_product_through_subset(int v, int i, int j, int l) {
  const int bottom = std::min(i, l);
  if (!(j >= 0 && j <= bottom && std::max(i, l) <= v)) {
    throw std::invalid_argument("containment_product_through_subset: need j <= min(i,l) <= v");
  }
  std::vector<IntersectionTerm> out;
  for (int m = 0; m <= bottom - j; ++m) {
    out.push_back({bottom - m, Rational(static_cast<long>(binomial(bottom - m, j)))});
  }
  return out;
}

RationalMatrix expand_terms(int v, int i, int l, const std::vector<IntersectionTerm>& terms) {
  check_subset_sizes(v, i, l);
  RationalMatrix sum(static_cast<std::size_t>(binomial(v, i)),
                     static_cast<std::size_t>(binomial(v, l)));
  for (const auto& t : terms) {
    if (t.coefficient == 0 || t.r < 0) continue;
    sum = sum + t.coefficient * intersection_matrix(v, i, l, t.r);
  }
  return sum;
}

std::vector<int> feasible_r_set(int v, int k, int h) {
  check_subset_sizes(v, k, h);
  std::vector<int> out;
  for (int r = std::max(0, k + h - v); r <= std::min(k, h); ++r) out.push_back(r);
  return out;
}

}  // namespace jterw
