#include "jterw/terwilliger.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "jterw/errors.hpp"

namespace jterw {

namespace {

KSubset default_base_point(const SchemeSpec& scheme) {
  std::vector<int> elements(static_cast<std::size_t>(scheme.d));
  for (int t = 0; t < scheme.d; ++t) elements[static_cast<std::size_t>(t)] = t + 1;
  return KSubset(scheme.n, std::move(elements));
}

std::size_t to_size(std::int64_t v) { return static_cast<std::size_t>(v); }

// A_1 of J(v, k), or the zero matrix when k = 0 or k = v (a single vertex class).
RationalMatrix adjacency_or_zero(int v, int k) {
  const auto size = to_size(binomial(v, k));
  if (k < 1 || k > v) return RationalMatrix(size, size);
  return adjacency_matrix(v, k, 1);
}

// c with p = c * e. Throws VerificationError when no such c exists.
Rational proportionality(const RationalMatrix& p, const RationalMatrix& e, const std::string& what) {
  if (e.is_zero()) {
    if (p.is_zero()) return Rational(0);
    throw VerificationError(what + ": product is nonzero but the target block vanishes",
                            residual_summary(p, e));
  }
  std::size_t row = 0;
  while (e.row_cols(row).empty()) ++row;
  const auto col = e.row_cols(row).front();
  Rational c = p.at(row, col) / e.row_values(row).front();
  const auto expected = c * e;
  if (!(p == expected)) {
    throw VerificationError(what + ": product is not a multiple of the target block",
                            residual_summary(p, expected));
  }
  return c;
}

void check_sphere(const BasePointContext& ctx, int i, const char* name) {
  if (i < 0 || i > ctx.d()) {
    throw std::invalid_argument(std::string(name) + ": sphere index " + std::to_string(i) +
                                " outside [0, " + std::to_string(ctx.d()) + "]");
  }
}

}  // namespace

Regime regime_of(const SchemeSpec& scheme) {
  if (scheme.n == 2 * scheme.d) return Regime::Boundary;
  if (scheme.n >= 3 * scheme.d) return Regime::Classical;
  return Regime::Open;
}

std::string_view regime_name(Regime regime) {
  switch (regime) {
    case Regime::Boundary:
      return "n=2d";
    case Regime::Open:
      return "2d<n<3d";
    case Regime::Classical:
      return "n>=3d";
  }
  return "";
}

BasePointContext::BasePointContext(SchemeSpec scheme)
    : scheme_(scheme), base_point_(default_base_point(scheme)) {
  build();
}

BasePointContext::BasePointContext(SchemeSpec scheme, KSubset base_point)
    : scheme_(scheme), base_point_(std::move(base_point)) {
  if (base_point_.ground_size() != scheme_.n || base_point_.size() != scheme_.d) {
    throw std::invalid_argument("base point must be a " + std::to_string(scheme_.d) +
                                "-subset of [" + std::to_string(scheme_.n) + "]");
  }
  build();
}

void BasePointContext::build() {
  const int n = scheme_.n;
  const int d = scheme_.d;
  const std::uint64_t x = base_point_.mask();

  partition_.assign(static_cast<std::size_t>(d) + 1, 0);
  offsets_.assign(static_cast<std::size_t>(d) + 2, 0);
  for (int i = 0; i <= d; ++i) {
    partition_[static_cast<std::size_t>(i)] = to_size(binomial(d, d - i) * binomial(n - d, i));
    offsets_[static_cast<std::size_t>(i) + 1] = offsets_[static_cast<std::size_t>(i)] +
                                                partition_[static_cast<std::size_t>(i)];
  }

  // Positions of each ground element inside x and inside its complement (0-based).
  std::vector<int> local(static_cast<std::size_t>(n), 0);
  int in_x = 0;
  int out_x = 0;
  for (int b = 0; b < n; ++b) {
    local[static_cast<std::size_t>(b)] = ((x >> b) & 1U) ? in_x++ : out_x++;
  }
  auto relabel = [&](std::uint64_t part) {
    std::uint64_t m = 0;
    for (int b = 0; b < n; ++b) {
      if ((part >> b) & 1U) m |= std::uint64_t{1} << local[static_cast<std::size_t>(b)];
    }
    return m;
  };

  const auto masks = enumerate_masks(n, d);
  order_.assign(masks.size(), 0);
  inverse_.assign(masks.size(), 0);
  sphere_.assign(masks.size(), 0);
  for (std::size_t c = 0; c < masks.size(); ++c) {
    const std::uint64_t y = masks[c];
    const int i = d - std::popcount(x & y);
    const std::size_t inside = rank_mask(relabel(x & y));
    const std::size_t outside = rank_mask(relabel(y & ~x));
    const std::size_t p = offsets_[static_cast<std::size_t>(i)] +
                          inside * to_size(binomial(n - d, i)) + outside;
    order_[p] = c;
    inverse_[c] = p;
    sphere_[c] = i;
  }
}

int BasePointContext::sphere_of_colex(std::size_t colex_index) const { return sphere_.at(colex_index); }

RationalMatrix BasePointContext::to_sphere_order(const RationalMatrix& colex) const {
  return permute(colex, order_);
}

RationalMatrix BasePointContext::to_colex_order(const RationalMatrix& sphere) const {
  return permute(sphere, inverse_);
}

RationalMatrix BasePointContext::embed(const RationalMatrix& block, int i, int j) const {
  return block_embed(block, static_cast<std::size_t>(i), static_cast<std::size_t>(j), partition_);
}

RationalMatrix BasePointContext::extract(const RationalMatrix& m, int i, int j) const {
  return block_extract(m, static_cast<std::size_t>(i), static_cast<std::size_t>(j), partition_);
}

std::vector<RationalMatrix> adjacency_matrices(const BasePointContext& ctx) {
  std::vector<RationalMatrix> out;
  for (int m = 0; m <= ctx.d(); ++m) out.push_back(ctx.to_sphere_order(adjacency_matrix(ctx.n(), ctx.d(), m)));
  return out;
}

std::vector<RationalMatrix> dual_idempotents(const BasePointContext& ctx) {
  const auto masks = enumerate_masks(ctx.n(), ctx.d());
  const std::uint64_t x = ctx.base_point().mask();
  std::vector<RationalMatrix> out;
  for (int i = 0; i <= ctx.d(); ++i) {
    std::vector<Rational> diag(masks.size());
    for (std::size_t c = 0; c < masks.size(); ++c) {
      if (std::popcount(x & masks[c]) == ctx.d() - i) diag[c] = 1;
    }
    out.push_back(ctx.to_sphere_order(RationalMatrix::diagonal(diag)));
  }
  return out;
}

std::vector<RationalMatrix> terwilliger_generators(const BasePointContext& ctx) {
  auto gens = adjacency_matrices(ctx);
  for (auto& e : dual_idempotents(ctx)) gens.push_back(std::move(e));
  return gens;
}

AlgebraBasis terwilliger_algebra(const BasePointContext& ctx) {
  return close_under_multiplication(terwilliger_generators(ctx));
}

std::vector<RationalMatrix> m_algebra_spanning_set(const BasePointContext& ctx,
                                                   const IntersectionSource& source) {
  const int n = ctx.n();
  const int d = ctx.d();
  std::vector<RationalMatrix> out;
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; j <= d; ++j) {
      for (int r : feasible_r_set(d, d - i, d - j)) {
        const auto first = source(d, d - i, d - j, r);
        for (int s : feasible_r_set(n - d, i, j)) {
          out.push_back(ctx.embed(kronecker(first, source(n - d, i, j, s)), i, j));
        }
      }
    }
  }
  return out;
}

AlgebraBasis m_algebra(const BasePointContext& ctx, const IntersectionSource& source) {
  if (ctx.n() < 2 * ctx.d()) throw std::invalid_argument("m_algebra requires n >= 2d");
  return saturate_span(AlgebraBasis(ctx.vertex_count()), m_algebra_spanning_set(ctx, source));
}

std::size_t m_algebra_dimension_formula(int n, int d) {
  std::size_t total = 0;
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; j <= d; ++j) {
      const int a = std::min({i, j, d - i, d - j}) + 1;
      const int b = std::min({i, j, n - d - i, n - d - j}) + 1;
      if (a > 0 && b > 0) total += static_cast<std::size_t>(a) * static_cast<std::size_t>(b);
    }
  }
  return total;
}

std::vector<RationalMatrix> n_algebra_spanning_set(const BasePointContext& ctx,
                                                   const IntersectionSource& source) {
  if (ctx.regime() != Regime::Boundary) throw std::invalid_argument("n_algebra requires n = 2d");
  const int d = ctx.d();
  std::vector<RationalMatrix> out;
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; j <= d; ++j) {
      const auto band = feasible_r_set(d, i, j);
      for (std::size_t a = 0; a < band.size(); ++a) {
        for (std::size_t b = a; b < band.size(); ++b) {
          const int g = band[a];
          const int h = band[b];
          const auto term = kronecker(source(d, d - i, d - j, d - i - j + g), source(d, i, j, h)) +
                            kronecker(source(d, d - i, d - j, d - i - j + h), source(d, i, j, g));
          out.push_back(ctx.embed(term, i, j));
        }
      }
    }
  }
  return out;
}

AlgebraBasis n_algebra(const BasePointContext& ctx, const IntersectionSource& source) {
  return saturate_span(AlgebraBasis(ctx.vertex_count()), n_algebra_spanning_set(ctx, source));
}

std::size_t n_algebra_dimension_formula(int d) {
  std::size_t total = 0;
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; j <= d; ++j) {
      const auto c = feasible_r_set(d, i, j).size();
      total += c * (c + 1) / 2;
    }
  }
  return total;
}

RationalMatrix tensor_idempotent(int n, int d, int i, int r, int s) {
  return kronecker(idempotent_or_zero(d, d - i, r), idempotent_or_zero(n - d, i, s));
}

MapCoefficient lift_coefficient(int n, int d, int i, int r, int s) {
  if (i < 0 || i >= d) throw std::invalid_argument("lift_coefficient: need 0 <= i < d");
  MapCoefficient out;
  out.value = lift_factor_p(d, d - i, r) * lift_factor_l(n - d, i, s);
  out.target_in_range = r <= std::min(d - i - 1, i + 1) && s <= std::min(i + 1, n - d - i - 1);
  return out;
}

MapCoefficient pullback_coefficient(int n, int d, int i, int r, int s) {
  if (i <= 0 || i > d) throw std::invalid_argument("pullback_coefficient: need 0 < i <= d");
  MapCoefficient out;
  out.value = lift_factor_l(d, d - i, r) * lift_factor_p(n - d, i, s);
  out.target_in_range = r <= std::min(d - i + 1, i - 1) && s <= std::min(i - 1, n - d - i + 1);
  return out;
}

RationalMatrix lift_map(const BasePointContext& ctx, int i, const RationalMatrix& y) {
  if (i < 0 || i >= ctx.d()) throw std::invalid_argument("lift_map: need 0 <= i < d");
  const auto a1 = ctx.to_sphere_order(adjacency_matrix(ctx.n(), ctx.d(), 1));
  return multiply(multiply(ctx.extract(a1, i + 1, i), y), ctx.extract(a1, i, i + 1));
}

RationalMatrix pullback_map(const BasePointContext& ctx, int i, const RationalMatrix& y) {
  if (i <= 0 || i > ctx.d()) throw std::invalid_argument("pullback_map: need 0 < i <= d");
  const auto a1 = ctx.to_sphere_order(adjacency_matrix(ctx.n(), ctx.d(), 1));
  return multiply(multiply(ctx.extract(a1, i - 1, i), y), ctx.extract(a1, i, i - 1));
}

RSTriple rs_matrix(const BasePointContext& ctx, int r, int s, int i, int j,
                   const IntersectionSource& source) {
  check_sphere(ctx, i, "rs_matrix");
  check_sphere(ctx, j, "rs_matrix");
  const int n = ctx.n();
  const int d = ctx.d();
  const auto h1 = source.containment(d, d - i, d - j);
  const auto h2 = source.containment(n - d, i, j);
  auto matrix = kronecker(multiply(idempotent_or_zero(d, d - i, r), h1),
                          multiply(idempotent_or_zero(n - d, i, s), h2));
  if (ctx.regime() == Regime::Boundary) {
    matrix = matrix + kronecker(multiply(idempotent_or_zero(d, d - i, s), h1),
                                multiply(idempotent_or_zero(d, i, r), h2));
  }
  return {r, s, i, j, std::move(matrix)};
}

RationalMatrix rs_matrix_commuted(const BasePointContext& ctx, int r, int s, int i, int j,
                                  const IntersectionSource& source) {
  check_sphere(ctx, i, "rs_matrix_commuted");
  check_sphere(ctx, j, "rs_matrix_commuted");
  const int n = ctx.n();
  const int d = ctx.d();
  const auto h1 = source.containment(d, d - i, d - j);
  const auto h2 = source.containment(n - d, i, j);
  auto matrix = kronecker(multiply(h1, idempotent_or_zero(d, d - j, r)),
                          multiply(h2, idempotent_or_zero(n - d, j, s)));
  if (ctx.regime() == Regime::Boundary) {
    matrix = matrix + kronecker(multiply(h1, idempotent_or_zero(d, d - j, s)),
                                multiply(h2, idempotent_or_zero(d, j, r)));
  }
  return matrix;
}

RationalMatrix rs_unit(const BasePointContext& ctx, int r, int s, int i, int j,
                       const IntersectionSource& source) {
  auto m = rs_matrix(ctx, r, s, i, j, source).matrix;
  if (ctx.regime() == Regime::Boundary && r == s) return Rational(1, 2) * m;
  return m;
}

std::optional<BlockProfile> block_profile(const SchemeSpec& scheme, int r, int s) {
  if (r < 0 || s < 0) return std::nullopt;
  const int d = scheme.d;
  const int n = scheme.n;
  const int e = std::max(r, s);
  const int last = std::min(d - r, n - d - s);
  if (last < e) return std::nullopt;
  return BlockProfile{r, s, e, last - e};
}

std::vector<BlockProfile> block_profiles(const SchemeSpec& scheme) {
  std::vector<BlockProfile> out;
  const int d = scheme.d;
  if (regime_of(scheme) == Regime::Boundary) {
    for (int r = 0; r <= d / 2; ++r)
      for (int s = r; s <= d / 2; ++s)
        if (auto p = block_profile(scheme, r, s)) out.push_back(*p);
  } else {
    for (int r = 0; r <= d / 2; ++r)
      for (int s = 0; s <= (scheme.n - d) / 2; ++s)
        if (auto p = block_profile(scheme, r, s)) out.push_back(*p);
  }
  return out;
}

std::size_t decomposition_dimension(std::span<const BlockProfile> blocks) {
  std::size_t total = 0;
  for (const auto& b : blocks) {
    const auto k = static_cast<std::size_t>(b.block_size());
    total += k * k;
  }
  return total;
}

AlgebraBasis rs_span(const BasePointContext& ctx, int r, int s) {
  AlgebraBasis basis(ctx.vertex_count());
  for (int i = 0; i <= ctx.d(); ++i) {
    for (int j = 0; j <= ctx.d(); ++j) {
      const auto u = rs_unit(ctx, r, s, i, j);
      if (!u.is_zero()) basis.insert(ctx.embed(u, i, j));
    }
  }
  return basis;
}

namespace {

// c with E H_{k,k'} H_{k',k} E = c E for E = E_t of J(v, k), read off the matrices.
Rational leg_factor(int v, int k, int kp, int t) {
  const auto e = idempotent_or_zero(v, k, t);
  const auto h = containment_matrix(v, k, kp);
  const auto p = multiply(multiply(e, h), multiply(h.transpose(), e));
  return proportionality(p, e, "leg factor J(" + std::to_string(v) + "," + std::to_string(k) + ")");
}

// Closed-form sum for the same scalar: sum_m C(., .) p_m^{(v,k)}(t).
Rational leg_closed_form(int v, int k, int kp, int t) {
  Rational total(0);
  if (kp <= k) {
    for (int m = 0; m <= k - kp; ++m)
      total += Rational(binomial(k - m, kp)) * eigenvalue_from_matrices(v, k, m, t);
  } else {
    for (int m = 0; m <= kp - k; ++m)
      total += Rational(binomial(v - k - m, kp - k - m)) * eigenvalue_from_matrices(v, k, m, t);
  }
  return total;
}

}  // namespace

NCoefficients n_coefficients(const BasePointContext& ctx, int r, int s, int i, int j) {
  const auto profile = block_profile(ctx.scheme(), r, s);
  if (!profile || !profile->contains(i) || !profile->contains(j)) {
    throw std::invalid_argument("n_coefficients: spheres " + std::to_string(i) + ", " +
                                std::to_string(j) + " are not live for (" + std::to_string(r) +
                                ", " + std::to_string(s) + ")");
  }
  const int n = ctx.n();
  const int d = ctx.d();
  NCoefficients out;
  if (ctx.regime() == Regime::Boundary) {
    out.first = leg_factor(d, i, j, r);
    out.second = leg_factor(d, i, j, s);
    out.first_closed_form = leg_closed_form(d, i, j, r);
    out.second_closed_form = leg_closed_form(d, i, j, s);
  } else {
    out.first = leg_factor(d, d - i, d - j, r);
    out.second = leg_factor(n - d, i, j, s);
    out.first_closed_form = leg_closed_form(d, d - i, d - j, r);
    out.second_closed_form = leg_closed_form(n - d, i, j, s);
  }
  return out;
}

Rational structure_constant(const BasePointContext& ctx, int r, int s, int i, int j, int l) {
  const auto p = multiply(rs_unit(ctx, r, s, i, j), rs_unit(ctx, r, s, j, l));
  const auto u = rs_unit(ctx, r, s, i, l);
  return proportionality(p, u,
                         "structure constant (r,s)=(" + std::to_string(r) + "," + std::to_string(s) +
                             ") spheres " + std::to_string(i) + "," + std::to_string(j) + "," +
                             std::to_string(l));
}

Decomposition decompose(const BasePointContext& ctx) {
  Decomposition out;
  out.n = ctx.n();
  out.d = ctx.d();
  out.regime = ctx.regime();
  out.blocks = block_profiles(ctx.scheme());
  out.dim_formula = decomposition_dimension(out.blocks);
  out.dim_closure = terwilliger_algebra(ctx).dimension();
  out.match = out.dim_formula == out.dim_closure;
  return out;
}

RationalMatrix adjacency_block_formula(int n, int d, int i, int j, const IntersectionSource& source) {
  const auto rows = to_size(binomial(d, d - i) * binomial(n - d, i));
  const auto cols = to_size(binomial(d, d - j) * binomial(n - d, j));
  if (i == j) {
    const auto a = to_size(binomial(d, d - i));
    const auto b = to_size(binomial(n - d, i));
    return kronecker(RationalMatrix::identity(a), adjacency_or_zero(n - d, i)) +
           kronecker(adjacency_or_zero(d, d - i), RationalMatrix::identity(b));
  }
  if (j == i + 1 || j == i - 1) {
    return kronecker(source.containment(d, d - i, d - j), source.containment(n - d, i, j));
  }
  return RationalMatrix(rows, cols);
}

}  // namespace jterw
