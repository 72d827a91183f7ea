#include "jterw/suites.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <tuple>

#include "jterw/algebra_basis.hpp"
#include "jterw/combinatorics.hpp"
#include "jterw/errors.hpp"
#include "jterw/sparse_echelon.hpp"

namespace jterw {

bool operator==(const Counterexample& a, const Counterexample& b) {
  if (a.parameters != b.parameters || a.message != b.message) return false;
  if (a.residual.has_value() != b.residual.has_value()) return false;
  if (!a.residual) return true;
  return a.residual->row == b.residual->row && a.residual->col == b.residual->col &&
         a.residual->value == b.residual->value && a.residual->nonzeros == b.residual->nonzeros;
}

bool operator==(const SuiteReport& a, const SuiteReport& b) {
  if (a.counterexample.has_value() != b.counterexample.has_value()) return false;
  if (a.counterexample && !(*a.counterexample == *b.counterexample)) return false;
  return a.name == b.name && a.label == b.label && a.sweep == b.sweep &&
         a.cases_run == b.cases_run && a.cases_passed == b.cases_passed &&
         a.wall_time_ms == b.wall_time_ms && a.facts == b.facts && a.notes == b.notes;
}

namespace {

using Params = std::initializer_list<std::pair<const char*, long>>;

std::string format_params(Params params) {
  std::string out;
  for (const auto& [key, value] : params) {
    if (!out.empty()) out += ' ';
    out += key;
    out += '=';
    out += std::to_string(value);
  }
  return out;
}

std::string scheme_label(const BasePointContext& ctx) {
  return "J(" + std::to_string(ctx.n()) + "," + std::to_string(ctx.d()) + ")";
}

// Counts cases and keeps the first failure.
class Recorder {
 public:
  explicit Recorder(SuiteReport& report) : report_(report) {}

  void set_prefix(std::string prefix) { prefix_ = std::move(prefix); }

  bool expect(bool ok, Params params, const std::string& message) {
    ++report_.cases_run;
    if (ok) {
      ++report_.cases_passed;
      return true;
    }
    fail(format_params(params), message, std::nullopt, std::nullopt, std::nullopt);
    return false;
  }

  bool expect_zero(const RationalMatrix& m, Params params, const std::string& message) {
    return expect_equal(m, RationalMatrix(m.rows(), m.cols()), params, message);
  }

  bool expect_equal(const RationalMatrix& actual, const RationalMatrix& expected, Params params,
                    const std::string& message) {
    ++report_.cases_run;
    if (actual.rows() != expected.rows() || actual.cols() != expected.cols()) {
      fail(format_params(params), message + " (shape mismatch)", std::nullopt, actual, expected);
      return false;
    }
    auto residual = residual_summary(actual, expected);
    if (!residual) {
      ++report_.cases_passed;
      return true;
    }
    fail(format_params(params), message, residual, actual, expected);
    return false;
  }

  // One case: `body` returns normally on success; VerificationError marks it failed.
  void guarded(Params params, const std::string& message, const std::function<void()>& body) {
    ++report_.cases_run;
    try {
      body();
      ++report_.cases_passed;
    } catch (const VerificationError& e) {
      fail(format_params(params), message + ": " + e.what(), e.residual(), std::nullopt, std::nullopt);
    }
  }

 private:
  void fail(const std::string& params, const std::string& message,
            std::optional<ResidualSummary> residual, std::optional<RationalMatrix> actual,
            std::optional<RationalMatrix> expected) {
    if (report_.counterexample) return;
    Counterexample c;
    c.parameters = prefix_.empty() ? params : (params.empty() ? prefix_ : prefix_ + " " + params);
    c.message = message;
    c.residual = std::move(residual);
    c.actual = std::move(actual);
    c.expected = std::move(expected);
    report_.counterexample = std::move(c);
  }

  SuiteReport& report_;
  std::string prefix_;
};

// Row space of equally shaped rectangular matrices.
class MatrixSpan {
 public:
  MatrixSpan(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), echelon_(rows * cols) {}

  void insert(const RationalMatrix& m) { echelon_.insert(vectorize(m)); }
  std::size_t dimension() const { return echelon_.dimension(); }

  RationalMatrix residual(const RationalMatrix& m) const {
    const auto r = echelon_.reduce(vectorize(m));
    std::vector<RationalMatrix::Entry> entries;
    for (std::size_t k = 0; k < r.size(); ++k) {
      entries.push_back({r.index[k] / cols_, r.index[k] % cols_, r.value[k]});
    }
    return RationalMatrix::from_entries(rows_, cols_, std::move(entries));
  }

 private:
  SparseVector vectorize(const RationalMatrix& m) const {
    SparseVector v;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto cs = m.row_cols(r);
      const auto vs = m.row_values(r);
      for (std::size_t k = 0; k < cs.size(); ++k) {
        v.index.push_back(static_cast<std::uint32_t>(r * cols_ + cs[k]));
        v.value.push_back(vs[k]);
      }
    }
    return v;
  }

  std::size_t rows_;
  std::size_t cols_;
  SparseEchelon echelon_;
};

// The closure is the expensive oracle; scheme suites share it per (n, d, base point).
std::shared_ptr<const AlgebraBasis> cached_terwilliger(const BasePointContext& ctx) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, std::uint64_t>, std::shared_ptr<const AlgebraBasis>> cache;
  const auto key = std::make_tuple(ctx.n(), ctx.d(), ctx.base_point().mask());
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto basis = std::make_shared<const AlgebraBasis>(terwilliger_algebra(ctx));
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(basis)).first->second;
}

RationalMatrix expand_with(const IntersectionSource& src, int v, int i, int l,
                           const std::vector<IntersectionTerm>& terms) {
  RationalMatrix out(static_cast<std::size_t>(binomial(v, i)), static_cast<std::size_t>(binomial(v, l)));
  for (const auto& t : terms) {
    if (t.r < 0 || t.coefficient == 0) continue;
    out = out + t.coefficient * src(v, i, l, t.r);
  }
  return out;
}

// Every element of `small` lies in `big`; one case per element.
void check_contained(Recorder& rec, const AlgebraBasis& big, const AlgebraBasis& small,
                     const std::string& what) {
  const auto elements = small.elements();
  for (std::size_t k = 0; k < elements.size(); ++k) {
    rec.expect_zero(big.residual(elements[k]), {{"element", static_cast<long>(k)}}, what);
  }
}

// ---------------------------------------------------------------- identity suites

void suite_lemma21(Recorder& rec, int v_max, const IntersectionSource& src) {
  for (int v = 0; v <= v_max; ++v)
    for (int i = 0; i <= v; ++i)
      for (int j = 0; j <= v; ++j)
        for (int k = 0; k <= v; ++k) {
          const auto left = [&] {
            std::vector<RationalMatrix> out;
            for (int l = 0; l <= std::min(i, j); ++l) out.push_back(src(v, i, j, l));
            return out;
          }();
          const auto targets = [&] {
            std::vector<RationalMatrix> out;
            for (int g = 0; g <= std::min(i, k); ++g) out.push_back(src(v, i, k, g));
            return out;
          }();
          for (int s = 0; s <= std::min(j, k); ++s) {
            const auto right = src(v, j, k, s);
            for (int l = 0; l <= std::min(i, j); ++l) {
              const auto lhs = multiply(left[static_cast<std::size_t>(l)], right);
              const auto coeffs = triple_product_coefficients(v, i, j, k, l, s);
              RationalMatrix rhs(lhs.rows(), lhs.cols());
              for (std::size_t g = 0; g < coeffs.size(); ++g) {
                if (coeffs[g] != 0) rhs = rhs + coeffs[g] * targets[g];
              }
              rec.expect_equal(lhs, rhs,
                               {{"v", v}, {"i", i}, {"j", j}, {"k", k}, {"l", l}, {"s", s}},
                               "H^l_{i,j} H^s_{j,k} differs from the coefficient expansion");
            }
          }
        }
}

void suite_lemma22(Recorder& rec, int v_max, const IntersectionSource& src) {
  for (int v = 0; v <= v_max; ++v)
    for (int i = 0; i <= v; ++i)
      for (int j = 0; j <= v; ++j)
        for (int l = 0; l <= v; ++l) {
          const bool chain = i <= j && j <= l;
          const bool superset = std::max(i, l) <= j;
          const bool subset = j <= std::min(i, l);
          if (!chain && !superset && !subset) continue;
          const auto lhs = multiply(src.containment(v, i, j), src.containment(v, j, l));
          const Params p{{"v", v}, {"i", i}, {"j", j}, {"l", l}};
          if (chain) {
            rec.expect_equal(lhs, expand_with(src, v, i, l, containment_product_chain(v, i, j, l)), p,
                             "chain product i <= j <= l");
          }
          if (superset) {
            rec.expect_equal(lhs,
                             expand_with(src, v, i, l, containment_product_through_superset(v, i, j, l)),
                             p, "product through a superset, max(i,l) <= j");
          }
          if (subset) {
            rec.expect_equal(lhs,
                             expand_with(src, v, i, l, containment_product_through_subset(v, i, j, l)),
                             p, "product through a subset, j <= min(i,l)");
          }
        }
}

void suite_lemma31(Recorder& rec, int v_max, const IntersectionSource& src) {
  for (int v = 0; v <= v_max; ++v)
    for (int k = 0; k <= v; ++k)
      for (int h = 0; h <= v; ++h) {
        const auto rows = static_cast<std::size_t>(binomial(v, k));
        const auto cols = static_cast<std::size_t>(binomial(v, h));
        const auto hkh = src.containment(v, k, h);
        MatrixSpan left(rows, cols);
        MatrixSpan pattern(rows, cols);
        MatrixSpan right(rows, cols);
        std::vector<RationalMatrix> left_elems;
        std::vector<RationalMatrix> right_elems;
        std::vector<RationalMatrix> pattern_elems;
        for (int m = 0; m <= k; ++m) left_elems.push_back(multiply(adjacency_matrix(v, k, m), hkh));
        for (int m = 0; m <= h; ++m) right_elems.push_back(multiply(hkh, adjacency_matrix(v, h, m)));
        for (int r : feasible_r_set(v, k, h)) pattern_elems.push_back(src(v, k, h, r));
        for (const auto& m : left_elems) left.insert(m);
        for (const auto& m : right_elems) right.insert(m);
        for (const auto& m : pattern_elems) pattern.insert(m);
        const Params p{{"v", v}, {"k", k}, {"h", h}};
        rec.expect(pattern.dimension() == feasible_r_set(v, k, h).size(), p,
                   "intersection-pattern matrices are not linearly independent");
        rec.expect(left.dimension() == pattern.dimension() && right.dimension() == pattern.dimension(), p,
                   "span dimensions differ: B(v,k) H_{k,h} has " + std::to_string(left.dimension()) +
                       ", patterns have " + std::to_string(pattern.dimension()) + ", H_{k,h} B(v,h) has " +
                       std::to_string(right.dimension()));
        auto contained = [&](const MatrixSpan& big, const std::vector<RationalMatrix>& elems,
                             const char* what) {
          for (const auto& m : elems) {
            if (!rec.expect_zero(big.residual(m), p, what)) return;
          }
        };
        contained(pattern, left_elems, "B(v,k) H_{k,h} leaves the pattern span");
        contained(pattern, right_elems, "H_{k,h} B(v,h) leaves the pattern span");
        contained(left, pattern_elems, "pattern matrix outside B(v,k) H_{k,h}");
      }
}

void suite_idempotents(Recorder& rec, int v_max) {
  for (int v = 0; v <= v_max; ++v)
    for (int k = 0; k <= v; ++k) {
      const auto& es = primitive_idempotents(v, k);
      const auto size = static_cast<std::size_t>(binomial(v, k));
      const auto a1 = k >= 1 ? adjacency_matrix(v, k, 1) : RationalMatrix(size, size);
      const auto ak = adjacency_matrix(v, k, k);
      RationalMatrix sum(size, size);
      for (std::size_t j = 0; j < es.size(); ++j) {
        const int jj = static_cast<int>(j);
        const Params p{{"v", v}, {"k", k}, {"j", jj}};
        sum = sum + es[j];
        rec.expect_equal(es[j].transpose(), es[j], p, "E_j is not symmetric");
        rec.expect_equal(multiply(a1, es[j]), eigenvalue_p1(v, k, jj) * es[j], p, "A_1 E_j != p_1(j) E_j");
        rec.expect_equal(multiply(ak, es[j]), eigenvalue_pk(v, k, jj) * es[j], p, "A_k E_j != p_k(j) E_j");
        for (std::size_t l = 0; l < es.size(); ++l) {
          const auto product = multiply(es[j], es[l]);
          rec.expect_equal(product, j == l ? es[j] : RationalMatrix(size, size),
                           {{"v", v}, {"k", k}, {"j", jj}, {"l", static_cast<long>(l)}},
                           "E_j E_l != delta_{jl} E_j");
        }
      }
      rec.expect_equal(sum, RationalMatrix::identity(size), {{"v", v}, {"k", k}}, "sum of E_j != I");
      rec.expect_equal(es.front(), Rational(1, static_cast<long>(size)) * RationalMatrix::all_ones(size, size),
                       {{"v", v}, {"k", k}}, "E_0 != J / |X|");
    }
}

// ---------------------------------------------------------------- scheme suites

struct SchemeCase {
  const BasePointContext& ctx;
  const IntersectionSource& src;
  SuiteReport& report;
};

void suite_lemma23(Recorder& rec, const SchemeCase& c) {
  const auto& ctx = c.ctx;
  const int n = ctx.n();
  const int d = ctx.d();
  const auto adj = adjacency_matrices(ctx);
  const auto duals = dual_idempotents(ctx);
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; d >= 1 && j <= d; ++j) {
      rec.expect_equal(ctx.extract(adj[1], i, j), adjacency_block_formula(n, d, i, j, c.src),
                       {{"i", i}, {"j", j}}, "A restricted to a sphere block");
    }
    rec.expect_equal(ctx.extract(adj[static_cast<std::size_t>(d)], i, i),
                     kronecker(c.src(d, d - i, d - i, 0), c.src(n - d, i, i, 0)), {{"i", i}},
                     "A_d on a diagonal sphere block");
    rec.expect_equal(duals[static_cast<std::size_t>(i)],
                     ctx.embed(kronecker(c.src.containment(d, d - i, d - i), c.src.containment(n - d, i, i)), i, i),
                     {{"m", i}}, "E*_m as an embedded identity block");
  }
}

void suite_lemma34(Recorder& rec, const SchemeCase& c) {
  const auto& ctx = c.ctx;
  const auto t = cached_terwilliger(ctx);
  const auto m = m_algebra(ctx, c.src);
  check_contained(rec, m, *t, "closure element outside the tensor algebra");
  c.report.facts[scheme_label(ctx) + ".dim_T"] = std::to_string(t->dimension());
  c.report.facts[scheme_label(ctx) + ".dim_M"] = std::to_string(m.dimension());
  if (ctx.regime() != Regime::Boundary) return;

  const auto nalg = n_algebra(ctx, c.src);
  check_contained(rec, nalg, *t, "closure element outside the symmetrized algebra");
  check_contained(rec, m, nalg, "symmetrized algebra element outside the tensor algebra");
  c.report.facts[scheme_label(ctx) + ".dim_N"] = std::to_string(nalg.dimension());

  const int d = ctx.d();
  const auto a1 = ctx.to_sphere_order(adjacency_matrix(ctx.n(), d, 1));
  for (int i = 0; i <= d; ++i) {
    const int top = std::min(i, d - i);
    const auto size = ctx.partition()[static_cast<std::size_t>(i)];
    RationalMatrix expansion(size, size);
    for (int r = 0; r <= top; ++r) {
      for (int s = 0; s <= top; ++s) {
        const Rational coeff = (eigenvalue_p1(d, i, r) + eigenvalue_p1(d, i, s)) / 2;
        const auto sym = kronecker(idempotent_or_zero(d, d - i, r), idempotent_or_zero(d, i, s)) +
                         kronecker(idempotent_or_zero(d, d - i, s), idempotent_or_zero(d, i, r));
        expansion = expansion + coeff * sym;
      }
    }
    rec.expect_equal(ctx.extract(a1, i, i), expansion, {{"i", i}},
                     "A on the diagonal sphere block vs the symmetrized idempotent expansion");
  }
}

void suite_lemma35(Recorder& rec, const SchemeCase& c) {
  const auto& ctx = c.ctx;
  const int n = ctx.n();
  const int d = ctx.d();
  std::size_t zero_lift = 0;
  std::size_t zero_pull = 0;
  std::set<std::pair<int, int>> pull_first_zero;
  for (int i = 0; i <= d; ++i) {
    for (int r = 0; r <= std::min(d - i, i); ++r) {
      for (int s = 0; s <= std::min(n - d - i, i); ++s) {
        const auto y = tensor_idempotent(n, d, i, r, s);
        const Params p{{"i", i}, {"r", r}, {"s", s}};
        if (i < d) {
          const auto coef = lift_coefficient(n, d, i, r, s);
          const auto image = lift_map(ctx, i, y);
          rec.expect_equal(image, coef.value * tensor_idempotent(n, d, i + 1, r, s), p,
                           "lift of E_r (x) E_s vs coefficient times target");
          const auto factored = kronecker(
              multiply(multiply(c.src.containment(d, d - i - 1, d - i), idempotent_or_zero(d, d - i, r)),
                       c.src.containment(d, d - i, d - i - 1)),
              multiply(multiply(c.src.containment(n - d, i + 1, i), idempotent_or_zero(n - d, i, s)),
                       c.src.containment(n - d, i, i + 1)));
          rec.expect_equal(factored, image, p, "lift via containment factors vs via adjacency blocks");
          rec.expect(coef.target_in_range || coef.value == 0, p,
                     "lift coefficient nonzero although the target idempotent vanishes");
          if (coef.value == 0) ++zero_lift;
        }
        if (i > 0) {
          const auto coef = pullback_coefficient(n, d, i, r, s);
          const auto image = pullback_map(ctx, i, y);
          rec.expect_equal(image, coef.value * tensor_idempotent(n, d, i - 1, r, s), p,
                           "pullback of E_r (x) E_s vs coefficient times target");
          const auto factored = kronecker(
              multiply(multiply(c.src.containment(d, d - i + 1, d - i), idempotent_or_zero(d, d - i, r)),
                       c.src.containment(d, d - i, d - i + 1)),
              multiply(multiply(c.src.containment(n - d, i - 1, i), idempotent_or_zero(n - d, i, s)),
                       c.src.containment(n - d, i, i - 1)));
          rec.expect_equal(factored, image, p, "pullback via containment factors vs via adjacency blocks");
          rec.expect(coef.target_in_range || coef.value == 0, p,
                     "pullback coefficient nonzero although the target idempotent vanishes");
          if (coef.value == 0) {
            ++zero_pull;
            if (lift_factor_l(d, d - i, r) == 0) pull_first_zero.insert({i, r});
          }
        }
      }
    }
  }
  const auto label = scheme_label(ctx);
  c.report.facts[label + ".zero_lift_coefficients"] = std::to_string(zero_lift);
  c.report.facts[label + ".zero_pullback_coefficients"] = std::to_string(zero_pull);
  std::string zeros;
  for (const auto& [i, r] : pull_first_zero) {
    zeros += (zeros.empty() ? "" : " ") + std::string("(i=") + std::to_string(i) + ",r=" + std::to_string(r) + ")";
  }
  if (!zeros.empty()) c.report.facts[label + ".pullback_first_factor_zero_at"] = zeros;
}

int second_index_max(const BasePointContext& ctx) {
  return ctx.regime() == Regime::Boundary ? ctx.d() : ctx.n() - ctx.d();
}

void suite_cor36(Recorder& rec, const SchemeCase& c) {
  const auto& ctx = c.ctx;
  for (int r = 0; r <= ctx.d(); ++r)
    for (int s = 0; s <= second_index_max(ctx); ++s)
      for (int i = 0; i <= ctx.d(); ++i)
        for (int j = 0; j <= ctx.d(); ++j) {
          rec.expect_equal(rs_matrix(ctx, r, s, i, j, c.src).matrix, rs_matrix_commuted(ctx, r, s, i, j, c.src),
                           {{"r", r}, {"s", s}, {"i", i}, {"j", j}},
                           "idempotent-left and idempotent-right forms differ");
        }
}

void suite_lemma44(Recorder& rec, const SchemeCase& c) {
  const auto& ctx = c.ctx;
  for (int r = 0; r <= ctx.d(); ++r)
    for (int s = 0; s <= second_index_max(ctx); ++s) {
      const auto profile = block_profile(ctx.scheme(), r, s);
      for (int i = 0; i <= ctx.d(); ++i)
        for (int j = 0; j <= ctx.d(); ++j) {
          const bool live = profile && profile->contains(i) && profile->contains(j);
          const bool nonzero = !rs_matrix(ctx, r, s, i, j, c.src).matrix.is_zero();
          rec.expect(live == nonzero, {{"r", r}, {"s", s}, {"i", i}, {"j", j}},
                     live ? "block vanishes inside the live range" : "block nonzero outside the live range");
        }
    }
}

void suite_thm33(Recorder& rec, const SchemeCase& c) {
  const auto& ctx = c.ctx;
  const auto nalg = n_algebra(ctx, c.src);
  c.report.facts[scheme_label(ctx) + ".dim_N"] = std::to_string(nalg.dimension());
  rec.expect(nalg.dimension() == n_algebra_dimension_formula(ctx.d()), {},
             "dimension " + std::to_string(nalg.dimension()) + " differs from the pair count " +
                 std::to_string(n_algebra_dimension_formula(ctx.d())));
  const auto elements = nalg.elements();
  for (std::size_t a = 0; a < elements.size(); ++a) {
    for (std::size_t b = 0; b < elements.size(); ++b) {
      const auto product = multiply(elements[a], elements[b]);
      if (!rec.expect_zero(nalg.residual(product), {{"a", static_cast<long>(a)}, {"b", static_cast<long>(b)}},
                           "product of basis elements leaves the algebra")) {
        return;
      }
    }
  }
}

void equal_spans(Recorder& rec, const SchemeCase& c, const AlgebraBasis& other, const char* other_name,
                 std::size_t formula) {
  const auto& ctx = c.ctx;
  const auto t = cached_terwilliger(ctx);
  const auto label = scheme_label(ctx);
  c.report.facts[label + ".dim_T"] = std::to_string(t->dimension());
  c.report.facts[label + ".dim_" + other_name] = std::to_string(other.dimension());
  rec.expect(t->dimension() == other.dimension(), {},
             std::string("closure dimension ") + std::to_string(t->dimension()) + " != dim " + other_name +
                 " " + std::to_string(other.dimension()));
  rec.expect(other.dimension() == formula, {},
             std::string("dim ") + other_name + " " + std::to_string(other.dimension()) +
                 " differs from its dimension formula " + std::to_string(formula));
  check_contained(rec, other, *t, std::string("closure element outside ") + other_name);
  check_contained(rec, *t, other, std::string(other_name) + " element outside the closure");
}

void suite_thm42(Recorder& rec, const SchemeCase& c) {
  if (c.ctx.regime() == Regime::Classical) {
    c.report.notes.push_back(scheme_label(c.ctx) + ": n >= 3d, checked as a regression guard");
  }
  equal_spans(rec, c, m_algebra(c.ctx, c.src), "M", m_algebra_dimension_formula(c.ctx.n(), c.ctx.d()));
}

void suite_thm51(Recorder& rec, const SchemeCase& c) {
  equal_spans(rec, c, n_algebra(c.ctx, c.src), "N", n_algebra_dimension_formula(c.ctx.d()));
}

std::vector<int> live_range(const BlockProfile& p) {
  std::vector<int> out;
  for (int i = p.e; i <= p.last(); ++i) out.push_back(i);
  return out;
}

void suite_structure(Recorder& rec, const SchemeCase& c) {
  const auto& ctx = c.ctx;
  const auto profiles = block_profiles(ctx.scheme());
  for (const auto& p : profiles) {
    for (int i : live_range(p))
      for (int j : live_range(p))
        for (int l : live_range(p)) {
          rec.guarded({{"r", p.r}, {"s", p.s}, {"i", i}, {"j", j}, {"l", l}}, "product of units",
                      [&] { (void)structure_constant(ctx, p.r, p.s, i, j, l); });
        }
  }
  for (const auto& p : profiles)
    for (const auto& q : profiles) {
      if (p == q) continue;
      for (int i : live_range(p))
        for (int j : live_range(p)) {
          if (!q.contains(j)) continue;
          for (int m : live_range(q)) {
            const auto product = multiply(rs_unit(ctx, p.r, p.s, i, j, c.src), rs_unit(ctx, q.r, q.s, j, m, c.src));
            rec.expect_zero(product, {{"r", p.r}, {"s", p.s}, {"p", q.r}, {"q", q.s}, {"i", i}, {"j", j}, {"m", m}},
                             "product across different ideals is nonzero");
          }
        }
    }
  const auto gens = terwilliger_generators(ctx);
  for (const auto& p : profiles) {
    const auto span = rs_span(ctx, p.r, p.s);
    const auto elements = span.elements();
    for (std::size_t g = 0; g < gens.size(); ++g)
      for (std::size_t t = 0; t < elements.size(); ++t) {
        const Params params{{"r", p.r}, {"s", p.s}, {"generator", static_cast<long>(g)}, {"element", static_cast<long>(t)}};
        rec.expect_zero(span.residual(multiply(gens[g], elements[t])), params,
                        "generator * ideal element leaves the ideal");
        rec.expect_zero(span.residual(multiply(elements[t], gens[g])), params,
                        "ideal element * generator leaves the ideal");
      }
  }
}

// The displayed closed form for the d-leg factor uses C(d-j-m, d-i) in its i <= j branch.
Rational displayed_first_leg(int d, int i, int j, int r) {
  Rational total(0);
  if (i <= j) {
    for (int m = 0; m <= j - i; ++m)
      total += Rational(binomial(d - j - m, d - i)) * eigenvalue_from_matrices(d, d - i, m, r);
  } else {
    for (int m = 0; m <= i - j; ++m)
      total += Rational(binomial(i - m, j)) * eigenvalue_from_matrices(d, d - i, m, r);
  }
  return total;
}

void suite_beta_squared(Recorder& rec, const SchemeCase& c) {
  const auto& ctx = c.ctx;
  std::size_t closed_form_mismatches = 0;
  std::size_t displayed_mismatches = 0;
  std::size_t coefficient_cases = 0;
  for (const auto& p : block_profiles(ctx.scheme())) {
    const auto live = live_range(p);
    std::map<std::pair<int, int>, Rational> nprod;
    for (int i : live)
      for (int j : live) {
        const Params params{{"r", p.r}, {"s", p.s}, {"i", i}, {"j", j}};
        const auto nc = n_coefficients(ctx, p.r, p.s, i, j);
        ++coefficient_cases;
        nprod[{i, j}] = nc.product();
        rec.expect(nc.first > 0 && nc.second > 0, params,
                   "leg factor not positive: " + to_string(nc.first) + ", " + to_string(nc.second));
        if (!nc.first_matches() || !nc.second_matches()) ++closed_form_mismatches;
        if (ctx.regime() != Regime::Boundary && displayed_first_leg(ctx.d(), i, j, p.r) != nc.first) {
          ++displayed_mismatches;
        }
        const auto t = rs_unit(ctx, p.r, p.s, i, j, c.src);
        rec.expect_equal(multiply(t, t.transpose()), nc.product() * rs_unit(ctx, p.r, p.s, i, i, c.src), params,
                         "T_ij T_ij^T != n-product * T_ii");
      }
    for (int i : live)
      for (int j : live)
        for (int l : live) {
          const Params params{{"r", p.r}, {"s", p.s}, {"i", i}, {"j", j}, {"l", l}};
          std::optional<Rational> beta;
          std::optional<Rational> mirrored;
          rec.guarded(params, "structure constant", [&] {
            beta = structure_constant(ctx, p.r, p.s, i, j, l);
            mirrored = structure_constant(ctx, p.r, p.s, l, j, i);
          });
          if (!beta || !mirrored) continue;
          rec.expect(*beta > 0, params, "beta not positive: " + to_string(*beta));
          rec.expect(*beta == *mirrored, params, "beta(i,j,l) != beta(l,j,i)");
          const Rational lhs = *beta * *beta * nprod.at({i, l});
          const Rational rhs = nprod.at({i, j}) * nprod.at({j, l});
          rec.expect(lhs == rhs, params,
                     "beta^2 = " + to_string(*beta * *beta) + " but the n-coefficient ratio is " +
                         to_string(rhs / nprod.at({i, l})));
          if (i == l) rec.expect(*beta == nprod.at({i, j}), params, "beta(i,j,i) != n-product(i,j)");
        }
  }
  const auto label = scheme_label(ctx);
  c.report.facts[label + ".coefficient_cases"] = std::to_string(coefficient_cases);
  c.report.facts[label + ".closed_form_mismatches"] = std::to_string(closed_form_mismatches);
  if (closed_form_mismatches > 0) {
    c.report.notes.push_back(label + ": closed-form leg sums disagree with the matrix values in " +
                             std::to_string(closed_form_mismatches) + " cases (matrix values used)");
  }
  if (ctx.regime() != Regime::Boundary) {
    c.report.facts[label + ".displayed_binomial_mismatches"] = std::to_string(displayed_mismatches);
  }
}

void suite_decomposition(Recorder& rec, const SchemeCase& c) {
  const auto& ctx = c.ctx;
  const auto t = cached_terwilliger(ctx);
  const auto profiles = block_profiles(ctx.scheme());
  const auto formula = decomposition_dimension(profiles);
  const auto label = scheme_label(ctx);
  c.report.facts[label + ".dim_T"] = std::to_string(t->dimension());
  c.report.facts[label + ".dim_formula"] = std::to_string(formula);
  std::string sizes;
  for (const auto& p : profiles) {
    sizes += (sizes.empty() ? "" : " ") + std::string("(") + std::to_string(p.r) + "," + std::to_string(p.s) +
             "," + std::to_string(p.block_size()) + ")";
  }
  c.report.facts[label + ".blocks"] = sizes;
  rec.expect(formula == t->dimension(), {},
             "sum of squared block sizes " + std::to_string(formula) + " != closure dimension " +
                 std::to_string(t->dimension()));

  AlgebraBasis stacked(ctx.vertex_count());
  std::size_t rank_sum = 0;
  for (const auto& p : profiles) {
    const auto span = rs_span(ctx, p.r, p.s);
    rec.expect(span.dimension() == static_cast<std::size_t>(p.block_size() * p.block_size()),
               {{"r", p.r}, {"s", p.s}},
               "ideal dimension " + std::to_string(span.dimension()) + " != block size squared");
    rank_sum += span.dimension();
    stacked = saturate_span(std::move(stacked), span.elements());
  }
  rec.expect(stacked.dimension() == rank_sum, {},
             "ideals are not independent: stacked rank " + std::to_string(stacked.dimension()) +
                 " < sum of ranks " + std::to_string(rank_sum));
  check_contained(rec, stacked, *t, "closure element outside the sum of ideals");
  check_contained(rec, *t, stacked, "ideal element outside the closure");

  // Matrix-unit certificate in squared form: w_ij w_jl = beta w_il with beta^2 n_il = n_ij n_jl,
  // w_ji = w_ij^T, w_ii idempotent. Then u_ij = w_ij / sqrt(n_ij) are matrix units.
  for (const auto& p : profiles) {
    const auto live = live_range(p);
    for (int i : live) {
      const auto wii = rs_unit(ctx, p.r, p.s, i, i, c.src);
      rec.expect_equal(multiply(wii, wii), wii, {{"r", p.r}, {"s", p.s}, {"i", i}}, "diagonal unit not idempotent");
      for (int j : live) {
        rec.expect_equal(rs_unit(ctx, p.r, p.s, j, i, c.src), rs_unit(ctx, p.r, p.s, i, j, c.src).transpose(),
                         {{"r", p.r}, {"s", p.s}, {"i", i}, {"j", j}}, "w_ji != w_ij^T");
        for (int l : live) {
          const Params params{{"r", p.r}, {"s", p.s}, {"i", i}, {"j", j}, {"l", l}};
          rec.guarded(params, "matrix-unit certificate", [&] {
            const auto beta = structure_constant(ctx, p.r, p.s, i, j, l);
            const auto nij = n_coefficients(ctx, p.r, p.s, i, j).product();
            const auto njl = n_coefficients(ctx, p.r, p.s, j, l).product();
            const auto nil = n_coefficients(ctx, p.r, p.s, i, l).product();
            if (beta * beta * nil != nij * njl || beta <= 0) {
              throw VerificationError("normalized units do not multiply as matrix units");
            }
          });
        }
      }
    }
  }
}

void suite_separability(Recorder& rec, const SchemeCase& c) {
  const auto& ctx = c.ctx;
  const int n = ctx.n();
  const int d = ctx.d();
  const auto a1 = ctx.to_sphere_order(adjacency_matrix(n, d, 1));
  std::size_t skipped = 0;
  for (int i = 0; i <= d; ++i) {
    struct Term {
      int r;
      int s;
      Rational theta;
      RationalMatrix e;
    };
    std::vector<Term> terms;
    Rational bound(0);
    for (int r = 0; r <= std::min(d - i, i); ++r)
      for (int s = 0; s <= std::min(n - d - i, i); ++s) {
        Rational theta = eigenvalue_p1(d, d - i, r) + eigenvalue_p1(n - d, i, s);
        bound = std::max(bound, Rational(abs(theta)));
        terms.push_back({r, s, theta, tensor_idempotent(n, d, i, r, s)});
      }
    const Rational a = 1 + bound;
    const auto size = ctx.partition()[static_cast<std::size_t>(i)];
    const auto shifted = ctx.extract(a1, i, i) + a * RationalMatrix::identity(size);
    for (const auto& t : terms) {
      rec.expect_equal(multiply(shifted, t.e), (t.theta + a) * t.e, {{"i", i}, {"r", t.r}, {"s", t.s}},
                       "(A + aI) E_r (x) E_s != (mu + lambda + a) E_r (x) E_s");
    }
    bool distinct = true;
    for (std::size_t x = 0; x < terms.size(); ++x)
      for (std::size_t y = x + 1; y < terms.size(); ++y)
        if (terms[x].theta == terms[y].theta) distinct = false;
    if (!distinct) {
      ++skipped;
      continue;
    }
    for (const auto& t : terms) {
      RationalMatrix interp = RationalMatrix::identity(size);
      for (const auto& u : terms) {
        if (&u == &t) continue;
        interp = multiply(interp, shifted - (u.theta + a) * RationalMatrix::identity(size));
        interp = (1 / (t.theta - u.theta)) * interp;
      }
      rec.expect_equal(interp, t.e, {{"i", i}, {"r", t.r}, {"s", t.s}},
                       "interpolation in A + aI does not reproduce E_r (x) E_s");
    }
  }
  if (skipped > 0) {
    c.report.notes.push_back(scheme_label(ctx) + ": " + std::to_string(skipped) +
                             " sphere block(s) have repeated eigenvalues; interpolation not applicable there");
  }
}

// ---------------------------------------------------------------- registry

using IdentityRunner = void (*)(Recorder&, int, const IntersectionSource&);
using SchemeRunner = void (*)(Recorder&, const SchemeCase&);

const std::vector<Regime> kAll{Regime::Boundary, Regime::Open, Regime::Classical};
const std::vector<Regime> kBeyond{Regime::Open, Regime::Classical};
const std::vector<Regime> kBoundary{Regime::Boundary};

struct Entry {
  SuiteInfo info;
  IdentityRunner identity = nullptr;
  SchemeRunner scheme = nullptr;
};

void idempotents_runner(Recorder& rec, int v_max, const IntersectionSource&) { suite_idempotents(rec, v_max); }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    auto identity = [&](std::string_view name, std::string_view label, int v_max, IdentityRunner run) {
      t.push_back({SuiteInfo{name, label, SuiteKind::Identity, v_max, {}}, run, nullptr});
    };
    auto scheme = [&](std::string_view name, std::string_view label, const std::vector<Regime>& regimes,
                      SchemeRunner run) {
      t.push_back({SuiteInfo{name, label, SuiteKind::Scheme, 0, regimes}, nullptr, run});
    };
    identity("lemma21", "triple product of intersection matrices", 7, suite_lemma21);
    identity("lemma22", "containment-matrix products", 7, suite_lemma22);
    scheme("lemma23-blocks", "sphere-block structure of the adjacency matrices", kAll, suite_lemma23);
    identity("lemma31-span", "Bose-Mesner span of intersection patterns", 6, suite_lemma31);
    scheme("lemma34-containment", "closure inside the tensor and symmetrized algebras", kAll, suite_lemma34);
    scheme("lemma35-liftpull", "lift and pullback coefficients", kAll, suite_lemma35);
    scheme("cor36-commute", "idempotents commute past containment factors", kAll, suite_cor36);
    scheme("thm33-N-closed", "symmetrized algebra is closed under products", kBoundary, suite_thm33);
    scheme("thm42-T-equals-M", "closure equals the tensor algebra", kBeyond, suite_thm42);
    scheme("eq15-structure", "ideal products and structure constants", kBeyond, suite_structure);
    scheme("lemma44-support", "support of the ideal blocks", kAll, suite_lemma44);
    scheme("ttt1-beta-squared", "squared structure constants", kBeyond, suite_beta_squared);
    scheme("thm46-decomposition", "Wedderburn decomposition", kBeyond, suite_decomposition);
    scheme("thm51-T-equals-N", "closure equals the symmetrized algebra", kBoundary, suite_thm51);
    scheme("eq20-structure", "ideal products and structure constants, n = 2d", kBoundary, suite_structure);
    scheme("ttt2-beta-squared", "squared structure constants, n = 2d", kBoundary, suite_beta_squared);
    scheme("thm54-decomposition", "Wedderburn decomposition, n = 2d", kBoundary, suite_decomposition);
    identity("idempotents", "primitive idempotents of J(v,k)", 8, idempotents_runner);
    scheme("aa-separability", "idempotent separation on sphere blocks", kAll, suite_separability);
    return t;
  }();
  return table;
}

const Entry& entry(std::string_view name) {
  for (const auto& e : entries()) {
    if (e.info.name == name) return e;
  }
  throw UnknownSuiteError("unknown suite: " + std::string(name));
}

std::string describe_flip(const std::optional<EntryFlip>& flip) {
  if (!flip) return "";
  const auto& k = flip->key;
  return "; flipped H^" + std::to_string(k.r) + "_{" + std::to_string(k.i) + "," + std::to_string(k.j) + "}(" +
         std::to_string(k.v) + ") at (" + std::to_string(flip->row) + "," + std::to_string(flip->col) + ")";
}

BasePointContext make_context(SchemeParams params, const std::optional<std::vector<int>>& base_point) {
  std::optional<SchemeSpec> spec;
  try {
    spec.emplace(params.n, params.d);
  } catch (const std::invalid_argument& e) {
    throw InfeasibleSweepError(e.what());
  }
  if (!base_point) return BasePointContext(*spec);
  try {
    return BasePointContext(*spec, KSubset(params.n, *base_point));
  } catch (const std::invalid_argument& e) {
    throw InfeasibleSweepError(std::string("invalid base point: ") + e.what());
  }
}

}  // namespace

std::span<const SuiteInfo> suite_registry() {
  static const std::vector<SuiteInfo> infos = [] {
    std::vector<SuiteInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

const SuiteInfo& suite_info(std::string_view name) {
  for (const auto& info : suite_registry()) {
    if (info.name == name) return info;
  }
  throw UnknownSuiteError("unknown suite: " + std::string(name));
}

bool suite_applies(const SuiteInfo& info, SchemeParams scheme) {
  if (info.kind != SuiteKind::Scheme) return true;
  if (scheme.d < 0 || scheme.n < 2 * scheme.d) return false;
  const auto regime = regime_of(SchemeSpec(scheme.n, scheme.d));
  return std::find(info.regimes.begin(), info.regimes.end(), regime) != info.regimes.end();
}

std::vector<SchemeParams> default_schemes() {
  return {{4, 2}, {5, 2}, {6, 3}, {7, 3}, {6, 2}, {8, 3}, {8, 4}, {9, 4}};
}

SuiteReport run_suite(std::string_view name, const Sweep& sweep) {
  const auto& e = entry(name);
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  report.name = std::string(e.info.name);
  report.label = std::string(e.info.label);
  const IntersectionSource src = sweep.flip ? IntersectionSource(*sweep.flip) : IntersectionSource();
  Recorder rec(report);

  if (e.info.kind == SuiteKind::Identity) {
    const int v_max = sweep.v_max.value_or(e.info.default_v_max);
    if (v_max < 0 || v_max > 12) throw InfeasibleSweepError("v-max must lie in [0, 12]");
    report.sweep = "v <= " + std::to_string(v_max) + describe_flip(sweep.flip);
    e.identity(rec, v_max, src);
  } else {
    std::vector<SchemeParams> schemes;
    if (sweep.schemes.empty()) {
      for (const auto& s : default_schemes()) {
        if (suite_applies(e.info, s)) schemes.push_back(s);
      }
    } else {
      for (const auto& s : sweep.schemes) {
        if (s.d < 0 || s.n < 2 * s.d) {
          throw InfeasibleSweepError("J(" + std::to_string(s.n) + "," + std::to_string(s.d) + ") violates n >= 2d");
        }
        if (!suite_applies(e.info, s)) {
          throw InfeasibleSweepError(std::string(e.info.name) + " does not apply to J(" + std::to_string(s.n) +
                                     "," + std::to_string(s.d) + ") (regime " +
                                     std::string(regime_name(regime_of(SchemeSpec(s.n, s.d)))) + ")");
        }
        schemes.push_back(s);
      }
    }
    std::string desc;
    for (const auto& s : schemes) {
      desc += (desc.empty() ? "" : " ") + std::string("J(") + std::to_string(s.n) + "," + std::to_string(s.d) + ")";
    }
    if (sweep.base_point) {
      desc += "; base point {";
      for (std::size_t k = 0; k < sweep.base_point->size(); ++k) {
        desc += (k ? "," : "") + std::to_string((*sweep.base_point)[k]);
      }
      desc += "}";
    }
    report.sweep = desc + describe_flip(sweep.flip);
    // Validate every context before running anything.
    std::vector<BasePointContext> contexts;
    for (const auto& s : schemes) contexts.push_back(make_context(s, sweep.base_point));
    for (const auto& ctx : contexts) {
      rec.set_prefix("n=" + std::to_string(ctx.n()) + " d=" + std::to_string(ctx.d()));
      e.scheme(rec, SchemeCase{ctx, src, report});
    }
  }
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace jterw
