#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "jterw/rational_matrix.hpp"

namespace jterw {

/// The Johnson scheme J(n, d) on the d-subsets of [n], with n >= 2d >= 0.
struct SchemeSpec {
  int n;
  int d;

  /// Throws std::invalid_argument unless n >= 2d >= 0.
  SchemeSpec(int n, int d);

  std::size_t vertex_count() const;
  int class_count() const { return d; }
};

/// Names the intersection matrix H^r_{i,j}(v): rows are i-subsets of [v], columns j-subsets,
/// entry 1 iff the pair meets in exactly r points.
struct IntersectionMatrixKey {
  int v;
  int i;
  int j;
  int r;

  friend bool operator==(const IntersectionMatrixKey&, const IntersectionMatrixKey&) = default;
};

/// Zero matrix (of the right shape) when r lies outside the feasible band.
RationalMatrix intersection_matrix(const IntersectionMatrixKey& key);
inline RationalMatrix intersection_matrix(int v, int i, int j, int r) {
  return intersection_matrix({v, i, j, r});
}
/// H_{i,j}(v) := H^{min(i,j)}_{i,j}(v), the containment matrix.
RationalMatrix containment_matrix(int v, int i, int j);

/// Flips one entry of one intersection matrix. Used by fixtures that must be able to
/// falsify the verification suites.
struct EntryFlip {
  IntersectionMatrixKey key;
  std::size_t row = 0;
  std::size_t col = 0;
};

/// Supplies intersection matrices to the algebra constructors, optionally corrupted by a
/// single EntryFlip.
class IntersectionSource {
 public:
  IntersectionSource() = default;
  explicit IntersectionSource(EntryFlip flip) : flip_(flip) {}

  RationalMatrix operator()(int v, int i, int j, int r) const;
  RationalMatrix containment(int v, int i, int j) const;
  const std::optional<EntryFlip>& flip() const { return flip_; }

 private:
  std::optional<EntryFlip> flip_;
};

/// A_m of J(v, k): entry 1 iff |x ∩ y| = k - m. Throws std::invalid_argument unless
/// 0 <= m <= k <= v. Built by direct counting, independently of intersection_matrix().
RationalMatrix adjacency_matrix(int v, int k, int m);

/// p_1(j) = (k - j)(v - k - j) - j.
Rational eigenvalue_p1(int v, int k, int j);
/// p_k(j) = (-1)^j C(v - k - j, k - j).
Rational eigenvalue_pk(int v, int k, int j);

/// Number of primitive idempotents of J(v, k): min(k, v - k) + 1.
int idempotent_count(int v, int k);

struct EigenData {
  int v;
  int k;
  std::vector<Rational> p1;  // indexed by j in [0, min(k, v-k)]
  std::vector<Rational> pk;
};
EigenData eigen_data(int v, int k);

/// E_0, ..., E_{min(k, v-k)} of J(v, k), each obtained by Lagrange interpolation in A_1 over
/// the distinct eigenvalues p_1(j). Results are memoized per (v, k); the cache is guarded
/// for concurrent readers.
const std::vector<RationalMatrix>& primitive_idempotents(int v, int k);

/// E^{(v,k)}_j, or the zero matrix of the same size when j > min(k, v - k) or j < 0.
RationalMatrix idempotent_or_zero(int v, int k, int j);

/// p_m(j) read off the matrices: the scalar c with A_m E_j = c E_j.
Rational eigenvalue_from_matrices(int v, int k, int m, int j);

/// l_{v,k,j} = v - k + p_1(j) and p_{v,k,j} = k + p_1(j).
Rational lift_factor_l(int v, int k, int j);
Rational lift_factor_p(int v, int k, int j);

/// Coefficients c_g, g = 0..min(i, k), with H^l_{i,j} H^s_{j,k} = sum_g c_g H^g_{i,k}:
///   c_g = sum_h C(g,h) C(i-g, l-h) C(k-g, s-h) C(v+g-i-k, j+h-l-s).
std::vector<Rational> triple_product_coefficients(int v, int i, int j, int k, int l, int s);

/// One term c * H^r_{i,l}(v) of an expansion.
struct IntersectionTerm {
  int r;
  Rational coefficient;
};

/// Containment-matrix products H_{i,j} H_{j,l} in closed form. Each throws
/// std::invalid_argument outside its index range.
/// i <= j <= l: C(l-i, l-j) H_{i,l}.
std::vector<IntersectionTerm> containment_product_chain(int v, int i, int j, int l);
/// max(i, l) <= j: sum_m C(v - max(i,l) - m, j - max(i,l) - m) H^{min(i,l) - m}_{i,l}.
std::vector<IntersectionTerm> containment_product_through_superset(int v, int i, int j, int l);
/// j <= min(i, l): sum_m C(min(i,l) - m, j) H^{min(i,l) - m}_{i,l}.
std::vector<IntersectionTerm> containment_product_through_subset(int v, int i, int j, int l);

/// Sum of coefficient * H^r_{i,l}(v) over the terms.
RationalMatrix expand_terms(int v, int i, int l, const std::vector<IntersectionTerm>& terms);

/// {r : H^r_{k,h}(v) != 0} = [max(0, k+h-v), min(k, h)].
std::vector<int> feasible_r_set(int v, int k, int h);

}  // namespace jterw
