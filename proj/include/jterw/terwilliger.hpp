#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "jterw/algebra_basis.hpp"
#include "jterw/combinatorics.hpp"
#include "jterw/johnson.hpp"
#include "jterw/rational_matrix.hpp"

namespace jterw {

/// Parameter regime of J(n, d).
enum class Regime {
  Boundary,   // n = 2d
  Open,       // 2d < n < 3d
  Classical,  // n >= 3d
};

Regime regime_of(const SchemeSpec& scheme);
/// "n=2d", "2d<n<3d" or "n>=3d".
std::string_view regime_name(Regime regime);

/// J(n, d) seen from a base point x. Vertices are reordered into spheres
/// Ω_i = {y : |x ∩ y| = d - i}, i = 0..d. Inside Ω_i, y sits at
///   rank(x ∩ y relative to x) * C(n-d, i) + rank(y \ x relative to [n] \ x),
/// which makes sphere blocks Kronecker products of a d-leg and an (n-d)-leg.
/// Unless stated otherwise, matrices produced from a context use this sphere order.
class BasePointContext {
 public:
  /// Base point {1, ..., d}.
  explicit BasePointContext(SchemeSpec scheme);
  /// Throws std::invalid_argument unless x is a d-subset of [n].
  BasePointContext(SchemeSpec scheme, KSubset base_point);

  const SchemeSpec& scheme() const { return scheme_; }
  int n() const { return scheme_.n; }
  int d() const { return scheme_.d; }
  Regime regime() const { return regime_of(scheme_); }
  const KSubset& base_point() const { return base_point_; }
  std::size_t vertex_count() const { return order_.size(); }

  /// |Ω_0|, ..., |Ω_d|.
  std::span<const std::size_t> partition() const { return partition_; }
  std::size_t offset(int sphere) const { return offsets_[static_cast<std::size_t>(sphere)]; }
  /// order[p] is the colex index of the vertex at sphere-order position p.
  std::span<const std::size_t> sphere_order() const { return order_; }
  int sphere_of_colex(std::size_t colex_index) const;

  RationalMatrix to_sphere_order(const RationalMatrix& colex) const;
  RationalMatrix to_colex_order(const RationalMatrix& sphere) const;
  /// Embeds a block into position (i, j) of the sphere partition.
  RationalMatrix embed(const RationalMatrix& block, int i, int j) const;
  RationalMatrix extract(const RationalMatrix& m, int i, int j) const;

 private:
  void build();

  SchemeSpec scheme_;
  KSubset base_point_;
  std::vector<std::size_t> partition_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> inverse_;
  std::vector<int> sphere_;
};

/// A_0, ..., A_d of J(n, d), built by counting and reordered into sphere order.
std::vector<RationalMatrix> adjacency_matrices(const BasePointContext& ctx);

/// E*_0, ..., E*_d: diagonal projectors onto the spheres, from |x ∩ y| directly.
std::vector<RationalMatrix> dual_idempotents(const BasePointContext& ctx);

/// Closure of {A_i} ∪ {E*_i}: the brute-force reference for every structural claim.
AlgebraBasis terwilliger_algebra(const BasePointContext& ctx);

/// The generators above, in the same order (A_0..A_d then E*_0..E*_d).
std::vector<RationalMatrix> terwilliger_generators(const BasePointContext& ctx);

/// Spanning set of the tensor algebra: L(H^r_{d-i,d-j}(d) ⊗ H^s_{i,j}(n-d)) over all sphere
/// pairs and feasible r, s.
std::vector<RationalMatrix> m_algebra_spanning_set(const BasePointContext& ctx,
                                                   const IntersectionSource& source = {});
/// Throws std::invalid_argument when n < 2d (cannot happen for a valid context).
AlgebraBasis m_algebra(const BasePointContext& ctx, const IntersectionSource& source = {});
/// Sum over i, j of (min(i,j,d-i,d-j)+1)(min(i,j,n-d-i,n-d-j)+1).
std::size_t m_algebra_dimension_formula(int n, int d);

/// Symmetrized spanning set for n = 2d:
///   L(H^{d-i-j+g}_{d-i,d-j} ⊗ H^h_{i,j} + H^{d-i-j+h}_{d-i,d-j} ⊗ H^g_{i,j}), g <= h in R(d,i,j).
/// Throws std::invalid_argument unless n = 2d.
std::vector<RationalMatrix> n_algebra_spanning_set(const BasePointContext& ctx,
                                                   const IntersectionSource& source = {});
AlgebraBasis n_algebra(const BasePointContext& ctx, const IntersectionSource& source = {});
/// Number of pairs g <= h in R(d, i, j), summed over i, j.
std::size_t n_algebra_dimension_formula(int d);

/// E_r^{(d,d-i)} ⊗ E_s^{(n-d,i)}, zero when either index is out of range.
RationalMatrix tensor_idempotent(int n, int d, int i, int r, int s);

/// Scalar by which a lift or pullback multiplies E_r ⊗ E_s. When the target idempotent
/// index is out of range the image is zero and `target_in_range` is false.
struct MapCoefficient {
  Rational value;
  bool target_in_range = true;
};

/// Lift from sphere i to i+1 (0 <= i < d): p_{d,d-i,r} * l_{n-d,i,s}.
MapCoefficient lift_coefficient(int n, int d, int i, int r, int s);
/// Pullback from sphere i to i-1 (0 < i <= d): l_{d,d-i,r} * p_{n-d,i,s}.
MapCoefficient pullback_coefficient(int n, int d, int i, int r, int s);

/// A|_{Ω_{i+1} x Ω_i} * y * A|_{Ω_i x Ω_{i+1}} for y on Ω_i x Ω_i.
RationalMatrix lift_map(const BasePointContext& ctx, int i, const RationalMatrix& y);
/// A|_{Ω_{i-1} x Ω_i} * y * A|_{Ω_i x Ω_{i-1}} for y on Ω_i x Ω_i.
RationalMatrix pullback_map(const BasePointContext& ctx, int i, const RationalMatrix& y);

/// One sphere block of the (r, s) ideal, before embedding.
struct RSTriple {
  int r;
  int s;
  int i;
  int j;
  RationalMatrix matrix;
};

/// For n > 2d:  (E_r^{(d,d-i)} H_{d-i,d-j}(d)) ⊗ (E_s^{(n-d,i)} H_{i,j}(n-d)).
/// For n = 2d:  the same with legs over [d], plus the term with r and s exchanged.
/// Out-of-range idempotent indices give the zero block.
RSTriple rs_matrix(const BasePointContext& ctx, int r, int s, int i, int j,
                   const IntersectionSource& source = {});
/// The same block evaluated with the idempotents on the right: (H E_r^{(d,d-j)}) ⊗ (H E_s^{(n-d,j)}).
RationalMatrix rs_matrix_commuted(const BasePointContext& ctx, int r, int s, int i, int j,
                                  const IntersectionSource& source = {});
/// rs_matrix divided by 2 when n = 2d and r = s (the symmetrized sum doubles that block);
/// otherwise rs_matrix itself. These are the blocks the matrix units are built from.
RationalMatrix rs_unit(const BasePointContext& ctx, int r, int s, int i, int j,
                       const IntersectionSource& source = {});

/// Live sphere range {e, ..., e + d} of the (r, s) ideal.
struct BlockProfile {
  int r;
  int s;
  int e;
  int d;

  int block_size() const { return d + 1; }
  int last() const { return e + d; }
  bool contains(int sphere) const { return sphere >= e && sphere <= e + d; }
  friend bool operator==(const BlockProfile&, const BlockProfile&) = default;
};

/// Empty when the live range of (r, s) is empty.
std::optional<BlockProfile> block_profile(const SchemeSpec& scheme, int r, int s);
/// One profile per (r, s) in the decomposition index range with a nonempty live range:
/// r <= s <= d/2 for n = 2d, otherwise r <= d/2 and s <= (n-d)/2.
std::vector<BlockProfile> block_profiles(const SchemeSpec& scheme);
std::size_t decomposition_dimension(std::span<const BlockProfile> blocks);

/// Span of L(rs_unit(i, j)) over all sphere pairs.
AlgebraBasis rs_span(const BasePointContext& ctx, int r, int s);

struct NCoefficients {
  Rational first;   // d-leg factor
  Rational second;  // (n-d)-leg factor
  Rational first_closed_form;
  Rational second_closed_form;

  Rational product() const { return first * second; }
  bool first_matches() const { return first == first_closed_form; }
  bool second_matches() const { return second == second_closed_form; }
};

/// The leg factors of rs_unit(i,j) rs_unit(i,j)^T = first * second * rs_unit(i,i), each read
/// off a single-leg product E H H^T E = c E. The closed-form sums are evaluated alongside
/// for comparison; the matrix values are authoritative.
/// Throws std::invalid_argument unless i, j are live for (r, s).
NCoefficients n_coefficients(const BasePointContext& ctx, int r, int s, int i, int j);

/// beta with rs_unit(i,j) rs_unit(j,l) = beta rs_unit(i,l), solved exactly.
/// Throws VerificationError when the product is not a multiple of rs_unit(i,l).
Rational structure_constant(const BasePointContext& ctx, int r, int s, int i, int j, int l);

/// Block profiles with the dimension they predict and the dimension of the closure.
struct Decomposition {
  int n;
  int d;
  Regime regime;
  std::vector<BlockProfile> blocks;
  std::size_t dim_formula = 0;
  std::size_t dim_closure = 0;
  bool match = false;
};

Decomposition decompose(const BasePointContext& ctx);

/// A_1 restricted to Ω_i x Ω_j as predicted from the two legs: I ⊗ A + A ⊗ I on the
/// diagonal, containment-matrix products one step off it, zero elsewhere.
RationalMatrix adjacency_block_formula(int n, int d, int i, int j,
                                       const IntersectionSource& source = {});

}  // namespace jterw
