#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lipsel/lp.hpp"

namespace lipsel {

// Closed halfspace <a,x> <= b. Canonical form scales a to a primitive
// integer vector (positive factor only, so the set is unchanged).
struct Halfspace {
  Vec a;
  Rat b;
};

// Bounded nonempty convex set in Q^d, d <= 4, carried in both
// representations. Vertices are the extreme points sorted lexicographically;
// halfspaces are canonical and include the affine hull as equality pairs
// when the set is lower dimensional. Two polytopes are equal as sets exactly
// when their vertex lists are equal, which makes equality decidable.
// The empty set is never a Polytope; operations that can produce it return
// std::optional.
struct Polytope {
  int dim = 0;
  std::vector<Vec> vertices;
  std::vector<Halfspace> halfspaces;
};

bool operator==(const Polytope& p, const Polytope& q);
inline bool operator!=(const Polytope& p, const Polytope& q) { return !(p == q); }

// Norm given by its unit ball: a full-dimensional centrally symmetric
// polytope with 0 in the interior. The norm value is the gauge of the ball.
struct PolyhedralNorm {
  Polytope ball;
  int dim() const { return ball.dim; }
};

// Convex hull of a nonempty point set. Throws ValidationError on dimension
// mismatch or ambient dimension outside [1,4].
Polytope hull(std::vector<Vec> pts);

// Solution set of the rows, or nullopt when empty. Throws ValidationError
// when the set is unbounded.
std::optional<Polytope> from_halfspaces(int dim, const std::vector<LinRow>& rows);

std::optional<Polytope> intersect(const Polytope& p, const Polytope& q);

// Minkowski sum p + q, exact via the hull of pairwise vertex sums.
Polytope minkowski_sum(const Polytope& p, const Polytope& q);

// p + r * ball, r >= 0.
Polytope add_ball(const Polytope& p, const PolyhedralNorm& norm, const Rat& r);

// The ball {x : gauge(x - center) <= r}; a single point when r = 0.
Polytope make_ball(const PolyhedralNorm& norm, const Vec& center, const Rat& r);

PolyhedralNorm norm_linf(int d);
PolyhedralNorm norm_l1(int d);
// Validates central symmetry, full dimension and 0 in the interior.
PolyhedralNorm norm_from_ball(Polytope ball);

// gauge(v) = max_i <a_i,v>/b_i over the ball halfspaces.
Rat gauge(const PolyhedralNorm& norm, const Vec& v);
// Dual norm of a functional: max of <e,.> over the ball.
Rat dual_norm(const PolyhedralNorm& norm, const Vec& e);
// Support function: max of <a,.> over p.
Rat support(const Polytope& p, const Vec& a);

bool contains_point(const Polytope& p, const Vec& x);
// Every vertex of p satisfies q's halfspaces.
bool subset_of(const Polytope& p, const Polytope& q);

int affine_dim(const Polytope& p);

// Exact barycenter for affine dimension <= 3 (simplex fans within the
// affine hull). Throws ValidationError above dimension 3.
Vec centroid(const Polytope& p);

// Smallest r with x in p + r*ball, via one LP.
Rat dist_to_set(const Vec& x, const Polytope& p, const PolyhedralNorm& norm);

// Hausdorff distance, exact: the maximum over vertices of the gauge
// distance to the other body.
Rat hausdorff(const Polytope& p, const Polytope& q, const PolyhedralNorm& norm);

// Kolmogorov m-width. Exact (lower == upper) when m == 0 (Chebyshev radius
// LP) or m >= affine_dim (zero). Otherwise upper is the best flat through
// an (m+1)-subset of vertices and lower is unknown (nullopt).
struct WidthResult {
  std::optional<Rat> lower;
  Rat upper;
  bool exact() const { return lower.has_value() && *lower == upper; }
};
WidthResult kolmogorov_width(const Polytope& p, int m, const PolyhedralNorm& norm);

// Intersection pattern check for a family lying in a common affine subspace
// of dimension <= m: if every (m+1)-subfamily intersects, the whole family
// must intersect. Throws ValidationError when the dimension precondition
// fails.
struct HellyReport {
  int common_dim = 0;
  bool hypothesis_holds = false;      // every (m+1)-subfamily intersects
  std::vector<int> violating_subfamily;  // witness when hypothesis fails
  bool all_intersect = false;         // raw full-intersection check
  std::optional<Vec> witness;         // common point when all_intersect
  bool conclusion_ok = false;         // hypothesis implies all_intersect
};
HellyReport helly_check(const std::vector<Polytope>& family, int m);

// Exact shadow of the solution set of sys onto the listed coordinates,
// via Fourier-Motzkin elimination with equality substitution and LP-based
// redundancy removal. Throws CapExceededError when the working row count
// exceeds cap. Returns nullopt when the system is infeasible.
std::optional<Polytope> project_system(const LinSystem& sys,
                                       const std::vector<int>& keep,
                                       int cap = 10000);

// Shadow of p onto its first keep_first coordinates.
std::optional<Polytope> project(const Polytope& p, int keep_first, int cap = 10000);

// Verifies the truncation stability inequality
//   d_H(G1 cap B(a1,2r1), G2 cap B(a2,2r2))
//     <= 18 (d_H(G1,G2) + ||a1-a2|| + |r1-r2|)
// exactly, given that each G_i meets B(a_i, r_i) (checked; ValidationError
// otherwise). Both sides are returned.
struct StabilityReport {
  Rat lhs;
  Rat rhs;
  bool holds = false;
};
StabilityReport inclusion_stability_check(const Polytope& g1, const Polytope& g2,
                                          const Vec& a1, const Vec& a2,
                                          const Rat& r1, const Rat& r2,
                                          const PolyhedralNorm& norm);

}  // namespace lipsel
