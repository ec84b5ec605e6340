#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lipsel/geometry.hpp"

namespace lipsel {

// Output of a point-valued selector: the chosen point, whether it lies in
// the input body (tested exactly), and which construction produced it.
struct SelectorReport {
  Vec point;
  bool inside = false;
  std::string method;
};

// Center of the smallest axis-aligned bounding rectangle of a planar body.
// Always a member of the body, and 1-Lipschitz in the sup-norm Hausdorff
// distance.
Vec rect_selector_linf2(const Polytope& p);

// Largest gauge distance between two vertices.
Rat norm_diameter(const Polytope& p, const PolyhedralNorm& norm);

// Centroid of the parallel body p + diam(p) * ball, for bodies of affine
// dimension at most 2. In ambient dimension 2 the point is guaranteed to
// lie inside p; in higher dimensions it may not, and the report says which.
// Throws when the parallel body is too high dimensional for the exact
// centroid (ambient dimension 4 with a positive diameter).
SelectorReport parallel_body_centroid(const Polytope& p, const PolyhedralNorm& norm);

// Euclidean Steiner point of a planar body, evaluated in binary64 by
// uniform angular quadrature of 2 * integral of u * h(u) over the unit
// circle with n nodes (n >= 64, error O(1/n^2)). Deterministic for fixed n,
// and the only non-rational computation in the library. A single point is
// returned as is.
std::vector<double> steiner_point_polygon(const Polytope& p, int n);

// Regularity coefficient: the measure of the slice of a minimal enclosing
// ball (center restricted to the affine span) through the affine span,
// divided by the measure of the body. Length for segments, area for bodies
// of affine dimension 2; exact, and always at least 1. A single point gets
// the degenerate value 0 (the ratio there is 0/0). Throws for affine
// dimension 3 and up.
Rat regularity_coefficient(const Polytope& p, const PolyhedralNorm& norm);

// Width-ball truncation: p cut to the ball around center whose radius is
// gamma_hat times the Kolmogorov m-width of p (the computed upper value).
// Nullopt when the cut is empty.
std::optional<Polytope> truncate_to_width_ball(const Polytope& p,
                                               const PolyhedralNorm& norm,
                                               const Vec& center,
                                               const Rat& gamma_hat, int m);

}  // namespace lipsel
