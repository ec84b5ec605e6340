#pragma once

#include <vector>

#include "lipsel/solver.hpp"

namespace lipsel {

// Result of sweeping every small restriction of an instance: the worst
// restricted optimum against the global one. An infeasible (sub)instance
// counts as an infinite optimum.
struct ScanReport {
  int N = 0;                 // subset size bound of the sweep
  Dist local;                // max over subsets of size <= N of restricted lambda*
  Dist global;               // lambda* of the whole instance
  Dist ratio;                // global / local; 1 when equal, inf past 0 or inf
  std::vector<int> witness;  // lexicographically first subset attaining local
};

// The instance induced on a subset of points (distances, images and the
// dimension cap are inherited). Indices are deduplicated and sorted.
SetValuedInstance restrict_instance(const SetValuedInstance& inst,
                                    const std::vector<int>& subset);

// Exact local-versus-global comparison. Points that agree in image,
// distance row and sit at distance zero are interchangeable, so only one
// representative of each such group enters the enumeration; by
// monotonicity of the restricted optimum only maximal subsets are solved.
// Throws CapExceededError when more than cap_subsets restrictions would be
// needed. Subsets are solved in parallel (LIPSEL_THREADS) and reduced in
// lexicographic order.
ScanReport restriction_scan(const SetValuedInstance& inst, int N,
                            long cap_subsets = 20000);

// Four collinear points 1+e, 1, -1, -1-e (e = 1/(2*lambda)) with segment
// images spanning the corners of the rectangle [-2*lambda, 2*lambda] x
// [-1, 1] under the sup norm. Every 3-point restriction admits a selection
// with seminorm at most 1, yet any full selection has seminorm at least
// lambda. Requires lambda >= 1.
SetValuedInstance counterexample_m1(const Rat& lambda);

// Doubled version of counterexample_m1 in dimension 3: each point splits
// into a zero-distance pair whose quadrilateral images tilt by +-e in the
// third coordinate and meet exactly in the original segment. Every 7-point
// restriction admits a selection with seminorm at most 1, yet any full
// selection has seminorm at least lambda. Requires lambda >= 1.
SetValuedInstance counterexample_m2(const Rat& lambda);

// Grid 0, 1/n, ..., 1 under the squared distance |x - y|^2 (dissimilarity
// mode: the triangle inequality genuinely fails). Images pin 0 at the left
// end and 1/N^2 at the right end, with [0, 1] in between. Restrictions to
// at most N points stay below seminorm 1 while the full optimum is n/N^2,
// growing without bound in n. Requires N > 1 and n >= 1.
SetValuedInstance quasimetric_grid(int N, int n);

// Clips every image to the alpha * rho(x0, x) neighbourhood of the anchor
// image: F(x) \cap (F(x0) + alpha rho(x0, x) B). Points at infinite
// distance from the anchor keep their image. An empty clipped image is a
// ValidationError naming the point. Requires alpha >= 1.
SetValuedInstance stkl_reduce(const SetValuedInstance& inst, int x0, const Rat& alpha);

// Reproducible generator: points are distinct rational anchors in Q^d with
// either their sup-norm distances (tree = false) or the path metric of a
// random positively weighted spanning tree (tree = true); each image is
// the hull of m+1 rational points near its anchor, so the dimension cap
// holds by construction.
struct RandomSpec {
  unsigned long seed = 1;
  int npoints = 4;
  int d = 2;
  int m = 1;
  long box = 8;  // anchor coordinates are drawn from [-box, box] with halves
  bool tree = false;
};

SetValuedInstance random_instance(const RandomSpec& spec);

}  // namespace lipsel
