#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lipsel/geometry.hpp"
#include "lipsel/metric.hpp"

namespace lipsel {

// A set-valued selection problem: one bounded convex image per point of a
// finite pseudometric space, all living in the ambient space of the norm,
// with affine dimension at most m.
struct SetValuedInstance {
  PseudometricSpace space;
  PolyhedralNorm norm;
  std::vector<Polytope> images;  // indexed like space.points
  int m = 0;
};

// Checks counts, ambient dimensions and the dimension cap; failures name
// the offending point.
SetValuedInstance validate_instance(PseudometricSpace space, PolyhedralNorm norm,
                                    std::vector<Polytope> images, int m);

// A candidate selection value per point together with its Lipschitz
// seminorm: the largest gauge-to-distance ratio over pairs at finite
// positive distance, infinite when a zero-distance pair carries distinct
// values.
struct Selection {
  std::vector<Vec> values;
  Dist lip;
};

Dist selection_seminorm(const PseudometricSpace& space, const PolyhedralNorm& norm,
                        const std::vector<Vec>& values);

struct SelectionCheck {
  bool ok = true;
  std::string detail;  // first membership violation, named
  Dist lip;
};

// Membership of every value in its image, plus the measured seminorm.
SelectionCheck check_selection(const SetValuedInstance& inst,
                               const std::vector<Vec>& values);

// The smallest lambda admitting a lambda-Lipschitz selection, with an
// optimal vertex witness whose seminorm equals that optimum. Deterministic.
// Returns nullopt exactly when a zero-distance class of points has images
// with empty intersection; every other instance is feasible for lambda
// large enough.
std::optional<std::pair<Rat, Selection>> min_lipschitz(const SetValuedInstance& inst);

// A lambda-Lipschitz selection at the given fixed lambda, or nullopt.
std::optional<Selection> feasible_at(const SetValuedInstance& inst, const Rat& lambda);

// gamma_set(x, S): the values assumable at x by lambda-Lipschitz partial
// selections defined on S + {x}. Computed as the exact shadow of the
// restricted feasibility system on the f(x) coordinates; nullopt when no
// partial selection exists.
std::optional<Polytope> gamma_set(const SetValuedInstance& inst, const Rat& lambda,
                                  int x, const std::vector<int>& subset,
                                  int cap = 10000);

// Intersection of gamma_set(x, S) over every S of size min((m+2)^ell,
// #points). Smaller subsets yield supersets and are skipped. Throws
// CapExceededError when the subset count exceeds cap_subsets; subsets are
// folded in lexicographic order (workers only share the shadow work).
std::optional<Polytope> gamma_ell(const SetValuedInstance& inst, const Rat& lambda,
                                  int x, int ell, long cap_subsets = 20000,
                                  int cap_rows = 10000);

// The values f(x) ranges over as f runs through all full lambda-Lipschitz
// selections: the shadow of the whole feasibility system on f(x).
std::optional<Polytope> orbit(const SetValuedInstance& inst, const Rat& lambda,
                              int x, int cap = 10000);

// Orbit at node a of the instance pulled back through the node map w onto
// the tree's path metric: node u carries the image of point w[u] and each
// edge (u, v) is weighted by the instance distance between w[u] and w[v].
// Edge lengths stored in the shape tree are ignored. w must send adjacent
// nodes to distinct points.
std::optional<Polytope> tree_orbit(const SetValuedInstance& inst,
                                   const WeightedTree& shape,
                                   const std::vector<int>& w, int a,
                                   const Rat& lambda, int cap = 10000);

// Size thresholds of the selection machinery for dimension cap m and
// target dimension dim_y.
struct SelectionConstants {
  int m = 0;
  mpz_class finiteness_number;  // 2^min(m+1, dim_y)
  int ell_sharp = 0;            // 2 + 3m
  mpz_class k_sharp;            // (m+2)^(ell_sharp+1)

  mpz_class k_ell(int ell) const;    // (m+2)^ell
  int ell_of_label(int size) const;  // 2 + 3(m - size) for 0 <= size <= m
};

SelectionConstants constants(int m, int dim_y);

}  // namespace lipsel
