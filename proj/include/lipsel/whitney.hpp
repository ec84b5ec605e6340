#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lipsel/geometry.hpp"
#include "lipsel/metric.hpp"

namespace lipsel {

// One part of a covering: point indices in ascending order, optionally
// tagged with the (parity, ancestor) pair assigned by the tree construction.
struct CoveringPart {
  std::vector<int> members;
  std::optional<std::pair<int, int>> label;
};

// Covering of a finite space by parts of diameter at most scale.
struct Covering {
  Rat scale;
  std::vector<CoveringPart> parts;
};

// Covers a weighted tree at the given lengthscale. After rescaling distances
// by 4/scale, each node is assigned its distinguished ancestor: the earliest
// node p on its root path with d(root, p) > floor(d(root, x)) - 1. Nodes are
// grouped by that ancestor and by the parity of floor(d(root, x)). Every
// part then has diameter at most scale, and any ball of radius scale/16
// meets at most two parts. The root defaults to the first node.
Covering nagata_cover_metric_tree(const WeightedTree& tree, const Rat& scale);

struct CoverReport {
  bool ok = true;
  std::string detail;  // first violation when not ok
};

// Checks that every part has diameter <= scale and that each closed ball of
// radius c*scale around a point meets at most cap+1 parts. Throws when the
// covering does not fit the space (empty or out-of-range parts, or a point
// in no part).
CoverReport verify_nagata_cover(const PseudometricSpace& space, const Covering& cover,
                                const Rat& c, int cap);

// One bump of a partition of unity: values[x] is the weight at point x.
struct WhitneyEntry {
  int center = 0;
  Rat lengthscale;  // r at the center
  std::vector<Rat> values;
};

// Partition of unity subordinate to the balls B(center, a*lengthscale).
// Entries are aggregated per center and sorted by center index. Recorded
// alongside: the covering constants (c_ng, cap_ng) the per-scale covers were
// verified against, the worst lengthscale ratio c_ls over pairs with
// d <= r(x)+r(y), the window constant big_a actually used, the largest
// per-point count of nonzero entries, and the measured lip_factor with
// |value(x) - value(y)| <= lip_factor * d(x,y) / lengthscale for all entries.
struct WhitneyPartition {
  std::vector<WhitneyEntry> entries;
  Rat c_ng;
  int cap_ng = 0;
  Rat c_ls;
  Rat a;
  Rat big_a;
  int multiplicity = 0;
  Rat lip_factor;
};

// Produces the covering to use at a given scale (always a power of two).
using CoverSupplier = std::function<Covering(const Rat& scale)>;

// Supplier backed by nagata_cover_metric_tree; the tree's path metric must
// agree with the space the partition is built over.
CoverSupplier tree_cover_supplier(WeightedTree tree);

// Builds the partition of unity. For each power-of-two scale s between
// A^-3 * min r and A^-1 * max r, the parts of the supplied covering whose
// representative point (lexicographically first member) satisfies
// A^-3 * r <= s <= A^-1 * r contribute the bump
// max{0, 1 - 256*d(x, part)/(c_ng*s)}; the bumps are divided by their
// per-point total and aggregated per representative. If some point lies in
// no admitted part, or a bump escapes its support ball B(center, a*r), A is
// doubled (up to 65536) and the construction retries.
WhitneyPartition whitney_partition(const PseudometricSpace& space,
                                   const std::vector<Rat>& lengthscales,
                                   const Rat& c_ng, int cap_ng, const Rat& a,
                                   const CoverSupplier& covers, long big_a = 64);

// Local selection for one partition entry: values where defined (at least
// wherever the entry's weight is nonzero) and the anchor vector the values
// are measured against.
struct LocalSelection {
  std::vector<std::optional<Vec>> values;
  Vec anchor;
};

// Patched map F = sum of weight * local, with its measured constants.
struct PatchReport {
  std::vector<Vec> values;
  Dist seminorm;           // gauge(F(x)-F(y)) / d(x,y), worst pair
  Dist partition_lip;      // |value(x)-value(y)| * r / d(x,y), worst entry and pair
  Rat anchor_consistency;  // gauge(anchor_m - anchor_n) / (r_m + r_n + d), worst pair
  Rat agreement;           // gauge(local(x) - anchor) / r, worst entry and ball point
  Dist local_lip;          // gauge(local(x) - local(y)) / d(x,y) within the ball
  int multiplicity = 0;    // worst per-point count of nonzero weights
};

// Blends the locals with the partition weights. Requires a pseudometric
// space, an exact partition of unity (values >= 0, per-point sum 1), the
// support factor a = 1/(4*c_ls), and each local defined wherever its weight
// is nonzero. Constants are measured over the closed balls B(center, r).
PatchReport patch_selections(const PseudometricSpace& space, const WhitneyPartition& partition,
                             const std::vector<LocalSelection>& locals,
                             const PolyhedralNorm& norm);

}  // namespace lipsel
