#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lipsel/rational.hpp"

namespace lipsel {

enum class SpaceMode { pseudometric, dissimilarity };

// Finite point set with a symmetric distance table over Q>=0 plus infinity.
// In pseudometric mode the triangle inequality holds (with infinity
// absorbing); dissimilarity mode drops that requirement.
struct PseudometricSpace {
  std::vector<std::string> points;
  std::vector<std::vector<Dist>> dist;
  SpaceMode mode = SpaceMode::pseudometric;

  int size() const { return static_cast<int>(points.size()); }
  const Dist& d(int i, int j) const {
    return dist[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }
  // Index of a label, or nullopt when absent.
  std::optional<int> index_of(const std::string& label) const;
};

// Checks symmetry, zero diagonal, nonnegativity and (in pseudometric mode)
// the triangle inequality; each failure names the offending points.
PseudometricSpace validate_space(std::vector<std::string> points,
                                 std::vector<std::vector<Dist>> table,
                                 SpaceMode mode);

struct QuotientMap {
  std::vector<std::vector<int>> classes;  // original indices, grouped
  std::vector<int> representative;        // one original index per class
};

// Collapses the zero-distance equivalence classes of a pseudometric space
// to their first members; the result is a genuine metric space on the
// representatives.
std::pair<PseudometricSpace, QuotientMap> quotient_by_zero(const PseudometricSpace& s);

// Partition into maximal subsets with pairwise finite distance (classes
// listed in order of first appearance).
std::vector<std::vector<int>> finiteness_components(const PseudometricSpace& s);

struct TreeEdge {
  int a = 0;
  int b = 0;
  Rat length;
};

// Connected acyclic graph with rational edge lengths. Lengths are strictly
// positive for user supplied trees; trees produced by the spanning-tree
// builder may carry zero-length edges (they span pseudometrics).
struct WeightedTree {
  std::vector<std::string> nodes;
  std::vector<TreeEdge> edges;
  std::optional<int> root;

  int size() const { return static_cast<int>(nodes.size()); }
  std::optional<int> index_of(const std::string& label) const;
  std::vector<std::vector<int>> adjacency() const;  // neighbor lists
  int degree(int v) const;
};

// Validates connectivity, acyclicity, label uniqueness and edge lengths
// (> 0 unless allow_zero_lengths).
WeightedTree validate_tree(std::vector<std::string> nodes, std::vector<TreeEdge> edges,
                           bool allow_zero_lengths = false);

// Path-sum metric of the tree, in pseudometric mode.
PseudometricSpace tree_metric(const WeightedTree& t);

// Spanning tree with distortion at most theta(#M) and a hub node of degree
// at least ceil(log2(#M)). Requires all distances finite. Edge lengths are
// the source distances between the endpoints, so they can be zero.
struct LowDegreeTree {
  WeightedTree tree;
  int hub = 0;
};
LowDegreeTree build_low_degree_tree(const PseudometricSpace& s);

// theta(1)=1, theta(k+1)=k(2 theta(k)+1): the distortion bound of
// build_low_degree_tree for #M = k.
Rat tree_distortion_bound(int k);

// For each neighbor u of x0: the nodes whose path to x0 passes through u,
// plus x0 itself. Returned in adjacency order of x0.
struct Branch {
  int neighbor = 0;
  std::vector<int> members;  // sorted node indices, always including x0
};
std::vector<Branch> branches(const WeightedTree& t, int x0);

// Identifies the marked nodes a_i of the given trees into a single node
// (which keeps the first tree's label) and keeps everything else disjoint.
struct GluedTrees {
  WeightedTree tree;
  int junction = 0;                       // index of the identified node
  std::vector<std::vector<int>> node_map;  // per input tree: node -> new index
};
GluedTrees glue_trees(const std::vector<std::pair<WeightedTree, int>>& parts);

}  // namespace lipsel
