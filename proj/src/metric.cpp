#include "lipsel/metric.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>

#include "lipsel/error.hpp"

namespace lipsel {

std::optional<int> PseudometricSpace::index_of(const std::string& label) const {
  for (size_t i = 0; i < points.size(); ++i)
    if (points[i] == label) return static_cast<int>(i);
  return std::nullopt;
}

PseudometricSpace validate_space(std::vector<std::string> points,
                                 std::vector<std::vector<Dist>> table,
                                 SpaceMode mode) {
  size_t n = points.size();
  if (n == 0) throw ValidationError("a space needs at least one point");
  {
    std::set<std::string> seen;
    for (const auto& p : points)
      if (!seen.insert(p).second)
        throw ValidationError("duplicate point label '" + p + "'");
  }
  if (table.size() != n)
    throw ValidationError("distance table must have one row per point");
  for (size_t i = 0; i < n; ++i)
    if (table[i].size() != n)
      throw ValidationError("distance row for '" + points[i] + "' has wrong length");

  for (size_t i = 0; i < n; ++i) {
    if (!(table[i][i] == Dist::zero()))
      throw ValidationError("nonzero self distance at '" + points[i] + "'");
    for (size_t j = 0; j < n; ++j) {
      const Dist& d = table[i][j];
      if (d.finite && d.value < 0)
        throw ValidationError("negative distance between '" + points[i] + "' and '" +
                              points[j] + "'");
      if (!(d == table[j][i]))
        throw ValidationError("asymmetric distances between '" + points[i] + "' and '" +
                              points[j] + "'");
    }
  }
  if (mode == SpaceMode::pseudometric) {
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        for (size_t k = 0; k < n; ++k)
          if (table[i][k] + table[k][j] < table[i][j])
            throw ValidationError("triangle inequality fails for (" + points[i] + ", " +
                                  points[j] + ", " + points[k] + ")");
  }
  PseudometricSpace s;
  s.points = std::move(points);
  s.dist = std::move(table);
  s.mode = mode;
  return s;
}

std::pair<PseudometricSpace, QuotientMap> quotient_by_zero(const PseudometricSpace& s) {
  if (s.mode != SpaceMode::pseudometric)
    throw ValidationError("quotient_by_zero needs a pseudometric");
  int n = s.size();
  // Zero distance is an equivalence relation here (triangle inequality),
  // so single-pass grouping by first member suffices.
  std::vector<int> cls(static_cast<size_t>(n), -1);
  QuotientMap q;
  for (int i = 0; i < n; ++i) {
    if (cls[static_cast<size_t>(i)] >= 0) continue;
    int c = static_cast<int>(q.classes.size());
    q.classes.push_back({});
    q.representative.push_back(i);
    for (int j = i; j < n; ++j)
      if (cls[static_cast<size_t>(j)] < 0 && s.d(i, j) == Dist::zero()) {
        cls[static_cast<size_t>(j)] = c;
        q.classes.back().push_back(j);
      }
  }
  int m = static_cast<int>(q.classes.size());
  PseudometricSpace out;
  out.mode = SpaceMode::pseudometric;
  for (int c = 0; c < m; ++c)
    out.points.push_back(s.points[static_cast<size_t>(q.representative[static_cast<size_t>(c)])]);
  out.dist.assign(static_cast<size_t>(m), std::vector<Dist>(static_cast<size_t>(m)));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      out.dist[static_cast<size_t>(a)][static_cast<size_t>(b)] =
          s.d(q.representative[static_cast<size_t>(a)], q.representative[static_cast<size_t>(b)]);
  return {std::move(out), std::move(q)};
}

std::vector<std::vector<int>> finiteness_components(const PseudometricSpace& s) {
  if (s.mode != SpaceMode::pseudometric)
    throw ValidationError("finiteness_components needs a pseudometric");
  int n = s.size();
  // Finiteness is transitive by the infinity-absorbing triangle inequality.
  std::vector<bool> used(static_cast<size_t>(n), false);
  std::vector<std::vector<int>> parts;
  for (int i = 0; i < n; ++i) {
    if (used[static_cast<size_t>(i)]) continue;
    parts.push_back({});
    for (int j = i; j < n; ++j)
      if (!used[static_cast<size_t>(j)] && s.d(i, j).finite) {
        used[static_cast<size_t>(j)] = true;
        parts.back().push_back(j);
      }
  }
  return parts;
}

std::optional<int> WeightedTree::index_of(const std::string& label) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == label) return static_cast<int>(i);
  return std::nullopt;
}

std::vector<std::vector<int>> WeightedTree::adjacency() const {
  std::vector<std::vector<int>> adj(nodes.size());
  for (const auto& e : edges) {
    adj[static_cast<size_t>(e.a)].push_back(e.b);
    adj[static_cast<size_t>(e.b)].push_back(e.a);
  }
  return adj;
}

int WeightedTree::degree(int v) const {
  int deg = 0;
  for (const auto& e : edges)
    if (e.a == v || e.b == v) ++deg;
  return deg;
}

WeightedTree validate_tree(std::vector<std::string> nodes, std::vector<TreeEdge> edges,
                           bool allow_zero_lengths) {
  size_t n = nodes.size();
  if (n == 0) throw ValidationError("a tree needs at least one node");
  {
    std::set<std::string> seen;
    for (const auto& p : nodes)
      if (!seen.insert(p).second) throw ValidationError("duplicate node label '" + p + "'");
  }
  if (edges.size() != n - 1)
    throw ValidationError("a tree on " + std::to_string(n) + " nodes needs exactly " +
                          std::to_string(n - 1) + " edges");
  for (const auto& e : edges) {
    if (e.a < 0 || e.b < 0 || e.a >= static_cast<int>(n) || e.b >= static_cast<int>(n) ||
        e.a == e.b)
      throw ValidationError("edge endpoints out of range");
    if (e.length < 0 || (!allow_zero_lengths && e.length == 0))
      throw ValidationError("edge between '" + nodes[static_cast<size_t>(e.a)] + "' and '" +
                            nodes[static_cast<size_t>(e.b)] + "' has nonpositive length");
  }
  WeightedTree t;
  t.nodes = std::move(nodes);
  t.edges = std::move(edges);
  // Edge count is right, so connectivity implies acyclicity.
  std::vector<bool> seen(n, false);
  std::deque<int> queue = {0};
  seen[0] = true;
  auto adj = t.adjacency();
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : adj[static_cast<size_t>(v)])
      if (!seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = true;
        queue.push_back(w);
      }
  }
  for (size_t i = 0; i < n; ++i)
    if (!seen[i]) throw ValidationError("tree is not connected at '" + t.nodes[i] + "'");
  return t;
}

PseudometricSpace tree_metric(const WeightedTree& t) {
  int n = t.size();
  PseudometricSpace s;
  s.mode = SpaceMode::pseudometric;
  s.points = t.nodes;
  s.dist.assign(static_cast<size_t>(n),
                std::vector<Dist>(static_cast<size_t>(n), Dist::zero()));
  auto adj = t.adjacency();
  std::vector<std::vector<Rat>> len(static_cast<size_t>(n));
  for (size_t v = 0; v < static_cast<size_t>(n); ++v) len[v].resize(adj[v].size());
  for (size_t v = 0; v < static_cast<size_t>(n); ++v)
    for (size_t k = 0; k < adj[v].size(); ++k) {
      int w = adj[v][k];
      for (const auto& e : t.edges)
        if ((e.a == static_cast<int>(v) && e.b == w) ||
            (e.b == static_cast<int>(v) && e.a == w))
          len[v][k] = e.length;
    }
  for (int src = 0; src < n; ++src) {
    std::vector<bool> seen(static_cast<size_t>(n), false);
    std::deque<int> queue = {src};
    seen[static_cast<size_t>(src)] = true;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (size_t k = 0; k < adj[static_cast<size_t>(v)].size(); ++k) {
        int w = adj[static_cast<size_t>(v)][k];
        if (seen[static_cast<size_t>(w)]) continue;
        seen[static_cast<size_t>(w)] = true;
        s.dist[static_cast<size_t>(src)][static_cast<size_t>(w)] =
            Dist::of(s.d(src, v).value + len[static_cast<size_t>(v)][k]);
        queue.push_back(w);
      }
    }
  }
  return s;
}

namespace {

// One recursion step of the spanning-tree construction: emits edges within
// the index subset and returns the subset's hub.
int build_tree_rec(const PseudometricSpace& s, const std::vector<int>& subset,
                   std::vector<TreeEdge>& edges) {
  int k1 = static_cast<int>(subset.size());
  if (k1 == 1) return subset[0];

  // Diameter pair, first in index order.
  Rat diam = 0;
  int x0 = subset[0];
  for (size_t i = 0; i < subset.size(); ++i)
    for (size_t j = i + 1; j < subset.size(); ++j) {
      const Rat& v = s.d(subset[i], subset[j]).value;
      if (v > diam) {
        diam = v;
        x0 = subset[i];
      }
    }

  std::vector<int> near, far;
  if (diam == 0) {
    // Split off the last point.
    near.assign(subset.begin(), subset.end() - 1);
    far = {subset.back()};
  } else {
    // Chain component of x0 with steps below diam / (#subset - 1).
    Rat step = diam / (k1 - 1);
    std::vector<bool> in_near(subset.size(), false);
    std::deque<size_t> queue;
    for (size_t i = 0; i < subset.size(); ++i)
      if (subset[i] == x0) {
        in_near[i] = true;
        queue.push_back(i);
      }
    while (!queue.empty()) {
      size_t v = queue.front();
      queue.pop_front();
      for (size_t w = 0; w < subset.size(); ++w)
        if (!in_near[w] && s.d(subset[v], subset[w]).value < step) {
          in_near[w] = true;
          queue.push_back(w);
        }
    }
    for (size_t i = 0; i < subset.size(); ++i)
      (in_near[i] ? near : far).push_back(subset[i]);
    assert(!far.empty());
  }
  if (near.size() < far.size()) std::swap(near, far);

  int hub = build_tree_rec(s, near, edges);
  build_tree_rec(s, far, edges);
  int attach = far[0];
  edges.push_back({hub, attach, s.d(hub, attach).value});
  return hub;
}

}  // namespace

LowDegreeTree build_low_degree_tree(const PseudometricSpace& s) {
  if (s.mode != SpaceMode::pseudometric)
    throw ValidationError("tree construction needs a pseudometric");
  int n = s.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!s.d(i, j).finite)
        throw ValidationError("tree construction needs finite distances, but d(" +
                              s.points[static_cast<size_t>(i)] + ", " +
                              s.points[static_cast<size_t>(j)] + ") is infinite");
  std::vector<int> all(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<size_t>(i)] = i;
  std::vector<TreeEdge> edges;
  int hub = build_tree_rec(s, all, edges);
  LowDegreeTree out;
  out.tree = validate_tree(s.points, std::move(edges), /*allow_zero_lengths=*/true);
  out.tree.root = hub;
  out.hub = hub;
  return out;
}

Rat tree_distortion_bound(int k) {
  if (k < 1) throw ValidationError("distortion bound needs k >= 1");
  Rat theta = 1;
  for (int i = 1; i < k; ++i) theta = Rat(i) * (2 * theta + 1);
  return theta;
}

std::vector<Branch> branches(const WeightedTree& t, int x0) {
  if (x0 < 0 || x0 >= t.size()) throw ValidationError("branch root out of range");
  auto adj = t.adjacency();
  std::vector<Branch> out;
  for (int u : adj[static_cast<size_t>(x0)]) {
    Branch br;
    br.neighbor = u;
    std::vector<bool> seen(t.nodes.size(), false);
    seen[static_cast<size_t>(x0)] = true;
    seen[static_cast<size_t>(u)] = true;
    std::deque<int> queue = {u};
    br.members = {x0, u};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int w : adj[static_cast<size_t>(v)])
        if (!seen[static_cast<size_t>(w)]) {
          seen[static_cast<size_t>(w)] = true;
          br.members.push_back(w);
          queue.push_back(w);
        }
    }
    std::sort(br.members.begin(), br.members.end());
    out.push_back(std::move(br));
  }
  return out;
}

GluedTrees glue_trees(const std::vector<std::pair<WeightedTree, int>>& parts) {
  if (parts.empty()) throw ValidationError("nothing to glue");
  for (const auto& [t, a] : parts)
    if (a < 0 || a >= t.size()) throw ValidationError("glue node out of range");

  GluedTrees out;
  const std::string& junction_label = parts[0].first.nodes[static_cast<size_t>(parts[0].second)];
  out.tree.nodes.push_back(junction_label);
  out.junction = 0;

  std::set<std::string> seen = {junction_label};
  for (const auto& [t, a] : parts) {
    std::vector<int> remap(t.nodes.size(), -1);
    remap[static_cast<size_t>(a)] = 0;
    for (int v = 0; v < t.size(); ++v) {
      if (v == a) continue;
      const std::string& label = t.nodes[static_cast<size_t>(v)];
      if (!seen.insert(label).second)
        throw ValidationError("node label '" + label + "' appears in more than one tree");
      remap[static_cast<size_t>(v)] = static_cast<int>(out.tree.nodes.size());
      out.tree.nodes.push_back(label);
    }
    for (const auto& e : t.edges)
      out.tree.edges.push_back(
          {remap[static_cast<size_t>(e.a)], remap[static_cast<size_t>(e.b)], e.length});
    out.node_map.push_back(std::move(remap));
  }
  // Re-validate wiring; lengths were already checked by the inputs.
  out.tree = validate_tree(std::move(out.tree.nodes), std::move(out.tree.edges),
                           /*allow_zero_lengths=*/true);
  return out;
}

}  // namespace lipsel
