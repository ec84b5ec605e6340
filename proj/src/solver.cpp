#include "lipsel/solver.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <utility>

#include "lipsel/combin.hpp"
#include "lipsel/error.hpp"
#include "lipsel/parallel.hpp"

namespace lipsel {

namespace {

// Running maximum over distance values with an infinity channel.
struct SupDist {
  bool inf = false;
  Rat val = 0;

  void take(const Rat& v) {
    if (!inf && v > val) val = v;
  }
  Dist done() const { return inf ? Dist::infinity() : Dist::of(val); }
};

int uf_find(std::vector<int>& up, int i) {
  while (up[static_cast<size_t>(i)] != i) {
    up[static_cast<size_t>(i)] = up[static_cast<size_t>(up[static_cast<size_t>(i)])];
    i = up[static_cast<size_t>(i)];
  }
  return i;
}

// The linear feasibility system of lambda-Lipschitz selections on a chosen
// subset of points. Points at distance zero are merged into classes, one
// variable block per class; a pair constraint is dropped when a third
// class realizes it by two strictly shorter hops. When lambda is a
// variable it occupies the final column.
struct FeasibilitySystem {
  std::vector<int> chosen;                // original indices, ascending
  std::vector<int> class_of;              // position in chosen -> class
  std::vector<std::vector<int>> classes;  // class -> positions in chosen
  std::vector<int> block_of;              // class -> variable block
  int d = 0;
  int lambda_col = -1;
  LinSystem sys;

  int block_of_point(int x) const {
    auto it = std::lower_bound(chosen.begin(), chosen.end(), x);
    int pos = static_cast<int>(it - chosen.begin());
    return block_of[static_cast<size_t>(class_of[static_cast<size_t>(pos)])];
  }
};

// target: original point index whose class should get block 0, with the
// remaining blocks ordered by graph distance so that the projection
// eliminates far-away classes first; -1 keeps class order.
FeasibilitySystem build_system(const SetValuedInstance& inst, std::vector<int> chosen,
                               const std::optional<Rat>& lambda, int target) {
  FeasibilitySystem fs;
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  fs.chosen = std::move(chosen);
  int k = static_cast<int>(fs.chosen.size());
  fs.d = inst.norm.dim();

  std::vector<int> up(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) up[static_cast<size_t>(i)] = i;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const Dist& dd = inst.space.d(fs.chosen[static_cast<size_t>(i)],
                                    fs.chosen[static_cast<size_t>(j)]);
      if (dd.finite && dd.value == 0)
        up[static_cast<size_t>(uf_find(up, i))] = uf_find(up, j);
    }
  fs.class_of.assign(static_cast<size_t>(k), -1);
  for (int i = 0; i < k; ++i) {
    int root = uf_find(up, i);
    if (fs.class_of[static_cast<size_t>(root)] < 0) {
      fs.class_of[static_cast<size_t>(root)] = static_cast<int>(fs.classes.size());
      fs.classes.emplace_back();
    }
    fs.class_of[static_cast<size_t>(i)] = fs.class_of[static_cast<size_t>(root)];
    fs.classes[static_cast<size_t>(fs.class_of[static_cast<size_t>(i)])].push_back(i);
  }
  int nc = static_cast<int>(fs.classes.size());

  // Tightest finite distance between each pair of classes.
  std::vector<std::vector<std::optional<Rat>>> rho(
      static_cast<size_t>(nc), std::vector<std::optional<Rat>>(static_cast<size_t>(nc)));
  for (int ci = 0; ci < nc; ++ci)
    for (int cj = ci + 1; cj < nc; ++cj) {
      std::optional<Rat> best;
      for (int pi : fs.classes[static_cast<size_t>(ci)])
        for (int pj : fs.classes[static_cast<size_t>(cj)]) {
          const Dist& dd = inst.space.d(fs.chosen[static_cast<size_t>(pi)],
                                        fs.chosen[static_cast<size_t>(pj)]);
          if (!dd.finite) continue;
          if (!best || dd.value < *best) best = dd.value;
        }
      rho[static_cast<size_t>(ci)][static_cast<size_t>(cj)] = best;
      rho[static_cast<size_t>(cj)][static_cast<size_t>(ci)] = best;
    }

  // A pair is implied by two-hop chains that are strictly shorter on both
  // legs and no longer in total, so it can be dropped. Strictness keeps
  // the pruning well founded: a dropped pair only ever leans on shorter
  // pairs.
  std::vector<std::pair<int, int>> retained;
  for (int ci = 0; ci < nc; ++ci)
    for (int cj = ci + 1; cj < nc; ++cj) {
      const auto& rij = rho[static_cast<size_t>(ci)][static_cast<size_t>(cj)];
      if (!rij) continue;
      bool implied = false;
      for (int ck = 0; ck < nc && !implied; ++ck) {
        if (ck == ci || ck == cj) continue;
        const auto& rik = rho[static_cast<size_t>(ci)][static_cast<size_t>(ck)];
        const auto& rkj = rho[static_cast<size_t>(ck)][static_cast<size_t>(cj)];
        if (!rik || !rkj) continue;
        if (*rik < *rij && *rkj < *rij && Rat(*rik + *rkj) <= *rij) implied = true;
      }
      if (!implied) retained.emplace_back(ci, cj);
    }

  // Variable block order: breadth first from the target's class over the
  // retained pairs, so the highest blocks (eliminated first during
  // projection) are the classes farthest from the target.
  fs.block_of.resize(static_cast<size_t>(nc));
  if (target < 0) {
    for (int c = 0; c < nc; ++c) fs.block_of[static_cast<size_t>(c)] = c;
  } else {
    auto pos_it = std::lower_bound(fs.chosen.begin(), fs.chosen.end(), target);
    int start = fs.class_of[static_cast<size_t>(pos_it - fs.chosen.begin())];
    std::vector<std::vector<int>> adj(static_cast<size_t>(nc));
    for (auto& [a, b] : retained) {
      adj[static_cast<size_t>(a)].push_back(b);
      adj[static_cast<size_t>(b)].push_back(a);
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    std::vector<int> order;
    std::vector<bool> seen(static_cast<size_t>(nc), false);
    std::deque<int> queue{start};
    seen[static_cast<size_t>(start)] = true;
    while (!queue.empty()) {
      int c = queue.front();
      queue.pop_front();
      order.push_back(c);
      for (int nb : adj[static_cast<size_t>(c)])
        if (!seen[static_cast<size_t>(nb)]) {
          seen[static_cast<size_t>(nb)] = true;
          queue.push_back(nb);
        }
    }
    for (int c = 0; c < nc; ++c)
      if (!seen[static_cast<size_t>(c)]) order.push_back(c);
    for (int rank = 0; rank < nc; ++rank)
      fs.block_of[static_cast<size_t>(order[static_cast<size_t>(rank)])] = rank;
  }

  int nvars = nc * fs.d + (lambda ? 0 : 1);
  fs.lambda_col = lambda ? -1 : nc * fs.d;
  fs.sys.nvars = nvars;

  auto block_col = [&](int cls, int coord) {
    return fs.block_of[static_cast<size_t>(cls)] * fs.d + coord;
  };

  for (int c = 0; c < nc; ++c)
    for (int pos : fs.classes[static_cast<size_t>(c)]) {
      const Polytope& img = inst.images[static_cast<size_t>(fs.chosen[static_cast<size_t>(pos)])];
      for (const auto& h : img.halfspaces) {
        LinRow row;
        row.a.assign(static_cast<size_t>(nvars), Rat(0));
        for (int t = 0; t < fs.d; ++t)
          row.a[static_cast<size_t>(block_col(c, t))] = h.a[static_cast<size_t>(t)];
        row.b = h.b;
        fs.sys.rows.push_back(std::move(row));
      }
    }

  for (auto& [ci, cj] : retained) {
    const Rat& r = *rho[static_cast<size_t>(ci)][static_cast<size_t>(cj)];
    for (const auto& h : inst.norm.ball.halfspaces) {
      LinRow row;
      row.a.assign(static_cast<size_t>(nvars), Rat(0));
      for (int t = 0; t < fs.d; ++t) {
        row.a[static_cast<size_t>(block_col(ci, t))] += h.a[static_cast<size_t>(t)];
        row.a[static_cast<size_t>(block_col(cj, t))] -= h.a[static_cast<size_t>(t)];
      }
      if (lambda) {
        row.b = Rat(*lambda * r * h.b);
      } else {
        row.a[static_cast<size_t>(fs.lambda_col)] = Rat(-r * h.b);
        row.b = 0;
      }
      fs.sys.rows.push_back(std::move(row));
    }
  }

  if (!lambda) {
    LinRow row;
    row.a.assign(static_cast<size_t>(nvars), Rat(0));
    row.a[static_cast<size_t>(fs.lambda_col)] = -1;
    row.b = 0;
    fs.sys.rows.push_back(std::move(row));
  }
  return fs;
}

std::vector<Vec> unpack_values(const FeasibilitySystem& fs, const Vec& x) {
  std::vector<Vec> values(fs.chosen.size());
  for (size_t pos = 0; pos < fs.chosen.size(); ++pos) {
    int block = fs.block_of[static_cast<size_t>(fs.class_of[pos])];
    Vec v(static_cast<size_t>(fs.d));
    for (int t = 0; t < fs.d; ++t)
      v[static_cast<size_t>(t)] = x[static_cast<size_t>(block * fs.d + t)];
    values[pos] = std::move(v);
  }
  return values;
}

std::vector<int> all_points(const SetValuedInstance& inst) {
  std::vector<int> pts(static_cast<size_t>(inst.space.size()));
  for (int i = 0; i < inst.space.size(); ++i) pts[static_cast<size_t>(i)] = i;
  return pts;
}

void require_point(const SetValuedInstance& inst, int x, const char* what) {
  if (x < 0 || x >= inst.space.size())
    throw ValidationError(std::string(what) + " index " + std::to_string(x) +
                          " is outside the space");
}

void require_lambda(const Rat& lambda) {
  if (lambda < 0) throw ValidationError("lambda must be nonnegative");
}

}  // namespace

SetValuedInstance validate_instance(PseudometricSpace space, PolyhedralNorm norm,
                                    std::vector<Polytope> images, int m) {
  if (m < 0) throw ValidationError("the dimension cap m must be nonnegative");
  if (static_cast<int>(images.size()) != space.size())
    throw ValidationError("expected " + std::to_string(space.size()) +
                          " images, got " + std::to_string(images.size()));
  for (int i = 0; i < space.size(); ++i) {
    const Polytope& img = images[static_cast<size_t>(i)];
    if (img.dim != norm.dim())
      throw ValidationError("the image of '" + space.points[static_cast<size_t>(i)] +
                            "' lives in dimension " + std::to_string(img.dim) +
                            ", the norm in " + std::to_string(norm.dim()));
    int ad = affine_dim(img);
    if (ad > m)
      throw ValidationError("the image of '" + space.points[static_cast<size_t>(i)] +
                            "' has affine dimension " + std::to_string(ad) +
                            ", the cap is " + std::to_string(m));
  }
  return SetValuedInstance{std::move(space), std::move(norm), std::move(images), m};
}

Dist selection_seminorm(const PseudometricSpace& space, const PolyhedralNorm& norm,
                        const std::vector<Vec>& values) {
  if (static_cast<int>(values.size()) != space.size())
    throw ValidationError("expected " + std::to_string(space.size()) +
                          " values, got " + std::to_string(values.size()));
  for (const Vec& v : values)
    if (static_cast<int>(v.size()) != norm.dim())
      throw ValidationError("selection value dimension does not match the norm");
  SupDist sup;
  for (int i = 0; i < space.size(); ++i)
    for (int j = i + 1; j < space.size(); ++j) {
      const Dist& dd = space.d(i, j);
      if (!dd.finite) continue;
      Vec diff = vsub(values[static_cast<size_t>(i)], values[static_cast<size_t>(j)]);
      if (dd.value == 0) {
        if (!is_zero_vec(diff)) sup.inf = true;
        continue;
      }
      sup.take(Rat(gauge(norm, diff) / dd.value));
    }
  return sup.done();
}

SelectionCheck check_selection(const SetValuedInstance& inst,
                               const std::vector<Vec>& values) {
  SelectionCheck out;
  out.lip = selection_seminorm(inst.space, inst.norm, values);
  for (int i = 0; i < inst.space.size(); ++i)
    if (!contains_point(inst.images[static_cast<size_t>(i)], values[static_cast<size_t>(i)])) {
      out.ok = false;
      out.detail = "the value at '" + inst.space.points[static_cast<size_t>(i)] +
                   "' lies outside its image";
      break;
    }
  return out;
}

std::optional<std::pair<Rat, Selection>> min_lipschitz(const SetValuedInstance& inst) {
  if (inst.space.size() == 0) throw ValidationError("the instance has no points");
  FeasibilitySystem fs = build_system(inst, all_points(inst), std::nullopt, -1);
  Vec obj(static_cast<size_t>(fs.sys.nvars), Rat(0));
  obj[static_cast<size_t>(fs.lambda_col)] = 1;
  LpResult res = lp_minimize(fs.sys, obj);
  if (res.status == LpStatus::infeasible) return std::nullopt;
  if (res.status != LpStatus::optimal)
    throw std::logic_error("lambda minimization cannot be unbounded");
  Selection sel;
  sel.values = unpack_values(fs, res.x);
  sel.lip = selection_seminorm(inst.space, inst.norm, sel.values);
  return std::make_pair(res.obj, std::move(sel));
}

std::optional<Selection> feasible_at(const SetValuedInstance& inst, const Rat& lambda) {
  if (inst.space.size() == 0) throw ValidationError("the instance has no points");
  require_lambda(lambda);
  FeasibilitySystem fs = build_system(inst, all_points(inst), lambda, -1);
  std::optional<Vec> point = lp_any_point(fs.sys);
  if (!point) return std::nullopt;
  Selection sel;
  sel.values = unpack_values(fs, *point);
  sel.lip = selection_seminorm(inst.space, inst.norm, sel.values);
  return sel;
}

std::optional<Polytope> gamma_set(const SetValuedInstance& inst, const Rat& lambda,
                                  int x, const std::vector<int>& subset, int cap) {
  require_lambda(lambda);
  require_point(inst, x, "point");
  for (int z : subset) require_point(inst, z, "subset point");
  std::vector<int> chosen = subset;
  chosen.push_back(x);
  FeasibilitySystem fs = build_system(inst, std::move(chosen), lambda, x);
  int block = fs.block_of_point(x);
  std::vector<int> keep(static_cast<size_t>(fs.d));
  for (int t = 0; t < fs.d; ++t) keep[static_cast<size_t>(t)] = block * fs.d + t;
  return project_system(fs.sys, keep, cap);
}

std::optional<Polytope> gamma_ell(const SetValuedInstance& inst, const Rat& lambda,
                                  int x, int ell, long cap_subsets, int cap_rows) {
  require_lambda(lambda);
  require_point(inst, x, "point");
  if (ell < 0) throw ValidationError("ell must be nonnegative");
  if (cap_subsets < 1) throw ValidationError("the subset cap must be positive");
  int n = inst.space.size();

  mpz_class kl;
  mpz_ui_pow_ui(kl.get_mpz_t(), static_cast<unsigned long>(inst.m + 2),
                static_cast<unsigned long>(ell));
  int t = kl < n ? static_cast<int>(kl.get_si()) : n;

  mpz_class count = count_combinations(n, t);
  if (count > cap_subsets)
    throw CapExceededError("gamma_ell needs " + count.get_str() +
                           " subset shadows, the cap is " + std::to_string(cap_subsets));

  std::vector<std::vector<int>> subsets;
  subsets.reserve(static_cast<size_t>(count.get_ui()));
  for_each_combination(n, t, [&](const std::vector<int>& s) {
    subsets.push_back(s);
    return true;
  });

  // Shadows are computed in parallel batches but folded strictly in
  // lexicographic subset order; canonical polytopes make the fold order
  // immaterial anyway.
  std::optional<Polytope> acc;
  bool first = true;
  int batch = std::max(worker_count() * 2, 8);
  for (size_t lo = 0; lo < subsets.size(); lo += static_cast<size_t>(batch)) {
    size_t hi = std::min(subsets.size(), lo + static_cast<size_t>(batch));
    auto shadows = parallel_map<std::optional<Polytope>>(
        static_cast<int>(hi - lo), [&](int i) {
          return gamma_set(inst, lambda, x, subsets[lo + static_cast<size_t>(i)],
                           cap_rows);
        });
    for (auto& sh : shadows) {
      if (!sh) return std::nullopt;
      if (first) {
        acc = std::move(sh);
        first = false;
      } else {
        acc = intersect(*acc, *sh);
        if (!acc) return std::nullopt;
      }
    }
  }
  return acc;
}

std::optional<Polytope> orbit(const SetValuedInstance& inst, const Rat& lambda,
                              int x, int cap) {
  require_lambda(lambda);
  require_point(inst, x, "point");
  FeasibilitySystem fs = build_system(inst, all_points(inst), lambda, x);
  int block = fs.block_of_point(x);
  std::vector<int> keep(static_cast<size_t>(fs.d));
  for (int t = 0; t < fs.d; ++t) keep[static_cast<size_t>(t)] = block * fs.d + t;
  return project_system(fs.sys, keep, cap);
}

std::optional<Polytope> tree_orbit(const SetValuedInstance& inst,
                                   const WeightedTree& shape,
                                   const std::vector<int>& w, int a,
                                   const Rat& lambda, int cap) {
  require_lambda(lambda);
  validate_tree(shape.nodes, shape.edges, /*allow_zero_lengths=*/true);
  int n = shape.size();
  if (static_cast<int>(w.size()) != n)
    throw ValidationError("expected " + std::to_string(n) + " node images, got " +
                          std::to_string(w.size()));
  for (int u = 0; u < n; ++u) require_point(inst, w[static_cast<size_t>(u)], "node image");
  if (a < 0 || a >= n) throw ValidationError("node index is outside the tree");
  for (const auto& e : shape.edges)
    if (w[static_cast<size_t>(e.a)] == w[static_cast<size_t>(e.b)])
      throw ValidationError("the node map sends adjacent nodes '" +
                            shape.nodes[static_cast<size_t>(e.a)] + "' and '" +
                            shape.nodes[static_cast<size_t>(e.b)] +
                            "' to the same point");

  // Pull the instance back onto the tree's path metric, each edge weighted
  // by the instance distance between its endpoint images. Path sums
  // satisfy the triangle inequality by construction, so the table needs no
  // re-validation.
  auto adj = shape.adjacency();
  std::vector<std::vector<Dist>> edge_w(static_cast<size_t>(n));
  for (int u = 0; u < n; ++u)
    edge_w[static_cast<size_t>(u)].assign(adj[static_cast<size_t>(u)].size(), Dist::zero());
  for (int u = 0; u < n; ++u)
    for (size_t idx = 0; idx < adj[static_cast<size_t>(u)].size(); ++idx) {
      int v = adj[static_cast<size_t>(u)][idx];
      edge_w[static_cast<size_t>(u)][idx] =
          inst.space.d(w[static_cast<size_t>(u)], w[static_cast<size_t>(v)]);
    }

  PseudometricSpace pulled;
  pulled.points = shape.nodes;
  pulled.mode = SpaceMode::pseudometric;
  pulled.dist.assign(static_cast<size_t>(n),
                     std::vector<Dist>(static_cast<size_t>(n), Dist::zero()));
  for (int root = 0; root < n; ++root) {
    std::vector<bool> seen(static_cast<size_t>(n), false);
    std::deque<int> queue{root};
    seen[static_cast<size_t>(root)] = true;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (size_t idx = 0; idx < adj[static_cast<size_t>(u)].size(); ++idx) {
        int v = adj[static_cast<size_t>(u)][idx];
        if (seen[static_cast<size_t>(v)]) continue;
        seen[static_cast<size_t>(v)] = true;
        pulled.dist[static_cast<size_t>(root)][static_cast<size_t>(v)] =
            pulled.dist[static_cast<size_t>(root)][static_cast<size_t>(u)] +
            edge_w[static_cast<size_t>(u)][idx];
        queue.push_back(v);
      }
    }
  }

  SetValuedInstance pulled_inst;
  pulled_inst.space = std::move(pulled);
  pulled_inst.norm = inst.norm;
  pulled_inst.m = inst.m;
  pulled_inst.images.reserve(static_cast<size_t>(n));
  for (int u = 0; u < n; ++u)
    pulled_inst.images.push_back(inst.images[static_cast<size_t>(w[static_cast<size_t>(u)])]);
  return orbit(pulled_inst, lambda, a, cap);
}

mpz_class SelectionConstants::k_ell(int ell) const {
  if (ell < 0) throw ValidationError("ell must be nonnegative");
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(m + 2),
                static_cast<unsigned long>(ell));
  return out;
}

int SelectionConstants::ell_of_label(int size) const {
  if (size < 0 || size > m)
    throw ValidationError("label size must lie in [0, m]");
  return 2 + 3 * (m - size);
}

SelectionConstants constants(int m, int dim_y) {
  if (m < 0) throw ValidationError("the dimension cap m must be nonnegative");
  if (dim_y < 1) throw ValidationError("the target dimension must be positive");
  SelectionConstants out;
  out.m = m;
  int e = std::min(m + 1, dim_y);
  mpz_ui_pow_ui(out.finiteness_number.get_mpz_t(), 2ul, static_cast<unsigned long>(e));
  out.ell_sharp = 2 + 3 * m;
  mpz_ui_pow_ui(out.k_sharp.get_mpz_t(), static_cast<unsigned long>(m + 2),
                static_cast<unsigned long>(out.ell_sharp + 1));
  return out;
}

}  // namespace lipsel
