#include "lipsel/whitney.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "lipsel/error.hpp"

namespace lipsel {

namespace {

mpz_class rat_floor(const Rat& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), mpq_numref(q.get_mpq_t()), mpq_denref(q.get_mpq_t()));
  return f;
}

Rat pow2(long k) {
  Rat r(1);
  if (k >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(k));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-k));
  }
  return r;
}

// Smallest k with 2^k >= q, for q > 0.
long ceil_log2(const Rat& q) {
  long k = 0;
  Rat p(1);
  while (p < q) {
    p *= 2;
    ++k;
  }
  Rat half = p / 2;
  while (half >= q) {
    p = half;
    half /= 2;
    --k;
  }
  return k;
}

// Largest k with 2^k <= q, for q > 0.
long floor_log2(const Rat& q) {
  long k = ceil_log2(q);
  return pow2(k) == q ? k : k - 1;
}

// Parent pointers and root distances of a tree, via breadth-first search.
struct RootPaths {
  std::vector<int> parent;
  std::vector<Rat> dist;
};

RootPaths root_paths(const WeightedTree& tree, int root) {
  int n = tree.size();
  std::vector<std::vector<std::pair<int, Rat>>> adj(static_cast<size_t>(n));
  for (const TreeEdge& e : tree.edges) {
    adj[static_cast<size_t>(e.a)].push_back({e.b, e.length});
    adj[static_cast<size_t>(e.b)].push_back({e.a, e.length});
  }
  RootPaths rp{std::vector<int>(static_cast<size_t>(n), -1),
               std::vector<Rat>(static_cast<size_t>(n), Rat(0))};
  std::vector<char> seen(static_cast<size_t>(n), 0);
  std::vector<int> queue{root};
  seen[static_cast<size_t>(root)] = 1;
  for (size_t h = 0; h < queue.size(); ++h) {
    int v = queue[h];
    for (const auto& [w, len] : adj[static_cast<size_t>(v)]) {
      if (seen[static_cast<size_t>(w)]) continue;
      seen[static_cast<size_t>(w)] = 1;
      rp.parent[static_cast<size_t>(w)] = v;
      rp.dist[static_cast<size_t>(w)] = rp.dist[static_cast<size_t>(v)] + len;
      queue.push_back(w);
    }
  }
  return rp;
}

// Running maximum that can be pushed to infinity by a zero-distance pair.
struct SupDist {
  bool inf = false;
  Rat val = 0;

  void take(const Rat& v) {
    if (!inf && v > val) val = v;
  }
  Dist done() const { return inf ? Dist::infinity() : Dist::of(val); }
};

}  // namespace

Covering nagata_cover_metric_tree(const WeightedTree& tree, const Rat& scale) {
  if (scale <= 0) throw ValidationError("covering scale must be positive");
  validate_tree(tree.nodes, tree.edges, true);
  int n = tree.size();
  int root = tree.root.value_or(0);
  RootPaths rp = root_paths(tree, root);

  // Distances from the root, rescaled so the construction runs at
  // lengthscale 4 regardless of the requested scale.
  Rat factor = Rat(4) / scale;
  std::vector<Rat> pos(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) pos[static_cast<size_t>(i)] = rp.dist[static_cast<size_t>(i)] * factor;

  std::map<std::pair<int, int>, std::vector<int>> groups;  // (parity, ancestor) -> members
  for (int x = 0; x < n; ++x) {
    mpz_class fl = rat_floor(pos[static_cast<size_t>(x)]);
    Rat threshold = Rat(fl) - 1;
    std::vector<int> path;  // root path of x, leaf first
    for (int v = x; v != -1; v = rp.parent[static_cast<size_t>(v)]) path.push_back(v);
    int anc = x;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      if (pos[static_cast<size_t>(*it)] > threshold) {
        anc = *it;
        break;
      }
    }
    int parity = mpz_odd_p(fl.get_mpz_t()) ? 1 : 0;
    groups[{parity, anc}].push_back(x);
  }

  Covering cover{scale, {}};
  for (auto& [key, members] : groups) cover.parts.push_back({std::move(members), key});
  return cover;
}

CoverReport verify_nagata_cover(const PseudometricSpace& space, const Covering& cover,
                                const Rat& c, int cap) {
  int n = space.size();
  if (cover.scale <= 0) throw ValidationError("covering scale must be positive");
  if (c <= 0) throw ValidationError("ball radius factor must be positive");
  if (cap < 0) throw ValidationError("part overlap bound must be nonnegative");

  std::vector<char> seen(static_cast<size_t>(n), 0);
  for (size_t k = 0; k < cover.parts.size(); ++k) {
    const CoveringPart& part = cover.parts[k];
    if (part.members.empty())
      throw ValidationError("covering part " + std::to_string(k) + " is empty");
    for (int idx : part.members) {
      if (idx < 0 || idx >= n)
        throw ValidationError("covering part " + std::to_string(k) +
                              " references a point outside the space");
      seen[static_cast<size_t>(idx)] = 1;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!seen[static_cast<size_t>(i)])
      throw ValidationError("covering misses point '" + space.points[static_cast<size_t>(i)] + "'");
  }

  for (size_t k = 0; k < cover.parts.size(); ++k) {
    const std::vector<int>& m = cover.parts[k].members;
    for (size_t i = 0; i < m.size(); ++i) {
      for (size_t j = i + 1; j < m.size(); ++j) {
        const Dist& d = space.d(m[i], m[j]);
        if (!d.finite || d.value > cover.scale) {
          return {false, "part " + std::to_string(k) + " has diameter at least " +
                             dist_to_string(d) + " between '" +
                             space.points[static_cast<size_t>(m[i])] + "' and '" +
                             space.points[static_cast<size_t>(m[j])] + "', scale is " +
                             rat_to_string(cover.scale)};
        }
      }
    }
  }

  Rat radius = c * cover.scale;
  for (int x = 0; x < n; ++x) {
    int met = 0;
    for (const CoveringPart& part : cover.parts) {
      for (int m : part.members) {
        const Dist& d = space.d(x, m);
        if (d.finite && d.value <= radius) {
          ++met;
          break;
        }
      }
    }
    if (met > cap + 1) {
      return {false, "the ball of radius " + rat_to_string(radius) + " about '" +
                         space.points[static_cast<size_t>(x)] + "' meets " + std::to_string(met) +
                         " parts, at most " + std::to_string(cap + 1) + " allowed"};
    }
  }
  return {true, ""};
}

CoverSupplier tree_cover_supplier(WeightedTree tree) {
  return [t = std::move(tree)](const Rat& s) { return nagata_cover_metric_tree(t, s); };
}

WhitneyPartition whitney_partition(const PseudometricSpace& space,
                                   const std::vector<Rat>& lengthscales, const Rat& c_ng,
                                   int cap_ng, const Rat& a, const CoverSupplier& covers,
                                   long big_a) {
  int n = space.size();
  if (space.mode != SpaceMode::pseudometric)
    throw ValidationError("whitney partition requires a pseudometric space");
  if (n == 0) throw ValidationError("space has no points");
  if (static_cast<int>(lengthscales.size()) != n)
    throw ValidationError("lengthscale table has " + std::to_string(lengthscales.size()) +
                          " entries for a space of " + std::to_string(n) + " points");
  for (int i = 0; i < n; ++i) {
    if (lengthscales[static_cast<size_t>(i)] <= 0)
      throw ValidationError("lengthscale at '" + space.points[static_cast<size_t>(i)] +
                            "' must be positive");
  }
  if (c_ng <= 0 || c_ng > 1) throw ValidationError("c_NG must lie in (0, 1]");
  if (cap_ng < 0) throw ValidationError("C_NG must be nonnegative");
  if (a <= 0) throw ValidationError("support factor a must be positive");
  if (big_a < 2 || big_a > 65536) throw ValidationError("A must lie in [2, 65536]");

  const std::vector<Rat>& r = lengthscales;

  // Worst lengthscale ratio among pairs close enough to constrain each other.
  Rat c_ls = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Dist& d = space.d(i, j);
      if (!d.finite) continue;
      Rat reach = r[static_cast<size_t>(i)] + r[static_cast<size_t>(j)];
      if (d.value > reach) continue;
      Rat ratio = (r[static_cast<size_t>(i)] > r[static_cast<size_t>(j)])
                      ? Rat(r[static_cast<size_t>(i)] / r[static_cast<size_t>(j)])
                      : Rat(r[static_cast<size_t>(j)] / r[static_cast<size_t>(i)]);
      if (ratio > c_ls) c_ls = ratio;
    }
  }

  Rat min_r = r[0], max_r = r[0];
  for (const Rat& v : r) {
    if (v < min_r) min_r = v;
    if (v > max_r) max_r = v;
  }

  std::map<long, Covering> cache;  // covering per power-of-two exponent
  std::string last_failure;

  for (long aa = big_a; aa <= 65536; aa *= 2) {
    Rat ar(aa);
    Rat ar3 = ar * ar * ar;
    Rat lo = min_r / ar3;
    Rat hi = max_r / ar;
    long k_lo = ceil_log2(lo);
    long k_hi = floor_log2(hi);

    struct Cand {
      int rep;
      std::vector<Rat> theta;
    };
    std::vector<Cand> cands;

    for (long k = k_lo; k <= k_hi; ++k) {
      Rat s = pow2(k);
      auto it = cache.find(k);
      if (it == cache.end()) {
        Covering cov = covers(s);
        if (cov.scale != s)
          throw ValidationError("cover supplier returned scale " + rat_to_string(cov.scale) +
                                " when asked for " + rat_to_string(s));
        CoverReport check = verify_nagata_cover(space, cov, c_ng, cap_ng);
        if (!check.ok)
          throw ValidationError("cover supplier produced an invalid covering at scale " +
                                rat_to_string(s) + ": " + check.detail);
        it = cache.emplace(k, std::move(cov)).first;
      }
      for (const CoveringPart& part : it->second.parts) {
        int rep = part.members[0];
        for (int m : part.members) {
          if (space.points[static_cast<size_t>(m)] < space.points[static_cast<size_t>(rep)]) rep = m;
        }
        // Admit the part only when this scale sits in the representative's
        // window A^-3 * r <= s <= A^-1 * r.
        if (s * ar3 < r[static_cast<size_t>(rep)] || s * ar > r[static_cast<size_t>(rep)]) continue;

        Cand cand{rep, std::vector<Rat>(static_cast<size_t>(n), Rat(0))};
        bool nonzero = false;
        for (int x = 0; x < n; ++x) {
          std::optional<Rat> dmin;
          for (int m : part.members) {
            const Dist& d = space.d(x, m);
            if (!d.finite) continue;
            if (!dmin || d.value < *dmin) dmin = d.value;
          }
          if (!dmin) continue;
          Rat t = 1 - Rat(256) * *dmin / (c_ng * s);
          if (t > 0) {
            cand.theta[static_cast<size_t>(x)] = t;
            nonzero = true;
          }
        }
        if (nonzero) cands.push_back(std::move(cand));
      }
    }

    // Every point must lie inside an admitted part (bump exactly 1 there);
    // this makes the per-point totals at least 1.
    bool covered = true;
    for (int x = 0; x < n && covered; ++x) {
      bool found = false;
      for (const Cand& cand : cands) {
        if (cand.theta[static_cast<size_t>(x)] == 1) {
          found = true;
          break;
        }
      }
      if (!found) {
        covered = false;
        last_failure = "point '" + space.points[static_cast<size_t>(x)] +
                       "' lies in no admitted covering part with A = " + std::to_string(aa);
      }
    }
    if (!covered) continue;

    std::vector<Rat> total(static_cast<size_t>(n), Rat(0));
    for (const Cand& cand : cands) {
      for (int x = 0; x < n; ++x) total[static_cast<size_t>(x)] += cand.theta[static_cast<size_t>(x)];
    }

    std::map<int, std::vector<Rat>> by_center;
    for (const Cand& cand : cands) {
      auto [pos, inserted] =
          by_center.try_emplace(cand.rep, std::vector<Rat>(static_cast<size_t>(n), Rat(0)));
      for (int x = 0; x < n; ++x) {
        const Rat& t = cand.theta[static_cast<size_t>(x)];
        if (t != 0) pos->second[static_cast<size_t>(x)] += t / total[static_cast<size_t>(x)];
      }
    }

    bool supported = true;
    for (const auto& [center, vals] : by_center) {
      Rat radius = a * r[static_cast<size_t>(center)];
      for (int x = 0; x < n; ++x) {
        if (vals[static_cast<size_t>(x)] == 0) continue;
        const Dist& d = space.d(x, center);
        if (!d.finite || d.value >= radius) {
          supported = false;
          last_failure = "the entry centered at '" + space.points[static_cast<size_t>(center)] +
                         "' is nonzero at '" + space.points[static_cast<size_t>(x)] +
                         "', outside its support ball, with A = " + std::to_string(aa);
          break;
        }
      }
      if (!supported) break;
    }
    if (!supported) continue;

    WhitneyPartition out;
    for (auto& [center, vals] : by_center)
      out.entries.push_back({center, r[static_cast<size_t>(center)], std::move(vals)});
    out.c_ng = c_ng;
    out.cap_ng = cap_ng;
    out.c_ls = c_ls;
    out.a = a;
    out.big_a = Rat(aa);

    int mult = 0;
    for (int x = 0; x < n; ++x) {
      int cnt = 0;
      for (const WhitneyEntry& e : out.entries) {
        if (e.values[static_cast<size_t>(x)] != 0) ++cnt;
      }
      mult = std::max(mult, cnt);
    }
    out.multiplicity = mult;

    Rat lip = 0;
    for (const WhitneyEntry& e : out.entries) {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const Dist& d = space.d(i, j);
          if (!d.finite) continue;
          Rat diff = e.values[static_cast<size_t>(i)] - e.values[static_cast<size_t>(j)];
          if (d.value == 0) {
            // Bumps are functions of distances only, so zero-distance twins
            // always receive equal values.
            if (diff != 0)
              throw std::logic_error("partition values differ across a zero-distance pair");
            continue;
          }
          Rat cand = abs(diff) * e.lengthscale / d.value;
          if (cand > lip) lip = cand;
        }
      }
    }
    out.lip_factor = lip;
    return out;
  }

  throw ValidationError("whitney partition failed for every A up to 65536: " + last_failure);
}

PatchReport patch_selections(const PseudometricSpace& space, const WhitneyPartition& partition,
                             const std::vector<LocalSelection>& locals,
                             const PolyhedralNorm& norm) {
  int n = space.size();
  if (space.mode != SpaceMode::pseudometric)
    throw ValidationError("patching requires a pseudometric space");
  size_t ne = partition.entries.size();
  if (ne == 0) throw ValidationError("partition has no entries");
  for (const WhitneyEntry& e : partition.entries) {
    if (e.center < 0 || e.center >= n || static_cast<int>(e.values.size()) != n)
      throw ValidationError("partition does not match the space");
    if (e.lengthscale <= 0) throw ValidationError("partition lengthscales must be positive");
  }

  // The support factor is pinned to the consistency constant; the blended
  // map is Lipschitz only under that smallness assumption.
  Rat want = Rat(1) / (4 * partition.c_ls);
  if (partition.a != want)
    throw ValidationError("patching requires a = 1/(4*C_LS); the partition carries a = " +
                          rat_to_string(partition.a) + " with C_LS = " +
                          rat_to_string(partition.c_ls));

  for (int x = 0; x < n; ++x) {
    Rat sum = 0;
    for (const WhitneyEntry& e : partition.entries) {
      const Rat& v = e.values[static_cast<size_t>(x)];
      if (v < 0)
        throw ValidationError("partition value at '" + space.points[static_cast<size_t>(x)] +
                              "' is negative");
      sum += v;
    }
    if (sum != 1)
      throw ValidationError("partition values at '" + space.points[static_cast<size_t>(x)] +
                            "' sum to " + rat_to_string(sum) + ", expected 1");
  }

  if (locals.size() != ne)
    throw ValidationError("expected " + std::to_string(ne) + " local selections, got " +
                          std::to_string(locals.size()));
  int dim = norm.dim();
  for (size_t v = 0; v < ne; ++v) {
    const LocalSelection& loc = locals[v];
    if (static_cast<int>(loc.anchor.size()) != dim)
      throw ValidationError("anchor dimension mismatch");
    if (static_cast<int>(loc.values.size()) != n)
      throw ValidationError("local selection table does not match the space");
    for (const auto& val : loc.values) {
      if (val && static_cast<int>(val->size()) != dim)
        throw ValidationError("local selection value dimension mismatch");
    }
  }
  for (size_t v = 0; v < ne; ++v) {
    const WhitneyEntry& e = partition.entries[v];
    for (int x = 0; x < n; ++x) {
      if (e.values[static_cast<size_t>(x)] != 0 && !locals[v].values[static_cast<size_t>(x)])
        throw ValidationError("the local selection centered at '" +
                              space.points[static_cast<size_t>(e.center)] +
                              "' is missing point '" + space.points[static_cast<size_t>(x)] + "'");
    }
  }

  PatchReport rep;
  rep.values.assign(static_cast<size_t>(n), Vec(static_cast<size_t>(dim), Rat(0)));
  for (int x = 0; x < n; ++x) {
    for (size_t v = 0; v < ne; ++v) {
      const Rat& w = partition.entries[v].values[static_cast<size_t>(x)];
      if (w == 0) continue;
      rep.values[static_cast<size_t>(x)] = vadd(
          rep.values[static_cast<size_t>(x)], vscale(*locals[v].values[static_cast<size_t>(x)], w));
    }
  }

  SupDist semi;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Dist& d = space.d(i, j);
      if (!d.finite) continue;
      Vec diff = vsub(rep.values[static_cast<size_t>(i)], rep.values[static_cast<size_t>(j)]);
      if (d.value == 0) {
        if (!is_zero_vec(diff)) semi.inf = true;
        continue;
      }
      Rat g = gauge(norm, diff);
      Rat q = g / d.value;
      semi.take(q);
    }
  }
  rep.seminorm = semi.done();

  SupDist wh;
  for (const WhitneyEntry& e : partition.entries) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Dist& d = space.d(i, j);
        if (!d.finite) continue;
        Rat diff = e.values[static_cast<size_t>(i)] - e.values[static_cast<size_t>(j)];
        Rat num = abs(diff);
        if (d.value == 0) {
          if (num != 0) wh.inf = true;
          continue;
        }
        Rat q = num * e.lengthscale / d.value;
        wh.take(q);
      }
    }
  }
  rep.partition_lip = wh.done();

  Rat eta(0);
  for (size_t v = 0; v < ne; ++v) {
    for (size_t w = v + 1; w < ne; ++w) {
      const Dist& d = space.d(partition.entries[v].center, partition.entries[w].center);
      if (!d.finite) continue;
      Vec dv = vsub(locals[v].anchor, locals[w].anchor);
      Rat g = gauge(norm, dv);
      Rat den = partition.entries[v].lengthscale + partition.entries[w].lengthscale + d.value;
      Rat q = g / den;
      if (q > eta) eta = q;
    }
  }
  rep.anchor_consistency = eta;

  Rat agr(0);
  SupDist lip;
  for (size_t v = 0; v < ne; ++v) {
    const WhitneyEntry& e = partition.entries[v];
    std::vector<int> ball;  // defined points of the local within B(center, r)
    for (int x = 0; x < n; ++x) {
      const Dist& d = space.d(x, e.center);
      if (locals[v].values[static_cast<size_t>(x)] && d.finite && d.value <= e.lengthscale)
        ball.push_back(x);
    }
    for (int x : ball) {
      Vec dv = vsub(*locals[v].values[static_cast<size_t>(x)], locals[v].anchor);
      Rat g = gauge(norm, dv);
      Rat q = g / e.lengthscale;
      if (q > agr) agr = q;
    }
    for (size_t i = 0; i < ball.size(); ++i) {
      for (size_t j = i + 1; j < ball.size(); ++j) {
        const Dist& d = space.d(ball[i], ball[j]);
        if (!d.finite) continue;
        Vec dv = vsub(*locals[v].values[static_cast<size_t>(ball[i])],
                      *locals[v].values[static_cast<size_t>(ball[j])]);
        if (d.value == 0) {
          if (!is_zero_vec(dv)) lip.inf = true;
          continue;
        }
        Rat g = gauge(norm, dv);
        Rat q = g / d.value;
        lip.take(q);
      }
    }
  }
  rep.agreement = agr;
  rep.local_lip = lip.done();

  int mult = 0;
  for (int x = 0; x < n; ++x) {
    int cnt = 0;
    for (const WhitneyEntry& e : partition.entries) {
      if (e.values[static_cast<size_t>(x)] != 0) ++cnt;
    }
    mult = std::max(mult, cnt);
  }
  rep.multiplicity = mult;
  return rep;
}

}  // namespace lipsel
