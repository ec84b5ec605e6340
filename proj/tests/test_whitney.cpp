#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lipsel/error.hpp"
#include "lipsel/geometry.hpp"
#include "lipsel/metric.hpp"
#include "lipsel/whitney.hpp"

using namespace lipsel;

namespace {

Rat fr(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Path v0 - v1 - ... with unit edges. Keep n <= 10 so label order matches
// index order.
WeightedTree unit_path(int n) {
  std::vector<std::string> nodes;
  std::vector<TreeEdge> edges;
  for (int i = 0; i < n; ++i) nodes.push_back("v" + std::to_string(i));
  for (int i = 1; i < n; ++i) edges.push_back({i - 1, i, Rat(1)});
  return validate_tree(std::move(nodes), std::move(edges));
}

WeightedTree rnd_tree(std::mt19937_64& g, int n, bool with_zero_edge = false) {
  std::vector<std::string> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back("n" + std::to_string(i));
  std::vector<TreeEdge> edges;
  for (int i = 1; i < n; ++i) {
    int parent = static_cast<int>(g() % static_cast<unsigned long>(i));
    Rat len = Rat(static_cast<long>(1 + g() % 8)) / 4;
    if (with_zero_edge && i == 1) len = 0;
    edges.push_back({parent, i, len});
  }
  return validate_tree(std::move(nodes), std::move(edges), with_zero_edge);
}

// Diameter and ball conditions checked from scratch, without going through
// verify_nagata_cover.
bool cover_ok_oracle(const PseudometricSpace& space, const Covering& cover, const Rat& c,
                     int cap) {
  for (const CoveringPart& part : cover.parts) {
    for (int i : part.members) {
      for (int j : part.members) {
        const Dist& d = space.d(i, j);
        if (!d.finite || d.value > cover.scale) return false;
      }
    }
  }
  Rat radius = c * cover.scale;
  for (int x = 0; x < space.size(); ++x) {
    int met = 0;
    for (const CoveringPart& part : cover.parts) {
      bool meets = false;
      for (int m : part.members) {
        const Dist& d = space.d(x, m);
        if (d.finite && d.value <= radius) meets = true;
      }
      if (meets) ++met;
    }
    if (met > cap + 1) return false;
  }
  return true;
}

// Three points on a path: b sits just below the unit radius around a and c
// just above it, so the scale-4 tree cover splits them across parities and
// the bumps genuinely overlap.
WeightedTree overlap_path() {
  std::vector<std::string> nodes{"a", "b", "c"};
  std::vector<TreeEdge> edges{{0, 1, fr(4095, 4096)}, {1, 2, fr(1, 2048)}};
  return validate_tree(std::move(nodes), std::move(edges));
}

}  // namespace

TEST_CASE("tree cover on a single node") {
  WeightedTree t = validate_tree({"only"}, {});
  Covering cover = nagata_cover_metric_tree(t, Rat(1));
  REQUIRE(cover.parts.size() == 1);
  CHECK(cover.parts[0].members == std::vector<int>{0});
  CHECK(cover.parts[0].label == std::pair<int, int>{0, 0});

  PseudometricSpace space = tree_metric(t);
  CHECK(verify_nagata_cover(space, cover, fr(1, 16), 1).ok);

  CHECK_THROWS_AS(nagata_cover_metric_tree(t, Rat(0)), ValidationError);
  CHECK_THROWS_AS(nagata_cover_metric_tree(t, Rat(-2)), ValidationError);
}

TEST_CASE("tree cover on the unit path") {
  WeightedTree t = unit_path(9);
  PseudometricSpace space = tree_metric(t);

  // At scale 4 the rescaled node positions are the integers 0..8, so every
  // node is its own distinguished ancestor and the parts are singletons.
  Covering c4 = nagata_cover_metric_tree(t, Rat(4));
  CHECK(c4.parts.size() == 9);
  for (const CoveringPart& p : c4.parts) CHECK(p.members.size() == 1);
  CHECK(verify_nagata_cover(space, c4, fr(1, 16), 1).ok);

  // At scale 8 the positions are n/2 and consecutive nodes pair up.
  Covering c8 = nagata_cover_metric_tree(t, Rat(8));
  REQUIRE(c8.parts.size() == 5);
  CHECK(c8.parts[0].members == std::vector<int>{0, 1});
  CHECK(c8.parts[0].label == std::pair<int, int>{0, 0});
  CHECK(c8.parts[1].members == std::vector<int>{4, 5});
  CHECK(c8.parts[1].label == std::pair<int, int>{0, 3});
  CHECK(c8.parts[2].members == std::vector<int>{8});
  CHECK(c8.parts[2].label == std::pair<int, int>{0, 7});
  CHECK(c8.parts[3].members == std::vector<int>{2, 3});
  CHECK(c8.parts[3].label == std::pair<int, int>{1, 1});
  CHECK(c8.parts[4].members == std::vector<int>{6, 7});
  CHECK(c8.parts[4].label == std::pair<int, int>{1, 5});
  CHECK(verify_nagata_cover(space, c8, fr(1, 16), 1).ok);
}

TEST_CASE("tree cover on random trees") {
  std::mt19937_64 g(20240415);
  std::vector<Rat> scales{fr(1, 2), Rat(1), Rat(2), Rat(3)};
  for (int iter = 0; iter < 10; ++iter) {
    int n = 2 + static_cast<int>(g() % 14);
    WeightedTree t = rnd_tree(g, n, iter % 4 == 3);
    PseudometricSpace space = tree_metric(t);
    for (const Rat& s : scales) {
      Covering cover = nagata_cover_metric_tree(t, s);

      // The parts partition the node set.
      std::vector<int> owner(static_cast<size_t>(n), -1);
      for (size_t k = 0; k < cover.parts.size(); ++k) {
        for (int m : cover.parts[k].members) {
          CHECK(owner[static_cast<size_t>(m)] == -1);
          owner[static_cast<size_t>(m)] = static_cast<int>(k);
        }
      }
      for (int x = 0; x < n; ++x) CHECK(owner[static_cast<size_t>(x)] != -1);

      CHECK(cover_ok_oracle(space, cover, fr(1, 16), 1));
      CoverReport rep = verify_nagata_cover(space, cover, fr(1, 16), 1);
      CHECK(rep.ok);
      CHECK(rep.detail.empty());
    }
  }
}

TEST_CASE("cover verification reports violations") {
  // Uniform space, singleton parts: the ball condition flips with c.
  std::vector<std::string> pts{"p0", "p1", "p2", "p3"};
  std::vector<std::vector<Dist>> table(4, std::vector<Dist>(4, Dist::of(1)));
  for (int i = 0; i < 4; ++i) table[static_cast<size_t>(i)][static_cast<size_t>(i)] = Dist::zero();
  PseudometricSpace uniform = validate_space(pts, table, SpaceMode::pseudometric);
  Covering singletons{Rat(1), {}};
  for (int i = 0; i < 4; ++i) singletons.parts.push_back({{i}, std::nullopt});

  CHECK(verify_nagata_cover(uniform, singletons, fr(1, 16), 0).ok);
  CoverReport crowded = verify_nagata_cover(uniform, singletons, Rat(2), 1);
  CHECK_FALSE(crowded.ok);
  CHECK(crowded.detail.find("meets 4 parts") != std::string::npos);
  CHECK(verify_nagata_cover(uniform, singletons, Rat(2), 3).ok);

  // A merged part that exceeds the diameter bound.
  WeightedTree path = unit_path(3);
  PseudometricSpace pspace = tree_metric(path);
  Covering merged{Rat(1), {{{0, 2}, std::nullopt}, {{1}, std::nullopt}}};
  CoverReport wide = verify_nagata_cover(pspace, merged, fr(1, 16), 1);
  CHECK_FALSE(wide.ok);
  CHECK(wide.detail.find("diameter") != std::string::npos);

  // An infinite distance inside a part is a diameter violation too.
  PseudometricSpace split = validate_space(
      {"u", "w"}, {{Dist::zero(), Dist::infinity()}, {Dist::infinity(), Dist::zero()}},
      SpaceMode::pseudometric);
  Covering lump{Rat(5), {{{0, 1}, std::nullopt}}};
  CoverReport inf = verify_nagata_cover(split, lump, fr(1, 16), 1);
  CHECK_FALSE(inf.ok);
  CHECK(inf.detail.find("inf") != std::string::npos);

  // Mismatched point sets are errors, not reports.
  Covering outside{Rat(1), {{{0, 7}, std::nullopt}}};
  CHECK_THROWS_AS(verify_nagata_cover(pspace, outside, fr(1, 16), 1), ValidationError);
  Covering missing{Rat(1), {{{0, 1}, std::nullopt}}};
  CHECK_THROWS_WITH_AS(verify_nagata_cover(pspace, missing, fr(1, 16), 1),
                       "covering misses point 'v2'", ValidationError);
  Covering empty_part{Rat(1), {{{}, std::nullopt}}};
  CHECK_THROWS_AS(verify_nagata_cover(pspace, empty_part, fr(1, 16), 1), ValidationError);
}

TEST_CASE("whitney partition on a single point") {
  WeightedTree t = validate_tree({"only"}, {});
  PseudometricSpace space = tree_metric(t);
  WhitneyPartition part = whitney_partition(space, {Rat(3)}, fr(1, 16), 1, fr(1, 4),
                                            tree_cover_supplier(t), 64);
  REQUIRE(part.entries.size() == 1);
  CHECK(part.entries[0].center == 0);
  CHECK(part.entries[0].lengthscale == Rat(3));
  CHECK(part.entries[0].values == std::vector<Rat>{Rat(1)});
  CHECK(part.multiplicity == 1);
  CHECK(part.c_ls == Rat(1));
  CHECK(part.big_a == Rat(64));
  CHECK(part.lip_factor == Rat(0));
}

TEST_CASE("whitney partition on the unit path") {
  WeightedTree t = unit_path(8);
  PseudometricSpace space = tree_metric(t);
  std::vector<Rat> r(8, Rat(1));
  WhitneyPartition part =
      whitney_partition(space, r, fr(1, 16), 1, fr(1, 4), tree_cover_supplier(t), 32);

  // Unit spacing dwarfs every admitted scale, so the entries degenerate to
  // indicators, one per node.
  REQUIRE(part.entries.size() == 8);
  for (int v = 0; v < 8; ++v) {
    const WhitneyEntry& e = part.entries[static_cast<size_t>(v)];
    CHECK(e.center == v);
    for (int x = 0; x < 8; ++x)
      CHECK(e.values[static_cast<size_t>(x)] == (x == v ? Rat(1) : Rat(0)));
  }
  for (int x = 0; x < 8; ++x) {
    Rat sum = 0;
    for (const WhitneyEntry& e : part.entries) sum += e.values[static_cast<size_t>(x)];
    CHECK(sum == Rat(1));
  }
  CHECK(part.big_a == Rat(32));
  CHECK(part.multiplicity == 1);
  CHECK(part.lip_factor == Rat(1));
}

TEST_CASE("whitney partition with fractional overlap") {
  WeightedTree t = overlap_path();
  PseudometricSpace space = tree_metric(t);
  std::vector<Rat> r(3, Rat(256));
  WhitneyPartition part =
      whitney_partition(space, r, fr(1, 16), 1, fr(1, 4), tree_cover_supplier(t), 64);

  // Thirteen scales 2^-10..4 are admitted; only scale 4 mixes the bumps.
  REQUIRE(part.entries.size() == 3);
  CHECK(part.entries[0].center == 0);
  CHECK(part.entries[1].center == 1);
  CHECK(part.entries[2].center == 2);
  CHECK(part.entries[0].values == std::vector<Rat>{Rat(1), fr(2, 27), fr(1, 27)});
  CHECK(part.entries[1].values == std::vector<Rat>{Rat(0), fr(8, 9), Rat(0)});
  CHECK(part.entries[2].values == std::vector<Rat>{Rat(0), fr(1, 27), fr(26, 27)});

  CHECK(part.big_a == Rat(64));
  CHECK(part.c_ls == Rat(1));
  CHECK(part.multiplicity == 3);

  // Worst slope: the third entry jumps by 25/27 across the short edge.
  CHECK(part.lip_factor == fr(13107200, 27));
  Rat worst = 0;
  for (const WhitneyEntry& e : part.entries) {
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        const Dist& d = space.d(i, j);
        Rat diff = e.values[static_cast<size_t>(i)] - e.values[static_cast<size_t>(j)];
        Rat cand = abs(diff) * e.lengthscale / d.value;
        if (cand > worst) worst = cand;
      }
    }
  }
  CHECK(part.lip_factor == worst);
}

TEST_CASE("whitney partition escalates A when supports leak") {
  WeightedTree t = overlap_path();
  PseudometricSpace space = tree_metric(t);
  std::vector<Rat> r(3, Rat(256));

  // With a = 1/256 the support balls have radius exactly 1, and at A = 64
  // the scale-4 bump centered at 'a' reaches 'c' at distance 4097/4096.
  // Doubling A shrinks the admitted scales to at most 2, where the parts
  // are singletons.
  WhitneyPartition part =
      whitney_partition(space, r, fr(1, 16), 1, fr(1, 256), tree_cover_supplier(t), 64);
  CHECK(part.big_a == Rat(128));
  CHECK(part.multiplicity == 1);
  REQUIRE(part.entries.size() == 3);
  for (int v = 0; v < 3; ++v)
    CHECK(part.entries[static_cast<size_t>(v)].values[static_cast<size_t>(v)] == Rat(1));
}

TEST_CASE("whitney partition input validation") {
  WeightedTree t = unit_path(2);
  PseudometricSpace space = tree_metric(t);
  CoverSupplier covers = tree_cover_supplier(t);
  std::vector<Rat> r(2, Rat(1));

  CHECK_THROWS_AS(whitney_partition(space, {Rat(1)}, fr(1, 16), 1, fr(1, 4), covers, 64),
                  ValidationError);
  CHECK_THROWS_AS(whitney_partition(space, {Rat(1), Rat(0)}, fr(1, 16), 1, fr(1, 4), covers, 64),
                  ValidationError);
  CHECK_THROWS_AS(whitney_partition(space, r, Rat(0), 1, fr(1, 4), covers, 64), ValidationError);
  CHECK_THROWS_AS(whitney_partition(space, r, Rat(2), 1, fr(1, 4), covers, 64), ValidationError);
  CHECK_THROWS_AS(whitney_partition(space, r, fr(1, 16), -1, fr(1, 4), covers, 64),
                  ValidationError);
  CHECK_THROWS_AS(whitney_partition(space, r, fr(1, 16), 1, Rat(0), covers, 64), ValidationError);
  CHECK_THROWS_AS(whitney_partition(space, r, fr(1, 16), 1, fr(1, 4), covers, 1), ValidationError);
  CHECK_THROWS_AS(whitney_partition(space, r, fr(1, 16), 1, fr(1, 4), covers, 131072),
                  ValidationError);

  PseudometricSpace dis = space;
  dis.mode = SpaceMode::dissimilarity;
  CHECK_THROWS_AS(whitney_partition(dis, r, fr(1, 16), 1, fr(1, 4), covers, 64), ValidationError);

  // Suppliers that return the wrong scale or an invalid covering.
  CoverSupplier stuck = [](const Rat&) {
    return Covering{Rat(1), {{{0}, std::nullopt}, {{1}, std::nullopt}}};
  };
  CHECK_THROWS_AS(whitney_partition(space, r, fr(1, 16), 1, fr(1, 4), stuck, 64), ValidationError);
  CoverSupplier partial = [](const Rat& s) { return Covering{s, {{{0}, std::nullopt}}}; };
  CHECK_THROWS_AS(whitney_partition(space, r, fr(1, 16), 1, fr(1, 4), partial, 64),
                  ValidationError);
}

TEST_CASE("whitney invariants on random trees") {
  std::mt19937_64 g(20240416);
  for (int iter = 0; iter < 6; ++iter) {
    int n = 2 + static_cast<int>(g() % 7);
    WeightedTree t = rnd_tree(g, n);
    PseudometricSpace space = tree_metric(t);
    std::vector<Rat> r;
    for (int i = 0; i < n; ++i) r.push_back(Rat(2 + static_cast<long>(g() % 3)) / 2);

    // The support factor the patching step will demand.
    Rat c_ls(1);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Dist& d = space.d(i, j);
        Rat reach = r[static_cast<size_t>(i)] + r[static_cast<size_t>(j)];
        if (!d.finite || d.value > reach) continue;
        Rat ratio = (r[static_cast<size_t>(i)] > r[static_cast<size_t>(j)])
                        ? Rat(r[static_cast<size_t>(i)] / r[static_cast<size_t>(j)])
                        : Rat(r[static_cast<size_t>(j)] / r[static_cast<size_t>(i)]);
        if (ratio > c_ls) c_ls = ratio;
      }
    }
    Rat a = Rat(1) / (4 * c_ls);

    WhitneyPartition part =
        whitney_partition(space, r, fr(1, 16), 1, a, tree_cover_supplier(t), 64);
    CHECK(part.c_ls == c_ls);
    CHECK(part.big_a == Rat(64));

    for (size_t e = 1; e < part.entries.size(); ++e)
      CHECK(part.entries[e - 1].center < part.entries[e].center);

    int mult = 0;
    for (int x = 0; x < n; ++x) {
      Rat sum = 0;
      int cnt = 0;
      for (const WhitneyEntry& e : part.entries) {
        const Rat& v = e.values[static_cast<size_t>(x)];
        CHECK(v >= 0);
        sum += v;
        if (v != 0) {
          ++cnt;
          const Dist& d = space.d(x, e.center);
          Rat radius = a * e.lengthscale;
          CHECK(d.finite);
          CHECK(d.value < radius);
        }
      }
      CHECK(sum == Rat(1));
      mult = std::max(mult, cnt);
    }
    CHECK(part.multiplicity == mult);

    Rat worst = 0;
    for (const WhitneyEntry& e : part.entries) {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const Dist& d = space.d(i, j);
          if (!d.finite || d.value == 0) continue;
          Rat diff = e.values[static_cast<size_t>(i)] - e.values[static_cast<size_t>(j)];
          Rat cand = abs(diff) * e.lengthscale / d.value;
          if (cand > worst) worst = cand;
        }
      }
    }
    CHECK(part.lip_factor == worst);
  }
}

TEST_CASE("patching a single constant local") {
  WeightedTree t = unit_path(3);
  PseudometricSpace space = tree_metric(t);
  WhitneyPartition part;
  part.entries.push_back({0, Rat(8), {Rat(1), Rat(1), Rat(1)}});
  part.c_ng = fr(1, 16);
  part.cap_ng = 1;
  part.c_ls = Rat(1);
  part.a = fr(1, 4);
  part.big_a = Rat(64);
  part.multiplicity = 1;
  part.lip_factor = Rat(0);

  Vec v{Rat(5), Rat(-3)};
  LocalSelection loc{{v, v, v}, v};
  PatchReport rep = patch_selections(space, part, {loc}, norm_linf(2));

  for (const Vec& f : rep.values) CHECK(f == v);
  CHECK(rep.seminorm == Dist::zero());
  CHECK(rep.partition_lip == Dist::zero());
  CHECK(rep.anchor_consistency == Rat(0));
  CHECK(rep.agreement == Rat(0));
  CHECK(rep.local_lip == Dist::zero());
  CHECK(rep.multiplicity == 1);
}

TEST_CASE("patching overlapping locals that agree") {
  WeightedTree t = unit_path(3);
  PseudometricSpace space = tree_metric(t);
  WhitneyPartition part;
  part.entries.push_back({0, Rat(8), {Rat(1), fr(1, 2), Rat(0)}});
  part.entries.push_back({2, Rat(8), {Rat(0), fr(1, 2), Rat(1)}});
  part.c_ng = fr(1, 16);
  part.cap_ng = 1;
  part.c_ls = Rat(1);
  part.a = fr(1, 4);
  part.big_a = Rat(64);
  part.multiplicity = 2;
  part.lip_factor = Rat(4);

  auto ramp = [](long k) { return Vec{Rat(k), Rat(k)}; };
  std::vector<std::optional<Vec>> table{ramp(0), ramp(1), ramp(2)};
  LocalSelection near{table, ramp(0)};
  LocalSelection far{table, ramp(2)};
  PatchReport rep = patch_selections(space, part, {near, far}, norm_linf(2));

  // The locals agree, so the blend reproduces them where either vanishes
  // and on the overlap alike.
  for (int x = 0; x < 3; ++x) CHECK(rep.values[static_cast<size_t>(x)] == ramp(x));
  CHECK(rep.seminorm == Dist::of(Rat(1)));
  CHECK(rep.partition_lip == Dist::of(Rat(4)));
  CHECK(rep.anchor_consistency == fr(1, 9));
  CHECK(rep.agreement == fr(1, 4));
  CHECK(rep.local_lip == Dist::of(Rat(1)));
  CHECK(rep.multiplicity == 2);
}

TEST_CASE("patched values stay in the hull of the locals") {
  WeightedTree t = overlap_path();
  PseudometricSpace space = tree_metric(t);
  std::vector<Rat> r(3, Rat(256));
  WhitneyPartition part =
      whitney_partition(space, r, fr(1, 16), 1, fr(1, 4), tree_cover_supplier(t), 64);
  REQUIRE(part.entries.size() == 3);

  // Locals share a 1-Lipschitz first coordinate and disagree in the second.
  std::vector<Rat> pos{Rat(0), fr(4095, 4096), fr(4097, 4096)};
  std::vector<LocalSelection> locals;
  for (long k = 0; k < 3; ++k) {
    LocalSelection loc;
    for (int x = 0; x < 3; ++x) loc.values.push_back(Vec{pos[static_cast<size_t>(x)], Rat(k)});
    loc.anchor = *loc.values[static_cast<size_t>(part.entries[static_cast<size_t>(k)].center)];
    locals.push_back(std::move(loc));
  }
  PatchReport rep = patch_selections(space, part, locals, norm_linf(2));

  // Where only one weight is nonzero the blend equals that local.
  CHECK(rep.values[0] == Vec{Rat(0), Rat(0)});
  // Mixed points: second coordinate is the weighted label average.
  CHECK(rep.values[1] == Vec{pos[1], fr(26, 27)});
  CHECK(rep.values[2] == Vec{pos[2], fr(52, 27)});

  for (int x = 0; x < 3; ++x) {
    std::vector<Vec> active;
    for (size_t v = 0; v < locals.size(); ++v) {
      if (part.entries[v].values[static_cast<size_t>(x)] != 0)
        active.push_back(*locals[v].values[static_cast<size_t>(x)]);
    }
    Polytope h = hull(active);
    CHECK(contains_point(h, rep.values[static_cast<size_t>(x)]));
  }

  CHECK(rep.seminorm.finite);
  CHECK(rep.local_lip == Dist::of(Rat(1)));
  CHECK(rep.multiplicity == 3);
}

TEST_CASE("patching input validation") {
  WeightedTree t = overlap_path();
  PseudometricSpace space = tree_metric(t);
  std::vector<Rat> r(3, Rat(256));
  WhitneyPartition part =
      whitney_partition(space, r, fr(1, 16), 1, fr(1, 4), tree_cover_supplier(t), 64);

  Vec zero2{Rat(0), Rat(0)};
  std::vector<LocalSelection> locals(3, LocalSelection{{zero2, zero2, zero2}, zero2});
  PolyhedralNorm norm = norm_linf(2);

  // Weight 2/27 at 'b' makes the first local's value there mandatory.
  std::vector<LocalSelection> gap = locals;
  gap[0].values[1] = std::nullopt;
  CHECK_THROWS_WITH_AS(patch_selections(space, part, gap, norm),
                       "the local selection centered at 'a' is missing point 'b'",
                       ValidationError);

  std::vector<LocalSelection> short_list(2, locals[0]);
  CHECK_THROWS_AS(patch_selections(space, part, short_list, norm), ValidationError);

  WhitneyPartition off = part;
  off.a = fr(1, 2);
  CHECK_THROWS_AS(patch_selections(space, off, locals, norm), ValidationError);

  WhitneyPartition leaky = part;
  leaky.entries[0].values[0] = fr(1, 2);
  CHECK_THROWS_AS(patch_selections(space, leaky, locals, norm), ValidationError);

  WhitneyPartition negative = part;
  negative.entries[0].values[0] = Rat(2);
  negative.entries[1].values[0] = Rat(-1);
  CHECK_THROWS_AS(patch_selections(space, negative, locals, norm), ValidationError);

  WhitneyPartition squeezed = part;
  for (WhitneyEntry& e : squeezed.entries) e.values.pop_back();
  CHECK_THROWS_AS(patch_selections(space, squeezed, locals, norm), ValidationError);

  PseudometricSpace dis = space;
  dis.mode = SpaceMode::dissimilarity;
  CHECK_THROWS_AS(patch_selections(dis, part, locals, norm), ValidationError);
}

TEST_CASE("patching zero-distance pairs with disagreeing locals") {
  PseudometricSpace space =
      validate_space({"t0", "t1"}, {{Dist::zero(), Dist::zero()}, {Dist::zero(), Dist::zero()}},
                     SpaceMode::pseudometric);
  WhitneyPartition part;
  part.entries.push_back({0, Rat(1), {Rat(1), Rat(1)}});
  part.c_ng = fr(1, 16);
  part.cap_ng = 1;
  part.c_ls = Rat(1);
  part.a = fr(1, 4);
  part.big_a = Rat(64);
  part.multiplicity = 1;
  part.lip_factor = Rat(0);

  LocalSelection loc{{Vec{Rat(0)}, Vec{Rat(1)}}, Vec{Rat(0)}};
  PatchReport rep = patch_selections(space, part, {loc}, norm_linf(1));
  CHECK(rep.seminorm == Dist::infinity());
  CHECK(rep.local_lip == Dist::infinity());
  CHECK(rep.partition_lip == Dist::zero());
}
