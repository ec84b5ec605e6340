#include "lipsel/lab.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <utility>

#include "lipsel/combin.hpp"
#include "lipsel/error.hpp"
#include "lipsel/parallel.hpp"

namespace lipsel {

namespace {

Rat rational(long num, long den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Rat abs_diff(const Rat& a, const Rat& b) {
  Rat d = Rat(a - b);
  if (d < 0) d = Rat(-d);
  return d;
}

std::vector<std::vector<Dist>> line_metric(const std::vector<Rat>& coords) {
  size_t n = coords.size();
  std::vector<std::vector<Dist>> table(n, std::vector<Dist>(n, Dist::zero()));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      table[i][j] = Dist::of(abs_diff(coords[i], coords[j]));
  return table;
}

}  // namespace

SetValuedInstance restrict_instance(const SetValuedInstance& inst,
                                    const std::vector<int>& subset) {
  std::vector<int> idx = subset;
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (idx.empty()) throw ValidationError("the subset is empty");
  for (int i : idx)
    if (i < 0 || i >= inst.space.size())
      throw ValidationError("subset index " + std::to_string(i) +
                            " is outside the space");

  PseudometricSpace sub;
  sub.mode = inst.space.mode;
  for (int i : idx) sub.points.push_back(inst.space.points[static_cast<size_t>(i)]);
  sub.dist.assign(idx.size(), std::vector<Dist>(idx.size(), Dist::zero()));
  for (size_t a = 0; a < idx.size(); ++a)
    for (size_t b = 0; b < idx.size(); ++b)
      sub.dist[a][b] = inst.space.d(idx[a], idx[b]);

  std::vector<Polytope> images;
  for (int i : idx) images.push_back(inst.images[static_cast<size_t>(i)]);
  return validate_instance(std::move(sub), inst.norm, std::move(images), inst.m);
}

ScanReport restriction_scan(const SetValuedInstance& inst, int N, long cap_subsets) {
  if (N < 1) throw ValidationError("the subset size bound must be positive");
  if (cap_subsets < 1) throw ValidationError("the subset cap must be positive");
  int n = inst.space.size();

  // Interchangeable points: distance zero apart with equal images and
  // identical distance rows. Only the first of each group is enumerated.
  std::vector<int> reps;
  for (int i = 0; i < n; ++i) {
    bool dup = false;
    for (int j : reps) {
      const Dist& dij = inst.space.d(i, j);
      if (!dij.finite || dij.value != 0) continue;
      if (inst.images[static_cast<size_t>(i)] != inst.images[static_cast<size_t>(j)])
        continue;
      bool same_row = true;
      for (int k = 0; k < n && same_row; ++k)
        if (!(inst.space.d(i, k) == inst.space.d(j, k))) same_row = false;
      if (same_row) {
        dup = true;
        break;
      }
    }
    if (!dup) reps.push_back(i);
  }

  // The restricted optimum is monotone under adding points, so only the
  // maximal subset size matters.
  int t = std::min<int>(N, static_cast<int>(reps.size()));
  mpz_class count = count_combinations(static_cast<int>(reps.size()), t);
  if (count > cap_subsets)
    throw CapExceededError("restriction_scan needs " + count.get_str() +
                           " restrictions, the cap is " + std::to_string(cap_subsets));

  std::vector<std::vector<int>> subsets;
  subsets.reserve(static_cast<size_t>(count.get_ui()));
  for_each_combination(static_cast<int>(reps.size()), t, [&](const std::vector<int>& s) {
    std::vector<int> original;
    original.reserve(s.size());
    for (int pos : s) original.push_back(reps[static_cast<size_t>(pos)]);
    subsets.push_back(std::move(original));
    return true;
  });

  auto locals = parallel_map<Dist>(static_cast<int>(subsets.size()), [&](int i) {
    auto best = min_lipschitz(restrict_instance(inst, subsets[static_cast<size_t>(i)]));
    return best ? Dist::of(best->first) : Dist::infinity();
  });

  ScanReport rep;
  rep.N = N;
  rep.local = Dist::zero();
  rep.witness = subsets.empty() ? std::vector<int>{} : subsets.front();
  for (size_t i = 0; i < locals.size(); ++i)
    if (rep.local < locals[i]) {
      rep.local = locals[i];
      rep.witness = subsets[i];
    }

  auto best = min_lipschitz(inst);
  rep.global = best ? Dist::of(best->first) : Dist::infinity();

  if (rep.local == rep.global) {
    rep.ratio = Dist::of(1);
  } else if (!rep.global.finite || (rep.local.finite && rep.local.value == 0)) {
    rep.ratio = Dist::infinity();
  } else {
    rep.ratio = Dist::of(Rat(rep.global.value / rep.local.value));
  }
  return rep;
}

SetValuedInstance counterexample_m1(const Rat& lambda) {
  if (lambda < 1) throw ValidationError("lambda must be at least 1");
  Rat L = Rat(2 * lambda);
  Rat eps = Rat(1 / L);
  Rat one = 1;
  std::vector<Rat> u{Rat(one + eps), one, Rat(-one), Rat(-one - eps)};

  Vec A{L, one}, B{Rat(-L), one}, C{Rat(-L), Rat(-one)}, D{L, Rat(-one)};
  std::vector<Polytope> images{hull({A, B}), hull({A, C}), hull({B, D}), hull({A, B})};

  PseudometricSpace space = validate_space({"u1", "u2", "u3", "u4"}, line_metric(u),
                                           SpaceMode::pseudometric);
  return validate_instance(std::move(space), norm_linf(2), std::move(images), 1);
}

SetValuedInstance counterexample_m2(const Rat& lambda) {
  if (lambda < 1) throw ValidationError("lambda must be at least 1");
  Rat L = Rat(2 * lambda);
  Rat eps = Rat(1 / L);
  Rat one = 1;
  std::vector<Rat> u{Rat(one + eps), one, Rat(-one), Rat(-one - eps)};

  // Each line point appears twice; distances see only the line position.
  std::vector<Rat> psi;
  std::vector<std::string> labels;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 2; ++k) {
      psi.push_back(u[static_cast<size_t>(i)]);
      labels.push_back("u" + std::to_string(i + 1) + std::to_string(k));
    }

  Rat zero = 0;
  Vec A{L, one, zero}, Am{L, one, Rat(-eps)};
  Vec B{Rat(-L), one, zero}, Bm{Rat(-L), one, Rat(-eps)};
  Vec C{Rat(-L), Rat(-one), zero}, Cp{Rat(-L), Rat(-one), eps};
  Vec D{L, Rat(-one), zero}, Dp{L, Rat(-one), eps};

  Polytope flat = hull({A, B, C, D});
  std::vector<Polytope> images{
      flat, hull({A, B, Cp, Dp}),   // the pair over 1+e
      flat, hull({A, Bm, C, Dp}),   // over 1
      flat, hull({Am, B, Cp, D}),   // over -1
      flat, hull({A, B, Cp, Dp})};  // over -1-e

  PseudometricSpace space =
      validate_space(std::move(labels), line_metric(psi), SpaceMode::pseudometric);
  return validate_instance(std::move(space), norm_linf(3), std::move(images), 2);
}

SetValuedInstance quasimetric_grid(int N, int n) {
  if (N <= 1) throw ValidationError("the subset bound N must exceed 1");
  if (n < 1) throw ValidationError("the grid needs at least one step");

  std::vector<std::string> labels;
  std::vector<std::vector<Dist>> table(static_cast<size_t>(n + 1),
                                       std::vector<Dist>(static_cast<size_t>(n + 1)));
  for (int i = 0; i <= n; ++i) {
    labels.push_back("x" + std::to_string(i));
    for (int j = 0; j <= n; ++j) {
      Rat gap = rational(i - j, n);
      table[static_cast<size_t>(i)][static_cast<size_t>(j)] = Dist::of(Rat(gap * gap));
    }
  }

  Rat right = rational(1, static_cast<long>(N) * N);
  std::vector<Polytope> images;
  for (int i = 0; i <= n; ++i) {
    if (i == 0)
      images.push_back(hull({Vec{Rat(0)}}));
    else if (i == n)
      images.push_back(hull({Vec{right}}));
    else
      images.push_back(hull({Vec{Rat(0)}, Vec{Rat(1)}}));
  }

  PseudometricSpace space = validate_space(std::move(labels), std::move(table),
                                           SpaceMode::dissimilarity);
  return validate_instance(std::move(space), norm_linf(1), std::move(images), 1);
}

SetValuedInstance stkl_reduce(const SetValuedInstance& inst, int x0, const Rat& alpha) {
  if (alpha < 1) throw ValidationError("alpha must be at least 1");
  if (x0 < 0 || x0 >= inst.space.size())
    throw ValidationError("anchor index " + std::to_string(x0) +
                          " is outside the space");

  std::vector<Polytope> clipped;
  for (int x = 0; x < inst.space.size(); ++x) {
    if (x == x0) {
      clipped.push_back(inst.images[static_cast<size_t>(x0)]);
      continue;
    }
    const Dist& d = inst.space.d(x0, x);
    if (!d.finite) {
      clipped.push_back(inst.images[static_cast<size_t>(x)]);
      continue;
    }
    Polytope grown = add_ball(inst.images[static_cast<size_t>(x0)], inst.norm,
                              Rat(alpha * d.value));
    auto cut = intersect(inst.images[static_cast<size_t>(x)], grown);
    if (!cut)
      throw ValidationError("the clipped image at '" +
                            inst.space.points[static_cast<size_t>(x)] + "' is empty");
    clipped.push_back(std::move(*cut));
  }
  return validate_instance(inst.space, inst.norm, std::move(clipped), inst.m);
}

SetValuedInstance random_instance(const RandomSpec& spec) {
  if (spec.npoints < 1) throw ValidationError("the instance needs at least one point");
  if (spec.d < 1) throw ValidationError("the ambient dimension must be positive");
  if (spec.m < 0) throw ValidationError("the dimension cap m must be nonnegative");
  if (spec.box < 1) throw ValidationError("the vertex box must be positive");

  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<long> num(-spec.box, spec.box);
  std::uniform_int_distribution<long> den(1, 2);
  std::uniform_int_distribution<long> off(-3, 3);
  auto coord = [&]() { return rational(num(rng), den(rng)); };

  PolyhedralNorm norm = norm_linf(spec.d);

  std::vector<Vec> anchors;
  int attempts = 0;
  while (static_cast<int>(anchors.size()) < spec.npoints) {
    if (++attempts > 10000)
      throw ValidationError("the vertex box is too small for distinct points");
    Vec cand(static_cast<size_t>(spec.d));
    for (int t = 0; t < spec.d; ++t) cand[static_cast<size_t>(t)] = coord();
    bool fresh = true;
    for (const Vec& a : anchors)
      if (a == cand) fresh = false;
    if (fresh) anchors.push_back(std::move(cand));
  }

  std::vector<std::string> labels;
  for (int i = 0; i < spec.npoints; ++i) labels.push_back("p" + std::to_string(i));

  PseudometricSpace space;
  if (spec.tree) {
    std::vector<TreeEdge> edges;
    std::uniform_int_distribution<long> wnum(1, spec.box);
    for (int i = 1; i < spec.npoints; ++i) {
      std::uniform_int_distribution<int> parent(0, i - 1);
      edges.push_back(TreeEdge{parent(rng), i, rational(wnum(rng), den(rng))});
    }
    space = tree_metric(validate_tree(labels, std::move(edges)));
  } else {
    std::vector<std::vector<Dist>> table(
        static_cast<size_t>(spec.npoints),
        std::vector<Dist>(static_cast<size_t>(spec.npoints)));
    for (int i = 0; i < spec.npoints; ++i)
      for (int j = 0; j < spec.npoints; ++j)
        table[static_cast<size_t>(i)][static_cast<size_t>(j)] = Dist::of(
            gauge(norm, vsub(anchors[static_cast<size_t>(i)],
                             anchors[static_cast<size_t>(j)])));
    space = validate_space(labels, std::move(table), SpaceMode::pseudometric);
  }

  std::vector<Polytope> images;
  for (int i = 0; i < spec.npoints; ++i) {
    std::vector<Vec> pts;
    for (int k = 0; k <= spec.m; ++k) {
      Vec p = anchors[static_cast<size_t>(i)];
      for (int t = 0; t < spec.d; ++t)
        p[static_cast<size_t>(t)] = Rat(p[static_cast<size_t>(t)] + rational(off(rng), den(rng)));
      pts.push_back(std::move(p));
    }
    images.push_back(hull(std::move(pts)));
  }

  return validate_instance(std::move(space), norm, std::move(images), spec.m);
}

}  // namespace lipsel
