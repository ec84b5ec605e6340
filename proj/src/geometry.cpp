#include "lipsel/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <map>

#include "lipsel/combin.hpp"
#include "lipsel/error.hpp"

namespace lipsel {

namespace {

Halfspace canonical_halfspace(Vec a, Rat b) {
  mpz_class l = 1;
  for (auto& x : a) {
    x.canonicalize();
    l = lcm(l, x.get_den());
  }
  mpz_class g = 0;
  for (const auto& x : a) g = gcd(g, x.get_num() * (l / x.get_den()));
  if (g == 0) throw std::logic_error("halfspace with zero normal");
  Rat f(l, g);
  f.canonicalize();
  for (auto& x : a) x *= f;
  b *= f;
  b.canonicalize();
  return {std::move(a), std::move(b)};
}

bool halfspace_less(const Halfspace& x, const Halfspace& y) {
  int c = lex_cmp(x.a, y.a);
  if (c != 0) return c < 0;
  return x.b < y.b;
}

bool halfspace_eq(const Halfspace& x, const Halfspace& y) {
  return lex_cmp(x.a, y.a) == 0 && x.b == y.b;
}

// Affine chart of a point set: origin plus an independent direction basis,
// with the exact left inverse E = (D^T D)^{-1} D^T for computing chart
// coordinates.
struct Chart {
  Vec origin;
  std::vector<Vec> dirs;
  Mat to_chart;  // r x d

  int adim() const { return static_cast<int>(dirs.size()); }

  Vec coords(const Vec& p) const {
    Vec rel = vsub(p, origin);
    Vec t(dirs.size());
    for (size_t i = 0; i < dirs.size(); ++i) t[i] = dot(to_chart[i], rel);
    return t;
  }

  Vec to_ambient(const Vec& t) const {
    Vec p = origin;
    for (size_t i = 0; i < dirs.size(); ++i) p = vadd(p, vscale(dirs[i], t[i]));
    return p;
  }
};

Chart build_chart(const std::vector<Vec>& pts) {
  Chart c;
  c.origin = pts.front();
  Mat rows;
  for (const auto& p : pts) {
    Vec d = vsub(p, c.origin);
    if (is_zero_vec(d)) continue;
    rows.push_back(d);
    if (rank_of(rows) == static_cast<int>(rows.size())) {
      c.dirs.push_back(std::move(d));
    } else {
      rows.pop_back();
    }
  }
  size_t r = c.dirs.size();
  if (r > 0) {
    Mat gram(r, Vec(r));
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < r; ++j) gram[i][j] = dot(c.dirs[i], c.dirs[j]);
    auto inv = invert(gram);
    assert(inv.has_value());
    size_t d = c.origin.size();
    c.to_chart.assign(r, Vec(d, Rat(0)));
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < d; ++j)
        for (size_t k = 0; k < r; ++k)
          c.to_chart[i][j] += (*inv)[i][k] * c.dirs[k][j];
  }
  return c;
}

Rat cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Monotone chain; returns extreme points in counterclockwise order.
std::vector<Vec> chain_hull_2d(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const Vec& x, const Vec& y) { return lex_cmp(x, y) < 0; });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec& x, const Vec& y) { return lex_cmp(x, y) == 0; }),
            pts.end());
  size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<Vec> h(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (size_t i = n - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

// Is p a convex combination of the other points?
bool in_convex_hull_of(const Vec& p, const std::vector<Vec>& pts, size_t skip) {
  size_t d = p.size();
  std::vector<size_t> others;
  for (size_t i = 0; i < pts.size(); ++i)
    if (i != skip) others.push_back(i);
  if (others.empty()) return false;
  LinSystem sys;
  sys.nvars = static_cast<int>(others.size());
  for (size_t j = 0; j < d + 1; ++j) {
    LinRow row;
    row.rel = Rel::eq;
    row.a.resize(others.size());
    for (size_t k = 0; k < others.size(); ++k)
      row.a[k] = j < d ? pts[others[k]][j] : Rat(1);
    row.b = j < d ? p[j] : Rat(1);
    sys.rows.push_back(std::move(row));
  }
  for (size_t k = 0; k < others.size(); ++k) {
    LinRow row;
    row.a.assign(others.size(), Rat(0));
    row.a[k] = -1;
    row.rel = Rel::le;
    row.b = 0;
    sys.rows.push_back(std::move(row));
  }
  return lp_any_point(sys).has_value();
}

std::vector<Vec> extreme_points(const std::vector<Vec>& pts, const Chart& chart) {
  int r = chart.adim();
  if (r == 0) return {pts.front()};
  if (r == 1) {
    size_t lo = 0, hi = 0;
    Rat tlo, thi;
    for (size_t i = 0; i < pts.size(); ++i) {
      Rat t = chart.coords(pts[i])[0];
      if (i == 0 || t < tlo) {
        tlo = t;
        lo = i;
      }
      if (i == 0 || t > thi) {
        thi = t;
        hi = i;
      }
    }
    std::vector<Vec> out = {pts[lo], pts[hi]};
    std::sort(out.begin(), out.end(),
              [](const Vec& x, const Vec& y) { return lex_cmp(x, y) < 0; });
    return out;
  }
  if (r == 2) {
    std::map<std::pair<Rat, Rat>, size_t> back;
    std::vector<Vec> tc;
    for (size_t i = 0; i < pts.size(); ++i) {
      Vec t = chart.coords(pts[i]);
      back.emplace(std::make_pair(t[0], t[1]), i);
      tc.push_back(std::move(t));
    }
    std::vector<Vec> out;
    for (const auto& t : chain_hull_2d(tc))
      out.push_back(pts[back.at(std::make_pair(t[0], t[1]))]);
    return out;
  }
  std::vector<Vec> out;
  for (size_t i = 0; i < pts.size(); ++i)
    if (!in_convex_hull_of(pts[i], pts, i)) out.push_back(pts[i]);
  return out;
}

void push_canonical(std::vector<Halfspace>& out, Vec a, Rat b) {
  out.push_back(canonical_halfspace(std::move(a), std::move(b)));
}

// Maps a chart-space halfspace <alpha,t> <= beta back to ambient
// coordinates through t = E (x - origin).
void push_chart_halfspace(std::vector<Halfspace>& out, const Chart& chart,
                          const Vec& alpha, const Rat& beta) {
  size_t d = chart.origin.size();
  Vec a(d, Rat(0));
  for (size_t g = 0; g < chart.dirs.size(); ++g)
    for (size_t j = 0; j < d; ++j) a[j] += alpha[g] * chart.to_chart[g][j];
  Rat b = beta + dot(a, chart.origin);
  push_canonical(out, std::move(a), std::move(b));
}

// Facets of a full-dimensional (within its chart) polytope given its
// extreme points in chart coordinates, by enumerating supporting
// hyperplanes through r affinely independent vertices.
void chart_facets(std::vector<Halfspace>& out, const Chart& chart,
                  const std::vector<Vec>& tverts) {
  int r = chart.adim();
  int n = static_cast<int>(tverts.size());
  if (r == 1) {
    Rat tlo = tverts[0][0], thi = tverts[0][0];
    for (const auto& t : tverts) {
      tlo = std::min(tlo, t[0]);
      thi = std::max(thi, t[0]);
    }
    push_chart_halfspace(out, chart, {Rat(1)}, thi);
    push_chart_halfspace(out, chart, {Rat(-1)}, -tlo);
    return;
  }
  if (r == 2) {
    // tverts from chain_hull_2d are in counterclockwise order; each edge
    // (w_i, w_{i+1}) has outward normal (e_y, -e_x).
    for (int i = 0; i < n; ++i) {
      const Vec& u = tverts[i];
      const Vec& v = tverts[(i + 1) % n];
      Vec normal = {v[1] - u[1], u[0] - v[0]};
      if (is_zero_vec(normal)) continue;
      push_chart_halfspace(out, chart, normal, dot(normal, u));
    }
    return;
  }
  // r = 3 or 4: hyperplane through each r-subset, kept when all vertices
  // lie on one side.
  for_each_combination(n, r, [&](const std::vector<int>& idx) {
    Mat diffs;
    for (int i = 1; i < r; ++i)
      diffs.push_back(vsub(tverts[idx[i]], tverts[idx[0]]));
    auto ns = nullspace(diffs, r);
    if (ns.size() != 1) return true;  // degenerate or overdetermined subset
    Vec normal = ns[0];
    Rat beta = dot(normal, tverts[idx[0]]);
    bool any_above = false, any_below = false;
    for (const auto& t : tverts) {
      int c = cmp(dot(normal, t), beta);
      if (c > 0) any_above = true;
      if (c < 0) any_below = true;
      if (any_above && any_below) return true;
    }
    if (any_above) {
      for (auto& x : normal) x = -x;
      beta = -beta;
    }
    push_chart_halfspace(out, chart, normal, beta);
    return true;
  });
}

}  // namespace

bool operator==(const Polytope& p, const Polytope& q) {
  if (p.dim != q.dim || p.vertices.size() != q.vertices.size()) return false;
  for (size_t i = 0; i < p.vertices.size(); ++i)
    if (lex_cmp(p.vertices[i], q.vertices[i]) != 0) return false;
  return true;
}

Polytope hull(std::vector<Vec> pts) {
  if (pts.empty()) throw ValidationError("hull of an empty point set");
  int dim = static_cast<int>(pts.front().size());
  if (dim < 1 || dim > 4)
    throw ValidationError("ambient dimension must be between 1 and 4");
  for (const auto& p : pts)
    if (static_cast<int>(p.size()) != dim)
      throw ValidationError("hull points have mixed dimensions");

  std::sort(pts.begin(), pts.end(),
            [](const Vec& x, const Vec& y) { return lex_cmp(x, y) < 0; });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec& x, const Vec& y) { return lex_cmp(x, y) == 0; }),
            pts.end());

  Chart chart = build_chart(pts);
  std::vector<Vec> verts = extreme_points(pts, chart);

  Polytope poly;
  poly.dim = dim;

  // Affine hull equalities, one opposing pair per normal direction.
  Mat dir_rows = chart.dirs;
  for (const auto& normal : nullspace(dir_rows, dim)) {
    Rat b = dot(normal, chart.origin);
    Vec neg = vscale(normal, Rat(-1));
    push_canonical(poly.halfspaces, normal, b);
    push_canonical(poly.halfspaces, std::move(neg), -b);
  }
  if (chart.adim() >= 1) {
    std::vector<Vec> tverts;
    for (const auto& v : verts) tverts.push_back(chart.coords(v));
    // chain order is needed for 2d facets; recompute in chart space.
    if (chart.adim() == 2) tverts = chain_hull_2d(tverts);
    chart_facets(poly.halfspaces, chart, tverts);
  }

  std::sort(poly.halfspaces.begin(), poly.halfspaces.end(), halfspace_less);
  poly.halfspaces.erase(
      std::unique(poly.halfspaces.begin(), poly.halfspaces.end(), halfspace_eq),
      poly.halfspaces.end());

  std::sort(verts.begin(), verts.end(),
            [](const Vec& x, const Vec& y) { return lex_cmp(x, y) < 0; });
  poly.vertices = std::move(verts);
  return poly;
}

namespace {

LinSystem rows_of(const Polytope& p) {
  LinSystem sys;
  sys.nvars = p.dim;
  for (const auto& h : p.halfspaces) sys.rows.push_back({h.a, Rel::le, h.b});
  return sys;
}

// Removes rows whose constraint is implied by the remaining ones. Returns
// nullopt when the system turns out to be infeasible.
std::optional<std::vector<LinRow>> drop_redundant_rows(int nvars,
                                                       std::vector<LinRow> rows) {
  for (size_t i = 0; i < rows.size();) {
    if (rows[i].rel == Rel::eq) {
      ++i;
      continue;
    }
    LinSystem rest;
    rest.nvars = nvars;
    for (size_t j = 0; j < rows.size(); ++j)
      if (j != i) rest.rows.push_back(rows[j]);
    LpResult r = lp_maximize(rest, rows[i].a);
    if (r.status == LpStatus::infeasible) return std::nullopt;
    if (r.status == LpStatus::optimal && r.obj <= rows[i].b) {
      rows.erase(rows.begin() + static_cast<long>(i));
    } else {
      ++i;
    }
  }
  return rows;
}

}  // namespace

std::optional<Polytope> from_halfspaces(int dim, const std::vector<LinRow>& rows_in) {
  if (dim < 1 || dim > 4)
    throw ValidationError("ambient dimension must be between 1 and 4");
  LinSystem sys;
  sys.nvars = dim;
  sys.rows = rows_in;
  auto feasible = lp_any_point(sys);
  if (!feasible) return std::nullopt;

  // Boundedness in every coordinate direction.
  for (int j = 0; j < dim; ++j) {
    Vec c(dim, Rat(0));
    c[j] = 1;
    if (lp_maximize(sys, c).status == LpStatus::unbounded ||
        lp_minimize(sys, c).status == LpStatus::unbounded)
      throw ValidationError("halfspace system describes an unbounded set");
  }

  // Implicit equalities determine the affine hull exactly.
  Mat eq_rows;
  std::vector<LinRow> ineq;
  for (const auto& row : sys.rows) {
    if (row.rel == Rel::eq) {
      eq_rows.push_back(row.a);
      continue;
    }
    LpResult r = lp_minimize(sys, row.a);
    assert(r.status == LpStatus::optimal);
    if (r.obj == row.b)
      eq_rows.push_back(row.a);
    else
      ineq.push_back(row);
  }

  Chart chart;
  chart.origin = *feasible;
  if (!eq_rows.empty()) {
    chart.dirs = nullspace(eq_rows, dim);
  } else {
    for (int j = 0; j < dim; ++j) {
      Vec e(dim, Rat(0));
      e[j] = 1;
      chart.dirs.push_back(std::move(e));
    }
  }
  int r = static_cast<int>(chart.dirs.size());
  if (r == 0) return hull({chart.origin});

  // Substitute x = origin + sum t_g dirs_g into the inequalities.
  std::vector<LinRow> trows;
  for (const auto& row : ineq) {
    LinRow t;
    t.rel = Rel::le;
    t.a.resize(r);
    bool zero = true;
    for (int g = 0; g < r; ++g) {
      t.a[g] = dot(row.a, chart.dirs[g]);
      if (t.a[g] != 0) zero = false;
    }
    t.b = row.b - dot(row.a, chart.origin);
    if (!zero) trows.push_back(std::move(t));
  }
  if (static_cast<int>(trows.size()) > 3 * (r + 4)) {
    auto filtered = drop_redundant_rows(r, trows);
    assert(filtered.has_value());
    trows = std::move(*filtered);
  }

  // Basic solutions of the chart system are exactly the vertices.
  std::vector<Vec> verts;
  int nrows = static_cast<int>(trows.size());
  for_each_combination(nrows, r, [&](const std::vector<int>& idx) {
    Mat a;
    Vec b;
    for (int i : idx) {
      a.push_back(trows[i].a);
      b.push_back(trows[i].b);
    }
    auto t = solve_unique(a, b);
    if (!t) return true;
    for (const auto& row : trows)
      if (dot(row.a, *t) > row.b) return true;
    verts.push_back(chart.to_ambient(*t));
    return true;
  });
  assert(!verts.empty());
  return hull(verts);
}

std::optional<Polytope> intersect(const Polytope& p, const Polytope& q) {
  if (p.dim != q.dim) throw ValidationError("intersect: dimension mismatch");
  std::vector<LinRow> rows;
  for (const auto& h : p.halfspaces) rows.push_back({h.a, Rel::le, h.b});
  for (const auto& h : q.halfspaces) rows.push_back({h.a, Rel::le, h.b});
  return from_halfspaces(p.dim, rows);
}

Polytope minkowski_sum(const Polytope& p, const Polytope& q) {
  if (p.dim != q.dim) throw ValidationError("minkowski_sum: dimension mismatch");
  std::vector<Vec> sums;
  for (const auto& u : p.vertices)
    for (const auto& v : q.vertices) sums.push_back(vadd(u, v));
  return hull(sums);
}

Polytope make_ball(const PolyhedralNorm& norm, const Vec& center, const Rat& r) {
  if (r < 0) throw ValidationError("ball radius must be nonnegative");
  if (static_cast<int>(center.size()) != norm.dim())
    throw ValidationError("ball center has wrong dimension");
  if (r == 0) return hull({center});
  Polytope b;
  b.dim = norm.dim();
  for (const auto& v : norm.ball.vertices) b.vertices.push_back(vadd(vscale(v, r), center));
  for (const auto& h : norm.ball.halfspaces)
    b.halfspaces.push_back({h.a, h.b * r + dot(h.a, center)});
  // Positive scaling and translation preserve both canonical orders.
  return b;
}

Polytope add_ball(const Polytope& p, const PolyhedralNorm& norm, const Rat& r) {
  if (r < 0) throw ValidationError("add_ball: negative radius");
  if (p.dim != norm.dim()) throw ValidationError("add_ball: dimension mismatch");
  if (r == 0) return p;
  Vec zero(p.dim, Rat(0));
  return minkowski_sum(p, make_ball(norm, zero, r));
}

PolyhedralNorm norm_from_ball(Polytope ball) {
  if (affine_dim(ball) != ball.dim)
    throw ValidationError("norm ball must be full dimensional");
  for (const auto& h : ball.halfspaces)
    if (h.b <= 0) throw ValidationError("norm ball must contain 0 in its interior");
  for (const auto& v : ball.vertices) {
    Vec neg = vscale(v, Rat(-1));
    if (!std::binary_search(ball.vertices.begin(), ball.vertices.end(), neg,
                            [](const Vec& x, const Vec& y) { return lex_cmp(x, y) < 0; }))
      throw ValidationError("norm ball must be centrally symmetric");
  }
  return PolyhedralNorm{std::move(ball)};
}

PolyhedralNorm norm_linf(int d) {
  std::vector<Vec> pts;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Vec v(d);
    for (int j = 0; j < d; ++j) v[j] = (mask >> j) & 1 ? 1 : -1;
    pts.push_back(std::move(v));
  }
  return norm_from_ball(hull(pts));
}

PolyhedralNorm norm_l1(int d) {
  std::vector<Vec> pts;
  for (int j = 0; j < d; ++j) {
    Vec v(d, Rat(0));
    v[j] = 1;
    pts.push_back(v);
    v[j] = -1;
    pts.push_back(std::move(v));
  }
  return norm_from_ball(hull(pts));
}

Rat gauge(const PolyhedralNorm& norm, const Vec& v) {
  Rat best = 0;
  for (const auto& h : norm.ball.halfspaces) {
    Rat t = dot(h.a, v) / h.b;
    if (t > best) best = t;
  }
  return best;
}

Rat dual_norm(const PolyhedralNorm& norm, const Vec& e) {
  return support(norm.ball, e);
}

Rat support(const Polytope& p, const Vec& a) {
  Rat best;
  bool first = true;
  for (const auto& v : p.vertices) {
    Rat t = dot(a, v);
    if (first || t > best) {
      best = t;
      first = false;
    }
  }
  return best;
}

bool contains_point(const Polytope& p, const Vec& x) {
  for (const auto& h : p.halfspaces)
    if (dot(h.a, x) > h.b) return false;
  return true;
}

bool subset_of(const Polytope& p, const Polytope& q) {
  for (const auto& v : p.vertices)
    if (!contains_point(q, v)) return false;
  return true;
}

int affine_dim(const Polytope& p) {
  Mat diffs;
  for (size_t i = 1; i < p.vertices.size(); ++i)
    diffs.push_back(vsub(p.vertices[i], p.vertices[0]));
  return diffs.empty() ? 0 : rank_of(std::move(diffs));
}

namespace {

struct WeightedPoint {
  Rat weight;
  Vec point;  // chart coordinates
};

Vec weighted_mean(const std::vector<WeightedPoint>& parts) {
  Rat total = 0;
  Vec sum(parts.front().point.size(), Rat(0));
  for (const auto& wp : parts) {
    total += wp.weight;
    sum = vadd(sum, vscale(wp.point, wp.weight));
  }
  assert(total > 0);
  return vscale(sum, 1 / total);
}

}  // namespace

Vec centroid(const Polytope& p) {
  Chart chart = build_chart(p.vertices);
  int r = chart.adim();
  if (r > 3) throw ValidationError("centroid supports affine dimension <= 3");
  if (r == 0) return p.vertices[0];
  if (r == 1)
    return vscale(vadd(p.vertices.front(), p.vertices.back()), Rat(1, 2));

  std::vector<Vec> tverts;
  for (const auto& v : p.vertices) tverts.push_back(chart.coords(v));

  // Relative interior point: the vertex average has positive weight on
  // every vertex.
  Vec c0(r, Rat(0));
  for (const auto& t : tverts) c0 = vadd(c0, t);
  c0 = vscale(c0, Rat(1, static_cast<int>(tverts.size())));

  std::vector<WeightedPoint> parts;
  if (r == 2) {
    std::vector<Vec> ring = chain_hull_2d(tverts);
    int n = static_cast<int>(ring.size());
    for (int i = 0; i < n; ++i) {
      const Vec& u = ring[i];
      const Vec& v = ring[(i + 1) % n];
      Rat area = abs(cross2(c0, u, v));  // twice the area; ratios cancel
      if (area == 0) continue;
      Vec g = vscale(vadd(vadd(u, v), c0), Rat(1, 3));
      parts.push_back({area, std::move(g)});
    }
  } else {
    // Fan of tetrahedra from c0 over triangulated facets.
    std::vector<std::pair<Vec, Rat>> planes;
    for_each_combination(static_cast<int>(tverts.size()), 3,
                         [&](const std::vector<int>& idx) {
      Mat diffs = {vsub(tverts[idx[1]], tverts[idx[0]]),
                   vsub(tverts[idx[2]], tverts[idx[0]])};
      auto ns = nullspace(diffs, 3);
      if (ns.size() != 1) return true;
      Vec n = ns[0];
      Rat beta = dot(n, tverts[idx[0]]);
      bool above = false, below = false;
      for (const auto& t : tverts) {
        int c = cmp(dot(n, t), beta);
        above |= c > 0;
        below |= c < 0;
      }
      if (above && below) return true;
      if (above) {
        n = vscale(n, Rat(-1));
        beta = -beta;
      }
      Halfspace h = canonical_halfspace(std::move(n), std::move(beta));
      for (const auto& q : planes)
        if (lex_cmp(q.first, h.a) == 0 && q.second == h.b) return true;
      planes.emplace_back(h.a, h.b);
      return true;
    });
    for (const auto& [normal, beta] : planes) {
      std::vector<Vec> face;
      for (const auto& t : tverts)
        if (dot(normal, t) == beta) face.push_back(t);
      assert(face.size() >= 3);
      // Order the facet polygon in its own plane.
      Chart fchart = build_chart(face);
      std::vector<Vec> fcoords;
      for (const auto& f : face) fcoords.push_back(fchart.coords(f));
      std::vector<Vec> ring2 = chain_hull_2d(fcoords);
      std::vector<Vec> ring;
      for (const auto& t2 : ring2) ring.push_back(fchart.to_ambient(t2));
      for (size_t i = 1; i + 1 < ring.size(); ++i) {
        Mat m = {vsub(ring[0], c0), vsub(ring[i], c0), vsub(ring[i + 1], c0)};
        Rat vol = abs(det(m));  // six times the volume; ratios cancel
        if (vol == 0) continue;
        Vec g = vscale(vadd(vadd(ring[0], ring[i]), vadd(ring[i + 1], c0)), Rat(1, 4));
        parts.push_back({vol, std::move(g)});
      }
    }
  }
  return chart.to_ambient(weighted_mean(parts));
}

Rat dist_to_set(const Vec& x, const Polytope& p, const PolyhedralNorm& norm) {
  int d = p.dim;
  LinSystem sys;
  sys.nvars = d + 1;  // y, t
  for (const auto& h : p.halfspaces) {
    LinRow row;
    row.a = h.a;
    row.a.push_back(Rat(0));
    row.rel = Rel::le;
    row.b = h.b;
    sys.rows.push_back(std::move(row));
  }
  for (const auto& h : norm.ball.halfspaces) {
    // <a, x - y> <= t b
    LinRow row;
    row.a = vscale(h.a, Rat(-1));
    row.a.push_back(-h.b);
    row.rel = Rel::le;
    row.b = -dot(h.a, x);
    sys.rows.push_back(std::move(row));
  }
  Vec c(d + 1, Rat(0));
  c[d] = 1;
  LpResult r = lp_minimize(sys, c);
  assert(r.status == LpStatus::optimal);
  return r.obj;
}

Rat hausdorff(const Polytope& p, const Polytope& q, const PolyhedralNorm& norm) {
  if (p.dim != q.dim) throw ValidationError("hausdorff: dimension mismatch");
  Rat best = 0;
  for (const auto& v : p.vertices) best = std::max(best, dist_to_set(v, q, norm));
  for (const auto& v : q.vertices) best = std::max(best, dist_to_set(v, p, norm));
  return best;
}

WidthResult kolmogorov_width(const Polytope& p, int m, const PolyhedralNorm& norm) {
  if (m < 0 || m > p.dim) throw ValidationError("width: m out of range");
  int adim = affine_dim(p);
  if (m >= adim) return {Rat(0), Rat(0)};

  int d = p.dim;
  if (m == 0) {
    // Chebyshev radius: minimize t with every vertex within t of a center.
    LinSystem sys;
    sys.nvars = d + 1;
    for (const auto& v : p.vertices)
      for (const auto& h : norm.ball.halfspaces) {
        LinRow row;
        row.a = vscale(h.a, Rat(-1));
        row.a.push_back(-h.b);
        row.rel = Rel::le;
        row.b = -dot(h.a, v);
        sys.rows.push_back(std::move(row));
      }
    Vec c(d + 1, Rat(0));
    c[d] = 1;
    LpResult r = lp_minimize(sys, c);
    assert(r.status == LpStatus::optimal);
    return {r.obj, r.obj};
  }

  // Upper bound: best flat through an (m+1)-subset of vertices.
  int n = static_cast<int>(p.vertices.size());
  std::optional<Rat> best;
  for_each_combination(n, m + 1, [&](const std::vector<int>& idx) {
    std::vector<Vec> span_pts;
    for (int i : idx) span_pts.push_back(p.vertices[i]);
    Chart flat = build_chart(span_pts);
    int k = flat.adim();
    Rat worst = 0;
    for (const auto& v : p.vertices) {
      // distance from v to the flat origin + span(dirs)
      LinSystem sys;
      sys.nvars = k + 1;
      for (const auto& h : norm.ball.halfspaces) {
        // <a, v - origin - sum s_g dir_g> <= t b
        LinRow row;
        row.a.resize(k + 1);
        for (int g = 0; g < k; ++g) row.a[g] = -dot(h.a, flat.dirs[g]);
        row.a[k] = -h.b;
        row.rel = Rel::le;
        row.b = -dot(h.a, vsub(v, flat.origin));
        sys.rows.push_back(std::move(row));
      }
      Vec c(k + 1, Rat(0));
      c[k] = 1;
      LpResult r = lp_minimize(sys, c);
      assert(r.status == LpStatus::optimal);
      worst = std::max(worst, r.obj);
      if (best && worst >= *best) break;
    }
    if (!best || worst < *best) best = worst;
    return true;
  });
  assert(best.has_value());
  return {std::nullopt, *best};
}

namespace {

bool family_subset_intersects(const std::vector<Polytope>& family,
                              const std::vector<int>& idx, Vec* witness) {
  LinSystem sys;
  sys.nvars = family.front().dim;
  for (int i : idx)
    for (const auto& h : family[static_cast<size_t>(i)].halfspaces)
      sys.rows.push_back({h.a, Rel::le, h.b});
  auto pt = lp_any_point(sys);
  if (pt && witness) *witness = *pt;
  return pt.has_value();
}

}  // namespace

HellyReport helly_check(const std::vector<Polytope>& family, int m) {
  if (family.empty()) throw ValidationError("helly_check: empty family");
  int d = family.front().dim;
  for (const auto& p : family)
    if (p.dim != d) throw ValidationError("helly_check: mixed dimensions");

  std::vector<Vec> all;
  for (const auto& p : family)
    all.insert(all.end(), p.vertices.begin(), p.vertices.end());
  Mat diffs;
  for (size_t i = 1; i < all.size(); ++i) diffs.push_back(vsub(all[i], all[0]));
  int common = diffs.empty() ? 0 : rank_of(std::move(diffs));
  if (common > m)
    throw ValidationError(
        "helly_check: family spans affine dimension " + std::to_string(common) +
        " which exceeds m = " + std::to_string(m));

  HellyReport rep;
  rep.common_dim = common;
  rep.hypothesis_holds = true;

  int n = static_cast<int>(family.size());
  int k = std::min(n, m + 1);
  std::vector<int> allidx(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) allidx[static_cast<size_t>(i)] = i;

  for_each_combination(n, k, [&](const std::vector<int>& idx) {
    if (!family_subset_intersects(family, idx, nullptr)) {
      rep.hypothesis_holds = false;
      rep.violating_subfamily = idx;
      return false;
    }
    return true;
  });

  Vec witness;
  rep.all_intersect = family_subset_intersects(family, allidx, &witness);
  if (rep.all_intersect) rep.witness = witness;
  rep.conclusion_ok = !rep.hypothesis_holds || rep.all_intersect;
  return rep;
}

namespace {

void canonicalize_row(LinRow& row) {
  Halfspace h = canonical_halfspace(row.a, row.b);
  if (row.rel == Rel::eq) {
    // Equalities may also be negated; fix the sign of the first nonzero.
    for (const auto& x : h.a) {
      if (x > 0) break;
      if (x < 0) {
        h.a = vscale(h.a, Rat(-1));
        h.b = -h.b;
        break;
      }
    }
  }
  row.a = std::move(h.a);
  row.b = std::move(h.b);
}

// Drops trivial rows; returns false when a row is unsatisfiable.
bool clean_rows(std::vector<LinRow>& rows) {
  std::vector<LinRow> out;
  for (auto& row : rows) {
    if (is_zero_vec(row.a)) {
      if (row.rel == Rel::le ? row.b < 0 : row.b != 0) return false;
      continue;
    }
    canonicalize_row(row);
    out.push_back(std::move(row));
  }
  std::sort(out.begin(), out.end(), [](const LinRow& x, const LinRow& y) {
    if (x.rel != y.rel) return x.rel == Rel::eq;
    int c = lex_cmp(x.a, y.a);
    if (c != 0) return c < 0;
    return x.b < y.b;
  });
  // Parallel inequality rows: keep the tightest bound.
  std::vector<LinRow> dedup;
  for (auto& row : out) {
    if (!dedup.empty() && dedup.back().rel == row.rel &&
        lex_cmp(dedup.back().a, row.a) == 0) {
      if (row.rel == Rel::eq && dedup.back().b != row.b) return false;
      continue;  // sorted ascending by b, the first is tightest for <=
    }
    dedup.push_back(std::move(row));
  }
  rows = std::move(dedup);
  return true;
}

}  // namespace

std::optional<Polytope> project_system(const LinSystem& sys,
                                       const std::vector<int>& keep, int cap) {
  int n = sys.nvars;
  std::vector<bool> keep_mask(static_cast<size_t>(n), false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw ValidationError("project_system: bad keep index");
    keep_mask[static_cast<size_t>(k)] = true;
  }

  std::vector<LinRow> rows = sys.rows;
  if (!clean_rows(rows)) return std::nullopt;

  for (int var = n - 1; var >= 0; --var) {
    if (keep_mask[static_cast<size_t>(var)]) continue;

    // Prefer solving an equality for the variable and substituting.
    size_t eq_idx = rows.size();
    for (size_t i = 0; i < rows.size(); ++i)
      if (rows[i].rel == Rel::eq && rows[i].a[static_cast<size_t>(var)] != 0) {
        eq_idx = i;
        break;
      }
    if (eq_idx < rows.size()) {
      LinRow pivot = rows[eq_idx];
      rows.erase(rows.begin() + static_cast<long>(eq_idx));
      Rat pc = pivot.a[static_cast<size_t>(var)];
      for (auto& row : rows) {
        Rat rc = row.a[static_cast<size_t>(var)];
        if (rc == 0) continue;
        Rat f = rc / pc;
        for (int j = 0; j < n; ++j)
          row.a[static_cast<size_t>(j)] -= f * pivot.a[static_cast<size_t>(j)];
        row.b -= f * pivot.b;
      }
    } else {
      std::vector<LinRow> zero, pos, neg;
      for (auto& row : rows) {
        int s = sgn(row.a[static_cast<size_t>(var)]);
        (s == 0 ? zero : s > 0 ? pos : neg).push_back(std::move(row));
      }
      std::vector<LinRow> combined = std::move(zero);
      for (const auto& prow : pos) {
        Rat pinv = 1 / prow.a[static_cast<size_t>(var)];
        for (const auto& nrow : neg) {
          Rat ninv = 1 / -nrow.a[static_cast<size_t>(var)];
          LinRow row;
          row.rel = Rel::le;
          row.a.resize(static_cast<size_t>(n));
          for (int j = 0; j < n; ++j)
            row.a[static_cast<size_t>(j)] =
                prow.a[static_cast<size_t>(j)] * pinv +
                nrow.a[static_cast<size_t>(j)] * ninv;
          row.b = prow.b * pinv + nrow.b * ninv;
          combined.push_back(std::move(row));
        }
      }
      rows = std::move(combined);
    }

    if (!clean_rows(rows)) return std::nullopt;
    if (static_cast<int>(rows.size()) > cap)
      throw CapExceededError("projection exceeded the halfspace cap of " +
                             std::to_string(cap) + " rows");
    if (rows.size() > 32) {
      auto filtered = drop_redundant_rows(n, rows);
      if (!filtered) return std::nullopt;
      rows = std::move(*filtered);
    }
  }

  // Reindex onto the kept coordinates, in the order given.
  std::vector<LinRow> shadow;
  for (auto& row : rows) {
    LinRow r;
    r.rel = row.rel;
    r.b = row.b;
    r.a.reserve(keep.size());
    for (int k : keep) r.a.push_back(row.a[static_cast<size_t>(k)]);
    shadow.push_back(std::move(r));
  }
  return from_halfspaces(static_cast<int>(keep.size()), shadow);
}

std::optional<Polytope> project(const Polytope& p, int keep_first, int cap) {
  if (keep_first < 1 || keep_first > p.dim)
    throw ValidationError("project: keep count out of range");
  std::vector<int> keep;
  for (int i = 0; i < keep_first; ++i) keep.push_back(i);
  return project_system(rows_of(p), keep, cap);
}

StabilityReport inclusion_stability_check(const Polytope& g1, const Polytope& g2,
                                          const Vec& a1, const Vec& a2,
                                          const Rat& r1, const Rat& r2,
                                          const PolyhedralNorm& norm) {
  auto meets_small_ball = [&](const Polytope& g, const Vec& a, const Rat& r) {
    return intersect(g, make_ball(norm, a, r)).has_value();
  };
  if (!meets_small_ball(g1, a1, r1))
    throw ValidationError("stability check: G1 misses B(a1, r1)");
  if (!meets_small_ball(g2, a2, r2))
    throw ValidationError("stability check: G2 misses B(a2, r2)");

  auto k1 = intersect(g1, make_ball(norm, a1, 2 * r1));
  auto k2 = intersect(g2, make_ball(norm, a2, 2 * r2));
  assert(k1 && k2);

  StabilityReport rep;
  rep.lhs = hausdorff(*k1, *k2, norm);
  Rat dr = abs(r1 - r2);
  rep.rhs = Rat(18) * (hausdorff(g1, g2, norm) + gauge(norm, vsub(a1, a2)) + dr);
  rep.holds = rep.lhs <= rep.rhs;
  return rep;
}

}  // namespace lipsel
