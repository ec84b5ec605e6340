#include "lipsel/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "lipsel/error.hpp"

namespace lipsel {

namespace {

void require_ambient(const Polytope& p, const PolyhedralNorm& norm) {
  if (p.dim != norm.dim())
    throw ValidationError("the body lives in dimension " + std::to_string(p.dim) +
                          ", the norm in " + std::to_string(norm.dim()));
}

// Directions v - p0 that grow the rank, up to the requested count.
std::vector<Vec> spanning_directions(const Polytope& p, int want) {
  const Vec& p0 = p.vertices[0];
  std::vector<Vec> dirs;
  for (size_t i = 1; i < p.vertices.size() && static_cast<int>(dirs.size()) < want;
       ++i) {
    Vec cand = vsub(p.vertices[i], p0);
    Mat probe = dirs;
    probe.push_back(cand);
    if (rank_of(std::move(probe)) > static_cast<int>(dirs.size()))
      dirs.push_back(std::move(cand));
  }
  if (static_cast<int>(dirs.size()) != want)
    throw std::logic_error("affine dimension disagrees with the vertex span");
  return dirs;
}

// Coordinates (s, t) of y in the basis (w1, w2); y must lie in their span.
Vec plane_coords(const Vec& w1, const Vec& w2, const Vec& y) {
  Mat a;
  for (size_t i = 0; i < w1.size(); ++i) a.push_back(Vec{w1[i], w2[i]});
  auto st = solve_unique(a, y);
  if (!st) throw std::logic_error("point outside the plane parameterization");
  return *st;
}

// Area of the convex hull of planar points (unordered input). The points
// are sorted by angle around their average, which lies in the relative
// interior, then the shoelace sum is taken.
Rat convex_area(std::vector<Vec> pts) {
  Vec ref(2, Rat(0));
  for (const Vec& p : pts) {
    ref[0] = Rat(ref[0] + p[0]);
    ref[1] = Rat(ref[1] + p[1]);
  }
  Rat inv = Rat(Rat(1) / Rat(static_cast<long>(pts.size())));
  ref[0] = Rat(ref[0] * inv);
  ref[1] = Rat(ref[1] * inv);

  auto half = [&](const Vec& p) {
    Rat dy = Rat(p[1] - ref[1]);
    if (dy != 0) return dy > 0 ? 0 : 1;
    Rat dx = Rat(p[0] - ref[0]);
    return dx > 0 ? 0 : 1;
  };
  std::sort(pts.begin(), pts.end(), [&](const Vec& p, const Vec& q) {
    int hp = half(p), hq = half(q);
    if (hp != hq) return hp < hq;
    Rat cross = Rat(Rat(p[0] - ref[0]) * Rat(q[1] - ref[1]) -
                    Rat(p[1] - ref[1]) * Rat(q[0] - ref[0]));
    return cross > 0;
  });

  Rat twice = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const Vec& p = pts[i];
    const Vec& q = pts[(i + 1) % pts.size()];
    twice = Rat(twice + Rat(p[0] * q[1] - p[1] * q[0]));
  }
  if (twice < 0) twice = Rat(-twice);
  return Rat(twice / 2);
}

// Minimal radius over balls containing every vertex of p with center
// p0 + sum s_k w_k; returns the radius and fills the center.
Rat min_enclosing_radius(const Polytope& p, const PolyhedralNorm& norm,
                         const std::vector<Vec>& dirs, Vec* center) {
  const Vec& p0 = p.vertices[0];
  int k = static_cast<int>(dirs.size());
  LinSystem sys;
  sys.nvars = k + 1;  // span coefficients, then the radius
  for (const Vec& v : p.vertices) {
    Vec rel = vsub(v, p0);
    for (const Halfspace& h : norm.ball.halfspaces) {
      LinRow row;
      row.a.assign(static_cast<size_t>(k + 1), Rat(0));
      for (int j = 0; j < k; ++j)
        row.a[static_cast<size_t>(j)] = Rat(-dot(h.a, dirs[static_cast<size_t>(j)]));
      row.a[static_cast<size_t>(k)] = Rat(-h.b);
      row.b = Rat(-dot(h.a, rel));
      sys.rows.push_back(std::move(row));
    }
  }
  LinRow nonneg;
  nonneg.a.assign(static_cast<size_t>(k + 1), Rat(0));
  nonneg.a[static_cast<size_t>(k)] = -1;
  sys.rows.push_back(std::move(nonneg));

  Vec obj(static_cast<size_t>(k + 1), Rat(0));
  obj[static_cast<size_t>(k)] = 1;
  LpResult res = lp_minimize(sys, obj);
  if (res.status != LpStatus::optimal)
    throw std::logic_error("the enclosing ball problem must be solvable");

  if (center) {
    *center = p0;
    for (int j = 0; j < k; ++j) {
      Vec step = vscale(dirs[static_cast<size_t>(j)], res.x[static_cast<size_t>(j)]);
      *center = vadd(*center, step);
    }
  }
  return res.obj;
}

}  // namespace

Vec rect_selector_linf2(const Polytope& p) {
  if (p.dim != 2)
    throw ValidationError("the rectangle selector needs a body in the plane");
  Rat minx = p.vertices[0][0], maxx = minx;
  Rat miny = p.vertices[0][1], maxy = miny;
  for (const Vec& v : p.vertices) {
    if (v[0] < minx) minx = v[0];
    if (v[0] > maxx) maxx = v[0];
    if (v[1] < miny) miny = v[1];
    if (v[1] > maxy) maxy = v[1];
  }
  Rat sx = Rat(minx + maxx);
  Rat sy = Rat(miny + maxy);
  return Vec{Rat(sx / 2), Rat(sy / 2)};
}

Rat norm_diameter(const Polytope& p, const PolyhedralNorm& norm) {
  require_ambient(p, norm);
  Rat best = 0;
  for (size_t i = 0; i < p.vertices.size(); ++i)
    for (size_t j = i + 1; j < p.vertices.size(); ++j) {
      Rat g = gauge(norm, vsub(p.vertices[i], p.vertices[j]));
      if (g > best) best = g;
    }
  return best;
}

SelectorReport parallel_body_centroid(const Polytope& p, const PolyhedralNorm& norm) {
  require_ambient(p, norm);
  if (affine_dim(p) > 2)
    throw ValidationError(
        "the parallel body selector needs a body of affine dimension at most 2");
  Rat diam = norm_diameter(p, norm);
  SelectorReport rep;
  rep.point = diam == 0 ? p.vertices[0] : centroid(add_ball(p, norm, diam));
  rep.inside = contains_point(p, rep.point);
  rep.method = "parallel_body";
  return rep;
}

std::vector<double> steiner_point_polygon(const Polytope& p, int n) {
  if (p.dim != 2)
    throw ValidationError("the Steiner point quadrature works in the plane");
  if (n < 64) throw ValidationError("the quadrature needs at least 64 nodes");

  std::vector<std::pair<double, double>> vs;
  vs.reserve(p.vertices.size());
  for (const Vec& v : p.vertices) vs.emplace_back(v[0].get_d(), v[1].get_d());
  if (vs.size() == 1) return {vs[0].first, vs[0].second};

  double sx = 0, sy = 0;
  for (int i = 0; i < n; ++i) {
    double th = 2 * std::numbers::pi * i / n;
    double ux = std::cos(th), uy = std::sin(th);
    double h = ux * vs[0].first + uy * vs[0].second;
    for (const auto& [x, y] : vs) h = std::max(h, ux * x + uy * y);
    sx += ux * h;
    sy += uy * h;
  }
  return {2 * sx / n, 2 * sy / n};
}

Rat regularity_coefficient(const Polytope& p, const PolyhedralNorm& norm) {
  require_ambient(p, norm);
  int ad = affine_dim(p);
  if (ad == 0) return 0;
  if (ad > 2)
    throw ValidationError(
        "the regularity coefficient is computed for affine dimension 1 or 2");

  std::vector<Vec> dirs = spanning_directions(p, ad);
  Rat radius = min_enclosing_radius(p, norm, dirs, nullptr);

  if (ad == 1) {
    // Lengths measured in units of the spanning direction w = v1 - v0: the
    // body spans one unit, the ball slice 2 * radius / gauge(w) units.
    Rat g = gauge(norm, dirs[0]);
    Rat twice_r = Rat(2 * radius);
    return Rat(twice_r / g);
  }

  // Areas measured in the plane coordinates (s, t) of the spanning pair.
  std::vector<Vec> body_st;
  const Vec& p0 = p.vertices[0];
  for (const Vec& v : p.vertices)
    body_st.push_back(plane_coords(dirs[0], dirs[1], vsub(v, p0)));
  Rat body_area = convex_area(std::move(body_st));

  // Slice of the ball by the plane through its center: gauge(s w1 + t w2)
  // bounded by the radius, independent of where the center sits.
  std::vector<LinRow> rows;
  for (const Halfspace& h : norm.ball.halfspaces) {
    LinRow row;
    row.a = Vec{dot(h.a, dirs[0]), dot(h.a, dirs[1])};
    row.b = Rat(radius * h.b);
    rows.push_back(std::move(row));
  }
  auto slice = from_halfspaces(2, rows);
  if (!slice) throw std::logic_error("the ball slice through its center is empty");
  Rat slice_area = convex_area(slice->vertices);
  return Rat(slice_area / body_area);
}

std::optional<Polytope> truncate_to_width_ball(const Polytope& p,
                                               const PolyhedralNorm& norm,
                                               const Vec& center,
                                               const Rat& gamma_hat, int m) {
  require_ambient(p, norm);
  if (static_cast<int>(center.size()) != p.dim)
    throw ValidationError("the center dimension does not match the body");
  if (gamma_hat <= 0) throw ValidationError("the truncation factor must be positive");
  if (m < 0) throw ValidationError("the width order must be nonnegative");
  WidthResult width = kolmogorov_width(p, m, norm);
  Rat radius = Rat(gamma_hat * width.upper);
  return intersect(p, make_ball(norm, center, radius));
}

}  // namespace lipsel
