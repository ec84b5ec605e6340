#include "lipsel/basis.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "lipsel/error.hpp"
#include "lipsel/lp.hpp"

namespace lipsel {

namespace {

std::string rat_str(const Rat& r) { return rat_to_string(r); }

void check_shapes(const Polytope& gamma, const PolyhedralNorm& norm,
                  const LabelBasis& basis) {
  int d = norm.dim();
  if (gamma.dim != d)
    throw ValidationError("the body lives in dimension " + std::to_string(gamma.dim) +
                          ", the norm in " + std::to_string(d));
  if (static_cast<int>(basis.center.size()) != d)
    throw ValidationError("the basis center has the wrong dimension");
  if (basis.functionals.size() != basis.vectors.size())
    throw ValidationError("the basis has " + std::to_string(basis.functionals.size()) +
                          " functionals and " + std::to_string(basis.vectors.size()) +
                          " vectors");
  for (const Vec& e : basis.functionals)
    if (static_cast<int>(e.size()) != d)
      throw ValidationError("a basis functional has the wrong dimension");
  for (const Vec& v : basis.vectors)
    if (static_cast<int>(v.size()) != d)
      throw ValidationError("a basis vector has the wrong dimension");
  if (basis.radius <= 0) throw ValidationError("the basis radius must be positive");
  if (basis.bound < 1) throw ValidationError("the basis bound must be at least 1");
}

// Gauge-nearest point of the target to q: minimize t subject to p in the
// target and p - q in t * ball.
std::pair<Rat, Vec> nearest_point(const Polytope& target, const PolyhedralNorm& norm,
                                  const Vec& q) {
  int d = norm.dim();
  LinSystem sys;
  sys.nvars = d + 1;
  for (const auto& h : target.halfspaces) {
    LinRow row;
    row.a.assign(static_cast<size_t>(d + 1), Rat(0));
    for (int t = 0; t < d; ++t) row.a[static_cast<size_t>(t)] = h.a[static_cast<size_t>(t)];
    row.b = h.b;
    sys.rows.push_back(std::move(row));
  }
  for (const auto& h : norm.ball.halfspaces) {
    LinRow row;
    row.a.assign(static_cast<size_t>(d + 1), Rat(0));
    Rat shift = 0;
    for (int t = 0; t < d; ++t) {
      row.a[static_cast<size_t>(t)] = h.a[static_cast<size_t>(t)];
      shift += Rat(h.a[static_cast<size_t>(t)] * q[static_cast<size_t>(t)]);
    }
    row.a[static_cast<size_t>(d)] = Rat(-h.b);
    row.b = shift;
    sys.rows.push_back(std::move(row));
  }
  Vec c(static_cast<size_t>(d + 1), Rat(0));
  c[static_cast<size_t>(d)] = 1;
  LpResult res = lp_minimize(sys, c);
  if (res.status != LpStatus::optimal)
    throw std::logic_error("nearest point search must be solvable on a nonempty body");
  Vec p(static_cast<size_t>(d));
  for (int t = 0; t < d; ++t) p[static_cast<size_t>(t)] = res.x[static_cast<size_t>(t)];
  return {res.obj, std::move(p)};
}

// Minimal dual norm functional with <e, vecs[a]> = 0 and <e, v_new> = 1,
// refined to the lexicographically smallest minimizer so reruns and
// platforms agree on the result.
Vec minimal_functional(const PolyhedralNorm& norm, const std::vector<Vec>& vecs,
                       const Vec& v_new, Rat& dual_out) {
  int d = norm.dim();
  LinSystem sys;
  sys.nvars = d + 1;
  for (const Vec& w : norm.ball.vertices) {
    LinRow row;
    row.a.assign(static_cast<size_t>(d + 1), Rat(0));
    for (int t = 0; t < d; ++t) row.a[static_cast<size_t>(t)] = w[static_cast<size_t>(t)];
    row.a[static_cast<size_t>(d)] = -1;
    sys.rows.push_back(std::move(row));
  }
  auto eq_row = [&](const Vec& v, const Rat& rhs, int col_extra) {
    LinRow row;
    row.a.assign(static_cast<size_t>(d + 1), Rat(0));
    if (col_extra >= 0) {
      row.a[static_cast<size_t>(col_extra)] = 1;
    } else {
      for (int t = 0; t < d; ++t) row.a[static_cast<size_t>(t)] = v[static_cast<size_t>(t)];
    }
    row.rel = Rel::eq;
    row.b = rhs;
    sys.rows.push_back(std::move(row));
  };
  for (const Vec& v : vecs) eq_row(v, Rat(0), -1);
  eq_row(v_new, Rat(1), -1);

  Vec c(static_cast<size_t>(d + 1), Rat(0));
  c[static_cast<size_t>(d)] = 1;
  LpResult res = lp_minimize(sys, c);
  if (res.status != LpStatus::optimal)
    throw std::logic_error("the functional program must be solvable");
  dual_out = res.obj;
  eq_row({}, res.obj, d);

  Vec e(static_cast<size_t>(d));
  for (int k = 0; k < d; ++k) {
    Vec ck(static_cast<size_t>(d + 1), Rat(0));
    ck[static_cast<size_t>(k)] = 1;
    LpResult rk = lp_minimize(sys, ck);
    if (rk.status != LpStatus::optimal)
      throw std::logic_error("the functional program must stay solvable");
    e[static_cast<size_t>(k)] = rk.obj;
    eq_row({}, rk.obj, k);
  }
  return e;
}

}  // namespace

BasisReport verify_basis(const Polytope& gamma, const PolyhedralNorm& norm,
                         const LabelBasis& basis) {
  check_shapes(gamma, norm, basis);
  BasisReport rep;
  auto fail = [&](std::string msg) {
    rep.ok = false;
    rep.detail = std::move(msg);
    return rep;
  };

  if (!contains_point(gamma, basis.center))
    return fail("(B0) the center lies outside the body");

  int s = basis.size();
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) {
      Rat got = dot(basis.functionals[static_cast<size_t>(a)],
                    basis.vectors[static_cast<size_t>(b)]);
      Rat want = a == b ? 1 : 0;
      if (got != want)
        return fail("(B1) <e_" + std::to_string(a + 1) + ", v_" + std::to_string(b + 1) +
                    "> = " + rat_str(got) + ", expected " + rat_str(want));
    }

  for (int a = 0; a < s; ++a) {
    Rat g = gauge(norm, basis.vectors[static_cast<size_t>(a)]);
    if (g > basis.bound)
      return fail("(B2) the gauge of v_" + std::to_string(a + 1) + " is " + rat_str(g) +
                  ", the bound " + rat_str(basis.bound));
    Rat dn = dual_norm(norm, basis.functionals[static_cast<size_t>(a)]);
    if (dn > basis.bound)
      return fail("(B2) the dual norm of e_" + std::to_string(a + 1) + " is " +
                  rat_str(dn) + ", the bound " + rat_str(basis.bound));
  }

  Rat step = Rat(basis.radius / basis.bound);
  for (int a = 0; a < s; ++a) {
    Vec probe = vadd(basis.center, vscale(basis.vectors[static_cast<size_t>(a)], step));
    if (!contains_point(gamma, probe))
      return fail("(B3) center + (radius/bound) v_" + std::to_string(a + 1) +
                  " leaves the body");
    probe = vsub(basis.center, vscale(basis.vectors[static_cast<size_t>(a)], step));
    if (!contains_point(gamma, probe))
      return fail("(B3) center - (radius/bound) v_" + std::to_string(a + 1) +
                  " leaves the body");
  }
  return rep;
}

LabelBasis add_vector(const Polytope& gamma, const PolyhedralNorm& norm,
                      const LabelBasis& basis, const Vec& eta, int m) {
  BasisReport rep = verify_basis(gamma, norm, basis);
  if (!rep.ok) throw ValidationError("add_vector needs a valid basis: " + rep.detail);
  int s = basis.size();
  if (s > m - 1)
    throw ValidationError("the basis already has " + std::to_string(s) +
                          " directions; extension needs at most " + std::to_string(m - 1));
  if (static_cast<int>(eta.size()) != norm.dim())
    throw ValidationError("eta has the wrong dimension");
  if (!contains_point(gamma, eta)) throw ValidationError("eta lies outside the body");

  Vec delta = vsub(eta, basis.center);
  Rat g = gauge(norm, delta);
  if (g < basis.radius)
    throw ValidationError("eta sits at gauge distance " + rat_str(g) +
                          " from the center, the radius is " + rat_str(basis.radius));
  for (int a = 0; a < s; ++a) {
    Rat pairing = dot(basis.functionals[static_cast<size_t>(a)], delta);
    if (pairing != 0)
      throw ValidationError("functional e_" + std::to_string(a + 1) +
                            " does not annihilate eta - center: <e, eta - center> = " +
                            rat_str(pairing));
  }

  // Slide the center toward eta until it sits at gauge distance radius/2;
  // the direction of travel becomes the new unit vector.
  Rat tau = Rat(basis.radius / (2 * g));
  Vec zeta = vadd(basis.center, vscale(delta, tau));
  Vec v_new = vscale(delta, Rat(1 / g));

  Rat dual_new = 0;
  Vec e_new = minimal_functional(norm, basis.vectors, v_new, dual_new);

  LabelBasis out;
  out.functionals = basis.functionals;
  out.functionals.push_back(std::move(e_new));
  out.vectors = basis.vectors;
  out.vectors.push_back(std::move(v_new));
  out.center = std::move(zeta);
  out.radius = basis.radius;
  Rat doubled = Rat(2 * basis.bound);
  out.bound = std::max(doubled, dual_new);
  BasisReport check = verify_basis(gamma, norm, out);
  if (!check.ok)
    throw std::logic_error("add_vector produced an invalid basis: " + check.detail);
  out.verified = true;
  return out;
}

TransportReport transport_basis(const Polytope& gamma, const Polytope& target,
                                const PolyhedralNorm& norm, const LabelBasis& basis,
                                const Rat& eps0, const std::optional<Rat>& c1_opt) {
  BasisReport rep = verify_basis(gamma, norm, basis);
  if (!rep.ok)
    throw ValidationError("transport_basis needs a valid basis: " + rep.detail);
  if (target.dim != norm.dim())
    throw ValidationError("the target lives in dimension " + std::to_string(target.dim) +
                          ", the norm in " + std::to_string(norm.dim()));
  if (eps0 <= 0) throw ValidationError("eps0 must be positive");
  Rat c1 = c1_opt ? *c1_opt : Rat(1 / basis.bound);
  if (c1 <= 0) throw ValidationError("c1 must be positive");

  TransportReport out;
  int d = norm.dim();
  int s = basis.size();
  const Rat& r = basis.radius;
  Rat reach = Rat(eps0 * r);

  if (s == 0) {
    auto [dist, p] = nearest_point(target, norm, basis.center);
    if (dist > reach) {
      out.detail = "the source center sits at gauge distance " + rat_str(dist) +
                   " from the target, allowed " + rat_str(reach);
      return out;
    }
    LabelBasis moved;
    moved.center = std::move(p);
    moved.radius = r;
    moved.bound = 1;
    moved.verified = true;
    out.ok = true;
    out.basis = std::move(moved);
    return out;
  }

  // Probe along every basis direction, then replace each probe by its
  // nearest point of the target.
  Rat step = Rat(c1 * r);
  std::vector<Vec> plus(static_cast<size_t>(s)), minus(static_cast<size_t>(s));
  for (int a = 0; a < s; ++a) {
    for (int sgn : {+1, -1}) {
      Vec probe = vadd(basis.center,
                       vscale(basis.vectors[static_cast<size_t>(a)], Rat(sgn * step)));
      if (!contains_point(gamma, probe))
        throw ValidationError("c1 is too large: the probe center " +
                              std::string(sgn > 0 ? "+" : "-") + " c1 r v_" +
                              std::to_string(a + 1) + " leaves the source body");
      auto [dist, p] = nearest_point(target, norm, probe);
      if (dist > reach) {
        out.detail = "probe center " + std::string(sgn > 0 ? "+" : "-") + " c1 r v_" +
                     std::to_string(a + 1) + " sits at gauge distance " + rat_str(dist) +
                     " from the target, allowed " + rat_str(reach);
        return out;
      }
      (sgn > 0 ? plus : minus)[static_cast<size_t>(a)] = std::move(p);
    }
  }

  Vec center_avg(static_cast<size_t>(d), Rat(0));
  for (int a = 0; a < s; ++a) {
    center_avg = vadd(center_avg, plus[static_cast<size_t>(a)]);
    center_avg = vadd(center_avg, minus[static_cast<size_t>(a)]);
  }
  center_avg = vscale(center_avg, Rat(Rat(1) / (2 * s)));

  // Difference quotients of the transported probes approximate the old
  // directions; invert their pairing against the old functionals to make
  // biorthogonality exact again.
  Rat twice_step = Rat(2 * step);
  std::vector<Vec> vt(static_cast<size_t>(s));
  for (int a = 0; a < s; ++a)
    vt[static_cast<size_t>(a)] = vscale(
        vsub(plus[static_cast<size_t>(a)], minus[static_cast<size_t>(a)]),
        Rat(1 / twice_step));

  Mat pairing(static_cast<size_t>(s), Vec(static_cast<size_t>(s)));
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b)
      pairing[static_cast<size_t>(a)][static_cast<size_t>(b)] =
          dot(basis.functionals[static_cast<size_t>(a)], vt[static_cast<size_t>(b)]);
  Mat pairing_t(static_cast<size_t>(s), Vec(static_cast<size_t>(s)));
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b)
      pairing_t[static_cast<size_t>(a)][static_cast<size_t>(b)] =
          pairing[static_cast<size_t>(b)][static_cast<size_t>(a)];
  std::optional<Mat> correction = invert(pairing_t);
  if (!correction) {
    out.detail = "the pairing matrix of the transported directions is singular";
    return out;
  }

  std::vector<Vec> vhat(static_cast<size_t>(s));
  for (int gidx = 0; gidx < s; ++gidx) {
    Vec acc(static_cast<size_t>(d), Rat(0));
    for (int b = 0; b < s; ++b)
      acc = vadd(acc, vscale(vt[static_cast<size_t>(b)],
                             (*correction)[static_cast<size_t>(gidx)][static_cast<size_t>(b)]));
    vhat[static_cast<size_t>(gidx)] = std::move(acc);
  }

  // Shift the averaged center so every functional annihilates the move.
  Vec eta0 = center_avg;
  Vec drift = vsub(center_avg, basis.center);
  for (int gidx = 0; gidx < s; ++gidx) {
    Rat coef = dot(basis.functionals[static_cast<size_t>(gidx)], drift);
    eta0 = vsub(eta0, vscale(vhat[static_cast<size_t>(gidx)], coef));
  }
  if (!contains_point(target, eta0)) {
    out.detail = "the corrected center lies outside the target";
    return out;
  }

  // Exact room to travel from eta0 along +-vhat inside the target.
  Rat worst_ratio = 0;  // max over directions of r / travel
  for (int gidx = 0; gidx < s; ++gidx) {
    std::optional<Rat> travel;
    for (int sgn : {+1, -1}) {
      for (const auto& h : target.halfspaces) {
        Rat speed = dot(h.a, vhat[static_cast<size_t>(gidx)]);
        if (sgn < 0) speed = Rat(-speed);
        if (speed <= 0) continue;
        Rat room = Rat((h.b - dot(h.a, eta0)) / speed);
        if (!travel || room < *travel) travel = room;
      }
    }
    if (!travel || *travel == 0) {
      out.detail = "direction " + std::to_string(gidx + 1) +
                   " cannot travel inside the target";
      return out;
    }
    Rat ratio = Rat(r / *travel);
    if (ratio > worst_ratio) worst_ratio = ratio;
  }

  Rat bound = std::max(Rat(1), worst_ratio);
  for (int a = 0; a < s; ++a) {
    Rat dn = dual_norm(norm, basis.functionals[static_cast<size_t>(a)]);
    if (dn > bound) bound = dn;
    Rat gg = gauge(norm, vhat[static_cast<size_t>(a)]);
    if (gg > bound) bound = gg;
  }

  LabelBasis moved;
  moved.functionals = basis.functionals;
  moved.vectors = std::move(vhat);
  moved.center = std::move(eta0);
  moved.radius = r;
  moved.bound = bound;
  BasisReport check = verify_basis(target, norm, moved);
  if (!check.ok)
    throw std::logic_error("transport_basis produced an invalid basis: " + check.detail);
  moved.verified = true;
  out.ok = true;
  out.basis = std::move(moved);
  return out;
}

}  // namespace lipsel
