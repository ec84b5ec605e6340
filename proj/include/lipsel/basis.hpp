#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lipsel/geometry.hpp"

namespace lipsel {

// Biorthogonal system attached to a convex body: functionals e_1..e_s and
// vectors v_1..v_s with <e_a, v_b> the Kronecker delta, gauges and dual
// norms bounded by `bound`, and center +- (radius/bound) v_a inside the
// body for every a.
struct LabelBasis {
  std::vector<Vec> functionals;  // act by inner product
  std::vector<Vec> vectors;
  Vec center;
  Rat radius;  // > 0
  Rat bound;   // >= 1
  bool verified = false;  // set by the constructing operations

  int size() const { return static_cast<int>(vectors.size()); }
};

struct BasisReport {
  bool ok = true;
  std::string detail;  // first failed condition, named (B0)..(B3)
};

// Exact check of the four basis conditions: the center belongs to the body
// (B0), biorthogonality (B1), the norm bounds (B2), and membership of the
// probe points center +- (radius/bound) v_a (B3). Size mismatches between
// the pieces are errors, not failed conditions.
BasisReport verify_basis(const Polytope& gamma, const PolyhedralNorm& norm,
                         const LabelBasis& basis);

// Enlarges a valid basis of size s <= m-1 at xi by one direction, using a
// point eta of the body with gauge(eta - xi) >= radius that is annihilated
// by every functional. The center moves toward eta to gauge distance
// radius/2, the unit vector toward eta joins the system, and a
// minimal-dual-norm functional biorthogonal to the enlarged system is
// found by a linear program. The result keeps the radius, carries bound
// max(2 * bound, dual norm of the new functional), and is verified before
// being returned. Violated preconditions throw ValidationError, each
// named.
LabelBasis add_vector(const Polytope& gamma, const PolyhedralNorm& norm,
                      const LabelBasis& basis, const Vec& eta, int m);

struct TransportReport {
  bool ok = false;
  std::string detail;               // diagnostics when the transport fails
  std::optional<LabelBasis> basis;  // basis for the target at eta0 when ok
};

// Carries a valid basis at xi0 over to a nearby convex body. The probes
// xi0 +- c1 * radius * v_a are replaced by their nearest points of the
// target, which must sit within eps0 * radius; the replacements are
// averaged and corrected through the inverse pairing matrix so
// biorthogonality is exact again, and the center shifts so every
// functional annihilates eta0 - xi0. The returned basis keeps the radius
// and records the smallest exact bound. Failure channels (reported, not
// thrown): a probe too far from the target, a singular pairing matrix, a
// corrected center outside the target, and a direction with no room to
// travel. c1 defaults to 1/bound, the largest value the basis guarantees
// to keep the probes inside the source body.
TransportReport transport_basis(const Polytope& gamma, const Polytope& target,
                                const PolyhedralNorm& norm, const LabelBasis& basis,
                                const Rat& eps0,
                                const std::optional<Rat>& c1 = std::nullopt);

}  // namespace lipsel
