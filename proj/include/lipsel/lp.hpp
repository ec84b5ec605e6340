#pragma once

#include <optional>
#include <vector>

#include "lipsel/linalg.hpp"

namespace lipsel {

enum class Rel { le, eq };

// One linear constraint <a,x> <= b or <a,x> = b over free variables.
struct LinRow {
  Vec a;
  Rel rel = Rel::le;
  Rat b = 0;
};

struct LinSystem {
  int nvars = 0;
  std::vector<LinRow> rows;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Rat obj = 0;
  Vec x;  // an optimal basic solution when status == optimal
};

// Exact two-phase primal simplex over the rationals. Free variables are
// split into nonnegative pairs; pivoting follows Bland's rule (entering:
// lowest eligible column, leaving: lowest basic index among minimum ratios),
// which terminates on degenerate problems and makes the returned vertex a
// deterministic function of the input ordering.
LpResult lp_minimize(const LinSystem& sys, const Vec& c);
LpResult lp_maximize(const LinSystem& sys, const Vec& c);

// Feasibility probe: a point of the system, or nullopt.
std::optional<Vec> lp_any_point(const LinSystem& sys);

}  // namespace lipsel
