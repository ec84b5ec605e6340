#include "lipsel/lp.hpp"

#include <cassert>
#include <stdexcept>

namespace lipsel {

namespace {

/*
 * Full-tableau two-phase simplex in standard form.
 *
 * Column layout: [0, n) x+ parts, [n, 2n) x- parts, then one slack per
 * inequality row, then one artificial per row that lacks an initial basic
 * slack, and finally the right-hand side. Rows are pre-negated so every
 * right-hand side is nonnegative.
 */
struct Tableau {
  size_t ncols = 0;           // structural + slack + artificial columns
  size_t rhs = 0;             // index of the rhs column
  std::vector<Vec> rows;      // constraint rows
  Vec cost;                   // reduced-cost row for the active phase
  Rat cost_rhs = 0;           // negated objective value
  std::vector<size_t> basis;  // basic column per row
  size_t first_artificial = 0;

  void pivot(size_t r, size_t c) {
    Rat inv = 1 / rows[r][c];
    for (auto& v : rows[r]) v *= inv;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rat f = rows[i][c];
      for (size_t j = 0; j <= rhs; ++j) rows[i][j] -= f * rows[r][j];
    }
    if (cost[c] != 0) {
      Rat f = cost[c];
      for (size_t j = 0; j < ncols; ++j) cost[j] -= f * rows[r][j];
      cost_rhs -= f * rows[r][rhs];
    }
    basis[r] = c;
  }

  // Runs simplex until optimal or unbounded. Columns >= col_limit are
  // excluded from entering (used to bar artificials in phase 2).
  LpStatus iterate(size_t col_limit) {
    for (;;) {
      size_t enter = col_limit;
      for (size_t j = 0; j < col_limit; ++j)
        if (cost[j] < 0) {
          enter = j;
          break;
        }
      if (enter == col_limit) return LpStatus::optimal;

      size_t leave = rows.size();
      Rat best_ratio = 0;
      for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][enter] <= 0) continue;
        Rat ratio = rows[i][rhs] / rows[i][enter];
        if (leave == rows.size() || ratio < best_ratio ||
            (ratio == best_ratio && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == rows.size()) return LpStatus::unbounded;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult lp_minimize(const LinSystem& sys, const Vec& c) {
  const size_t n = static_cast<size_t>(sys.nvars);
  assert(c.size() == n);

  size_t n_ineq = 0;
  for (const auto& row : sys.rows)
    if (row.rel == Rel::le) ++n_ineq;

  Tableau t;
  const size_t slack0 = 2 * n;
  t.first_artificial = slack0 + n_ineq;
  // Worst case every row needs an artificial.
  t.ncols = t.first_artificial + sys.rows.size();
  t.rhs = t.ncols;

  size_t slack_at = slack0;
  size_t art_at = t.first_artificial;
  for (const auto& row : sys.rows) {
    assert(row.a.size() == n);
    Vec r(t.ncols + 1, Rat(0));
    bool flip = row.b < 0;
    Rat sign = flip ? Rat(-1) : Rat(1);
    for (size_t j = 0; j < n; ++j) {
      r[j] = sign * row.a[j];
      r[n + j] = -sign * row.a[j];
    }
    r[t.rhs] = sign * row.b;
    bool needs_artificial = true;
    if (row.rel == Rel::le) {
      // The slack coefficient flips with the row; only a +1 slack can serve
      // as the initial basic variable.
      r[slack_at] = sign;
      if (!flip) {
        t.basis.push_back(slack_at);
        needs_artificial = false;
      }
      ++slack_at;
    }
    if (needs_artificial) {
      r[art_at] = 1;
      t.basis.push_back(art_at);
      ++art_at;
    }
    t.rows.push_back(std::move(r));
  }
  const size_t n_art = art_at - t.first_artificial;

  // Phase 1: minimize the sum of artificials. Reduced costs: c_j minus the
  // sum of rows whose basic variable is an artificial.
  t.cost.assign(t.ncols, Rat(0));
  t.cost_rhs = 0;
  if (n_art > 0) {
    for (size_t j = t.first_artificial; j < art_at; ++j) t.cost[j] = 1;
    for (size_t i = 0; i < t.rows.size(); ++i) {
      if (t.basis[i] < t.first_artificial) continue;
      for (size_t j = 0; j < t.ncols; ++j) t.cost[j] -= t.rows[i][j];
      t.cost_rhs -= t.rows[i][t.rhs];
    }
    LpStatus st = t.iterate(t.ncols);
    assert(st == LpStatus::optimal);
    (void)st;
    if (-t.cost_rhs > 0) return {LpStatus::infeasible, Rat(0), {}};
    // Drive leftover artificials out of the basis; a row with no usable
    // pivot is redundant and dropped.
    for (size_t i = 0; i < t.rows.size();) {
      if (t.basis[i] < t.first_artificial) {
        ++i;
        continue;
      }
      size_t piv = t.first_artificial;
      for (size_t j = 0; j < t.first_artificial; ++j)
        if (t.rows[i][j] != 0) {
          piv = j;
          break;
        }
      if (piv < t.first_artificial) {
        t.pivot(i, piv);
        ++i;
      } else {
        t.rows.erase(t.rows.begin() + static_cast<long>(i));
        t.basis.erase(t.basis.begin() + static_cast<long>(i));
      }
    }
  }

  // Phase 2: rebuild reduced costs for the real objective.
  t.cost.assign(t.ncols, Rat(0));
  t.cost_rhs = 0;
  for (size_t j = 0; j < n; ++j) {
    t.cost[j] = c[j];
    t.cost[n + j] = -c[j];
  }
  for (size_t i = 0; i < t.rows.size(); ++i) {
    size_t b = t.basis[i];
    Rat cb = b < n ? c[b] : (b < 2 * n ? -c[b - n] : Rat(0));
    if (cb == 0) continue;
    for (size_t j = 0; j < t.ncols; ++j) t.cost[j] -= cb * t.rows[i][j];
    t.cost_rhs -= cb * t.rows[i][t.rhs];
  }
  LpStatus st = t.iterate(t.first_artificial);
  if (st == LpStatus::unbounded) return {LpStatus::unbounded, Rat(0), {}};

  Vec full(t.ncols, Rat(0));
  for (size_t i = 0; i < t.rows.size(); ++i) full[t.basis[i]] = t.rows[i][t.rhs];
  Vec x(n);
  for (size_t j = 0; j < n; ++j) x[j] = full[j] - full[n + j];
  return {LpStatus::optimal, dot(c, x), std::move(x)};
}

LpResult lp_maximize(const LinSystem& sys, const Vec& c) {
  Vec neg(c.size());
  for (size_t i = 0; i < c.size(); ++i) neg[i] = -c[i];
  LpResult r = lp_minimize(sys, neg);
  r.obj = -r.obj;
  return r;
}

std::optional<Vec> lp_any_point(const LinSystem& sys) {
  Vec zero(static_cast<size_t>(sys.nvars), Rat(0));
  LpResult r = lp_minimize(sys, zero);
  if (r.status != LpStatus::optimal) return std::nullopt;
  return r.x;
}

}  // namespace lipsel
