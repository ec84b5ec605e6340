#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lipsel/error.hpp"
#include "lipsel/linalg.hpp"
#include "lipsel/lp.hpp"
#include "lipsel/rational.hpp"

using namespace lipsel;

TEST_CASE("rational parsing round trip") {
  CHECK(rat_from_string("3/6") == Rat(1, 2));
  CHECK(rat_from_string("-4/2") == Rat(-2));
  CHECK(rat_from_string("0") == 0);
  CHECK(rat_to_string(Rat(7, 3)) == "7/3");
  CHECK(rat_to_string(Rat(-8, 4)) == "-2");
  CHECK(rat_to_string(rat_from_string("22/7")) == "22/7");
}

TEST_CASE("rational parsing rejects junk") {
  CHECK_THROWS_AS(rat_from_string("1/0"), ValidationError);
  CHECK_THROWS_AS(rat_from_string(""), ValidationError);
  CHECK_THROWS_AS(rat_from_string("1.5"), ValidationError);
  CHECK_THROWS_AS(rat_from_string("1/ 2"), ValidationError);
  CHECK_THROWS_AS(rat_from_string("+3"), ValidationError);
  CHECK_THROWS_AS(rat_from_string("inf"), ValidationError);
}

TEST_CASE("distance arithmetic absorbs infinity") {
  Dist inf = Dist::infinity();
  Dist two = Dist::of(Rat(2));
  CHECK((inf + two) == inf);
  CHECK((two + two) == Dist::of(Rat(4)));
  CHECK(dist_min(inf, two) == two);
  CHECK(dist_max(inf, two) == inf);
  CHECK(two < inf);
  CHECK(!(inf < inf));
  CHECK(dist_from_string("inf") == inf);
  CHECK(dist_to_string(inf) == "inf");
  CHECK(dist_scale(inf, Rat(3)) == inf);
  CHECK_THROWS_AS(dist_scale(inf, Rat(0)), ValidationError);
}

TEST_CASE("rank and nullspace") {
  Mat m = {{Rat(1), Rat(2), Rat(3)}, {Rat(2), Rat(4), Rat(6)}, {Rat(0), Rat(1), Rat(1)}};
  CHECK(rank_of(m) == 2);
  auto ns = nullspace(m, 3);
  REQUIRE(ns.size() == 1);
  // Kernel direction satisfies both independent rows.
  CHECK(dot(ns[0], m[0]) == 0);
  CHECK(dot(ns[0], m[2]) == 0);
}

TEST_CASE("solve and invert") {
  Mat a = {{Rat(2), Rat(1)}, {Rat(1), Rat(3)}};
  auto x = solve_unique(a, {Rat(5), Rat(10)});
  REQUIRE(x.has_value());
  CHECK((*x)[0] == 1);
  CHECK((*x)[1] == 3);
  auto inv = invert(a);
  REQUIRE(inv.has_value());
  CHECK(det(a) == 5);
  // A * A^{-1} = identity.
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Rat s = 0;
      for (int k = 0; k < 2; ++k) s += a[i][k] * (*inv)[k][j];
      CHECK(s == (i == j ? 1 : 0));
    }

  Mat sing = {{Rat(1), Rat(2)}, {Rat(2), Rat(4)}};
  CHECK(!invert(sing).has_value());
  CHECK(det(sing) == 0);
}

TEST_CASE("lp: bounded minimum in 2d") {
  // min x + y subject to x >= 1 (as -x <= -1), y >= 2, x + y <= 10.
  LinSystem sys;
  sys.nvars = 2;
  sys.rows.push_back({{Rat(-1), Rat(0)}, Rel::le, Rat(-1)});
  sys.rows.push_back({{Rat(0), Rat(-1)}, Rel::le, Rat(-2)});
  sys.rows.push_back({{Rat(1), Rat(1)}, Rel::le, Rat(10)});
  auto r = lp_minimize(sys, {Rat(1), Rat(1)});
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.obj == 3);
  CHECK(r.x[0] == 1);
  CHECK(r.x[1] == 2);
}

TEST_CASE("lp: equality constraints and negative coordinates") {
  // min y with x + y = 1/2 and x <= -3.
  LinSystem sys;
  sys.nvars = 2;
  sys.rows.push_back({{Rat(1), Rat(1)}, Rel::eq, Rat(1, 2)});
  sys.rows.push_back({{Rat(1), Rat(0)}, Rel::le, Rat(-3)});
  auto r = lp_maximize(sys, {Rat(0), Rat(1)});
  // y = 1/2 - x is maximized by pushing x down; x is unbounded below.
  CHECK(r.status == LpStatus::unbounded);

  auto rmin = lp_minimize(sys, {Rat(0), Rat(1)});
  // Minimizing y pushes x up against x <= -3, so y = 1/2 + 3.
  REQUIRE(rmin.status == LpStatus::optimal);
  CHECK(rmin.obj == Rat(7, 2));
  CHECK(rmin.x[0] == -3);
}

TEST_CASE("lp: infeasible system") {
  LinSystem sys;
  sys.nvars = 1;
  sys.rows.push_back({{Rat(1)}, Rel::le, Rat(0)});
  sys.rows.push_back({{Rat(-1)}, Rel::le, Rat(-1)});
  auto r = lp_minimize(sys, {Rat(0)});
  CHECK(r.status == LpStatus::infeasible);
  CHECK(!lp_any_point(sys).has_value());
}

TEST_CASE("lp: degenerate vertex terminates") {
  // Four constraints meeting at the origin; Bland's rule must not cycle.
  LinSystem sys;
  sys.nvars = 2;
  sys.rows.push_back({{Rat(1), Rat(0)}, Rel::le, Rat(0)});
  sys.rows.push_back({{Rat(0), Rat(1)}, Rel::le, Rat(0)});
  sys.rows.push_back({{Rat(1), Rat(1)}, Rel::le, Rat(0)});
  sys.rows.push_back({{Rat(1), Rat(-1)}, Rel::le, Rat(0)});
  auto r = lp_maximize(sys, {Rat(1), Rat(1)});
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.obj == 0);
}

TEST_CASE("lp: zero variables edge case") {
  LinSystem sys;
  sys.nvars = 0;
  auto p = lp_any_point(sys);
  CHECK(p.has_value());
}
