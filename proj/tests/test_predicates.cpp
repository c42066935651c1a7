#include <catch2/catch_amalgamated.hpp>

#include "pvtess/predicates.hpp"
#include "pvtess/rng.hpp"

using namespace pvtess;

TEST_CASE("orientation signs") {
  CHECK(orient2d({0, 0}, {1, 0}, {0, 1}) == 1);
  CHECK(orient2d({0, 0}, {0, 1}, {1, 0}) == -1);
  CHECK(orient2d({0, 0}, {1, 1}, {2, 2}) == 0);
  CHECK(orient2d({0, 0}, {1, 1}, {2, 2.0000001}) == 1);
}

TEST_CASE("orientation decides correctly below the filter threshold") {
  // One ulp of vertical perturbation at x = 2: the determinant is ~4.4e-16,
  // under the static filter bound, so the exact path must answer.
  double up = 2.0 * (1.0 + 0x1.0p-52);
  CHECK(orient2d({0, 0}, {1, 1}, {2, up}) == 1);
  double dn = 2.0 * (1.0 - 0x1.0p-53);
  CHECK(orient2d({0, 0}, {1, 1}, {2, dn}) == -1);
  // Translation far from the origin shrinks the relative determinant further.
  double base = 1e8;
  CHECK(orient2d({base, base}, {base + 1, base + 1}, {base + 2, base + 2}) == 0);
}

TEST_CASE("incircle signs") {
  Point a{1, 0}, b{0, 1}, c{-1, 0};
  CHECK(incircle(a, b, c, {0.0, 0.0}) == 1);
  CHECK(incircle(a, b, c, {0.0, -1.0000001}) == -1);
  CHECK(incircle(a, b, c, {0.0, -0.9999999}) == 1);
}

TEST_CASE("incircle reports exact cocircularity") {
  // Integer points on x^2 + y^2 = 25 are exactly representable.
  Point p1{5, 0}, p2{3, 4}, p3{-4, 3}, p4{0, -5};
  CHECK(incircle(p1, p2, p3, p4) == 0);
  CHECK(incircle(p2, p3, p4, p1) == 0);
  // Scaling by a power of two stays exact.
  auto sc = [](Point p) { return Point{p.x * 0x1.0p-20, p.y * 0x1.0p-20}; };
  CHECK(incircle(sc(p1), sc(p2), sc(p3), sc(p4)) == 0);
  // One ulp off the circle flips to a definite sign.
  Point off{0, -5.0 * (1.0 - 0x1.0p-53)};
  CHECK(incircle(p1, p2, p3, off) == 1);
}

TEST_CASE("incircle antisymmetry and orientation dependence") {
  Rng rng(81);
  for (int it = 0; it < 200; ++it) {
    Point a{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Point b{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Point c{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Point d{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    int s = incircle(a, b, c, d);
    CHECK(incircle(b, a, c, d) == -s);
    CHECK(incircle(b, c, a, d) == s);
  }
}
