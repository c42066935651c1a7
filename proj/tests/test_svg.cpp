#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include "pvtess/geometry.hpp"
#include "pvtess/rng.hpp"
#include "pvtess/svg.hpp"

using namespace pvtess;
using Catch::Approx;

namespace {

Point random_disk_point(Rng& rng, double rmax) {
  double r = rmax * std::sqrt(rng.uniform());
  double phi = rng.angle();
  return {r * std::cos(phi), r * std::sin(phi)};
}

// Point at the angular midpoint of the arc from a to b, following arc.ccw.
Point arc_midpoint(const DiskArc& arc, Point a, Point b) {
  double ta = std::atan2(a.y - arc.center.y, a.x - arc.center.x);
  double tb = std::atan2(b.y - arc.center.y, b.x - arc.center.x);
  double two_pi = 2.0 * std::numbers::pi;
  double sweep = arc.ccw ? std::fmod(tb - ta + two_pi, two_pi)
                         : -std::fmod(ta - tb + two_pi, two_pi);
  double tm = ta + 0.5 * sweep;
  return {arc.center.x + arc.radius * std::cos(tm),
          arc.center.y + arc.radius * std::sin(tm)};
}

}  // namespace

TEST_CASE("geodesic arcs are orthocircles through their endpoints") {
  Rng rng(41);
  for (int it = 0; it < 200; ++it) {
    Point a = random_disk_point(rng, 0.95);
    Point b = random_disk_point(rng, 0.95);
    DiskArc arc = hyperbolic_geodesic(a, b);
    if (arc.straight) continue;
    CHECK(norm2(arc.center) - arc.radius * arc.radius == Approx(1.0).margin(1e-7));
    CHECK(std::hypot(a.x - arc.center.x, a.y - arc.center.y) == Approx(arc.radius).margin(1e-9));
    CHECK(std::hypot(b.x - arc.center.x, b.y - arc.center.y) == Approx(arc.radius).margin(1e-9));
  }
}

TEST_CASE("arcs follow the hyperbolic geodesic through the disk") {
  Rng rng(42);
  int curved = 0;
  for (int it = 0; it < 200; ++it) {
    Point a = random_disk_point(rng, 0.9);
    Point b = random_disk_point(rng, 0.9);
    DiskArc arc = hyperbolic_geodesic(a, b);
    if (arc.straight) continue;
    ++curved;
    Point m = arc_midpoint(arc, a, b);
    REQUIRE(norm2(m) < 1.0);
    double via = dist(Space::hyperbolic, a, m) + dist(Space::hyperbolic, m, b);
    CHECK(via == Approx(dist(Space::hyperbolic, a, b)).epsilon(1e-8).margin(1e-9));
  }
  CHECK(curved > 150);
}

TEST_CASE("chords through the origin render straight") {
  CHECK(hyperbolic_geodesic({0.3, 0.2}, {-0.6, -0.4}).straight);
  CHECK(hyperbolic_geodesic({0.5, 0.0}, {0.1, 0.0}).straight);
  CHECK_FALSE(hyperbolic_geodesic({0.5, 0.0}, {0.0, 0.5}).straight);
}

TEST_CASE("figure panels are deterministic and carry metadata") {
  FigurePanel p1 = gaf_figure_panel(60, 9);
  FigurePanel p2 = gaf_figure_panel(60, 9);
  CHECK(p1.panel.body() == p2.panel.body());
  CHECK(p1.meta.dump() == p2.meta.dump());
  CHECK(p1.meta.at("degree") == 60);
  CHECK(p1.meta.at("expected_points") == Approx(30.0));
  int points = p1.meta.at("points").get<int>();
  CHECK(points >= 0);
  CHECK(points <= 60);

  std::string svg = figure_svg({p1.panel}, p1.meta);
  CHECK(svg.rfind("<svg", 0) == 0);
  auto open = svg.find("<metadata id=\"pvtess\">");
  auto close = svg.find("</metadata>");
  REQUIRE(open != std::string::npos);
  REQUIRE(close != std::string::npos);
  auto start = open + std::string("<metadata id=\"pvtess\">").size();
  Json parsed = Json::parse(svg.substr(start, close - start));
  CHECK(parsed.at("degree") == 60);
}

TEST_CASE("matched point process panel uses the matched window") {
  FigurePanel p = pv_figure_panel(40, 3);
  CHECK(p.meta.at("lambda").get<double>() ==
        Approx(1.0 / (4.0 * std::numbers::pi)).epsilon(1e-12));
  CHECK(p.meta.at("window_radius").get<double>() == Approx(std::acosh(41.0)).epsilon(1e-12));
  CHECK(p.meta.at("expected_points").get<double>() == Approx(20.0).epsilon(1e-9));
}
