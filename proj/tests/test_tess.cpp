#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "brute_delaunay.hpp"
#include "pvtess/cellclip.hpp"
#include "pvtess/tess.hpp"

using namespace pvtess;
using Catch::Approx;

namespace {

PointSample fixed_sample(Space space, std::vector<Point> pts, double window = 100.0) {
  PointSample s;
  s.space = space;
  s.intensity = 1.0;
  s.window_radius = window;
  s.points = std::move(pts);
  return s;
}

std::set<std::pair<int, int>> edge_set(const EmbeddedNetwork& net) {
  return {net.edges.begin(), net.edges.end()};
}

// Edge set keyed by coordinates, for comparing across input permutations.
std::set<std::pair<std::pair<double, double>, std::pair<double, double>>> geometric_edges(
    const EmbeddedNetwork& net) {
  std::set<std::pair<std::pair<double, double>, std::pair<double, double>>> out;
  for (auto [a, b] : net.edges) {
    std::pair<double, double> pa{net.vertex[a].x, net.vertex[a].y};
    std::pair<double, double> pb{net.vertex[b].x, net.vertex[b].y};
    if (pb < pa) std::swap(pa, pb);
    out.insert({pa, pb});
  }
  return out;
}

}  // namespace

TEST_CASE("degenerate inputs") {
  CHECK(delaunay(fixed_sample(Space::euclidean, {})).edge_count() == 0);
  CHECK(delaunay(fixed_sample(Space::euclidean, {{0, 0}})).edge_count() == 0);

  EmbeddedNetwork two = delaunay(fixed_sample(Space::euclidean, {{0, 0}, {1, 0}}));
  REQUIRE(two.edge_count() == 1);
  CHECK(two.edges[0] == std::pair<int, int>(0, 1));
  CHECK(two.edge_midpoint[0].x == Approx(0.5));
  CHECK(two.certified[0] == 0);

  EmbeddedNetwork tri = delaunay(fixed_sample(Space::euclidean, {{0, 0}, {1, 0}, {0, 1}}));
  CHECK(tri.edge_count() == 3);
  CHECK(tri.tris.size() == 1);
  CHECK(tri.hull == std::vector<char>{1, 1, 1});
}

TEST_CASE("coincident points are rejected") {
  CHECK_THROWS_AS(delaunay(fixed_sample(Space::euclidean, {{0, 0}, {1, 0}, {1.0, 5e-13}})),
                  std::invalid_argument);
}

TEST_CASE("collinear input degenerates to a path") {
  for (Space s : {Space::euclidean, Space::hyperbolic}) {
    std::vector<Point> pts{{0.4, 0.2}, {-0.4, -0.2}, {0.0, 0.0}, {0.2, 0.1}, {-0.2, -0.1}};
    EmbeddedNetwork net = delaunay(fixed_sample(s, pts, 10.0));
    REQUIRE(net.edge_count() == 4);
    // Path edges join neighbors along the line: each interior point has
    // degree 2, the extremes degree 1.
    std::set<std::pair<int, int>> expect{{0, 3}, {1, 4}, {2, 3}, {2, 4}};
    CHECK(edge_set(net) == expect);
    for (std::size_t v = 0; v < net.vertex_count(); ++v) {
      CHECK(net.hull[v] == 1);
      CHECK(net.certified[v] == 0);
    }
    CHECK(net.tris.empty());
  }
}

TEST_CASE("cocircular squares flip to the lexicographically smallest diagonal") {
  std::vector<Point> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  EmbeddedNetwork net = delaunay(fixed_sample(Space::euclidean, square));
  CHECK(net.edge_count() == 5);
  CHECK(edge_set(net).count({0, 2}) == 1);  // diagonal from (0,0) to (1,1)
  CHECK(edge_set(net).count({1, 3}) == 0);
}

TEST_CASE("grid triangulation is canonical regardless of insertion order") {
  std::vector<Point> base;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) base.push_back({static_cast<double>(i), static_cast<double>(j)});
  auto reference = geometric_edges(delaunay(fixed_sample(Space::euclidean, base)));
  // Every unit square must use its main diagonal (lower-left to upper-right).
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      std::pair<double, double> lo{static_cast<double>(i), static_cast<double>(j)};
      std::pair<double, double> hi{static_cast<double>(i + 1), static_cast<double>(j + 1)};
      std::pair<double, double> anti_lo{static_cast<double>(i), static_cast<double>(j + 1)};
      std::pair<double, double> anti_hi{static_cast<double>(i + 1), static_cast<double>(j)};
      CHECK(reference.count({lo, hi}) == 1);
      CHECK(reference.count({std::min(anti_lo, anti_hi), std::max(anti_lo, anti_hi)}) == 0);
    }
  }
  Rng rng(201);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Point> shuffled = base;
    for (std::size_t i = shuffled.size(); i > 1; --i)
      std::swap(shuffled[i - 1], shuffled[rng.next() % i]);
    CHECK(geometric_edges(delaunay(fixed_sample(Space::euclidean, shuffled))) == reference);
  }
}

TEST_CASE("matches the definitional oracle on small samples") {
  Rng rng(202);
  for (Space s : {Space::euclidean, Space::hyperbolic}) {
    for (int trial = 0; trial < 40; ++trial) {
      int n = 3 + static_cast<int>(rng.next() % 10);
      std::vector<Point> pts;
      pts.reserve(n);
      for (int i = 0; i < n; ++i)
        pts.push_back(detail::uniform_in_ball(s, s == Space::euclidean ? 5.0 : 4.0, rng));
      PointSample sample = fixed_sample(s, pts, 10.0);
      EmbeddedNetwork net = delaunay(sample);
      CHECK(edge_set(net) == testing::brute_delaunay_edges(pts));
    }
  }
}

TEST_CASE("structural invariants on Poisson samples") {
  for (auto [space, window] : {std::pair{Space::euclidean, 18.0}, {Space::hyperbolic, 7.5}}) {
    Rng rng = derive_stream(203, space == Space::euclidean ? 0 : 1);
    PointSample sample = sample_poisson(space, 1.0, window, rng);
    EmbeddedNetwork net = delaunay(sample);
    REQUIRE(net.vertex_count() > 300);

    // Euler relation for a triangulated disk and the handshake identity.
    long long V = static_cast<long long>(net.vertex_count());
    long long E = static_cast<long long>(net.edge_count());
    long long T = static_cast<long long>(net.tris.size());
    CHECK(V - E + T == 1);
    long long deg_sum = 0;
    for (const auto& nb : net.adj) deg_sum += static_cast<long long>(nb.size());
    CHECK(deg_sum == 2 * E);

    std::size_t hull_count = 0;
    for (char h : net.hull) hull_count += h;
    CHECK(hull_count >= 3);
    CHECK(2 * E == 3 * T + static_cast<long long>(hull_count));

    // Triangles are counterclockwise, adjacency is mutual, witness disks
    // pass through their three generators.
    for (std::size_t t = 0; t < net.tris.size(); ++t) {
      const Triangle& tr = net.tris[t];
      CHECK(orient2d(net.vertex[tr.v[0]], net.vertex[tr.v[1]], net.vertex[tr.v[2]]) > 0);
      for (int k = 0; k < 3; ++k) {
        int nb = tr.n[k];
        if (nb < 0) continue;
        bool mutual = false;
        for (int kk = 0; kk < 3; ++kk) mutual |= net.tris[nb].n[kk] == static_cast<int>(t);
        CHECK(mutual);
      }
      if (net.tri_circum[t].status == CircumStatus::ok) {
        for (int k = 0; k < 3; ++k) {
          CHECK(dist(net.space, net.tri_circum[t].center, net.vertex[tr.v[k]]) ==
                Approx(net.tri_circum[t].radius).margin(1e-7));
        }
      }
    }

    std::size_t certified_count = 0;
    for (std::size_t v = 0; v < net.vertex_count(); ++v) {
      if (!net.certified[v]) continue;
      ++certified_count;
      CHECK(net.hull[v] == 0);
    }
    CHECK(certified_count > 0);
    CHECK(certified_count < net.vertex_count());
  }
}

TEST_CASE("no foreign point lies strictly inside a witness disk") {
  Rng rng(204);
  for (Space s : {Space::euclidean, Space::hyperbolic}) {
    std::vector<Point> pts;
    for (int i = 0; i < 250; ++i)
      pts.push_back(detail::uniform_in_ball(s, s == Space::euclidean ? 8.0 : 5.0, rng));
    EmbeddedNetwork net = delaunay(fixed_sample(s, pts, 10.0));
    for (const Triangle& tr : net.tris) {
      for (int m = 0; m < static_cast<int>(pts.size()); ++m) {
        if (m == tr.v[0] || m == tr.v[1] || m == tr.v[2]) continue;
        CHECK(incircle(pts[tr.v[0]], pts[tr.v[1]], pts[tr.v[2]], pts[m]) <= 0);
      }
    }
  }
}

TEST_CASE("voronoi cells are convex, positive and contain their nucleus") {
  for (auto [space, window] : {std::pair{Space::euclidean, 15.0}, {Space::hyperbolic, 7.0}}) {
    Rng rng = derive_stream(205, space == Space::euclidean ? 0 : 1);
    PointSample sample = sample_poisson(space, 1.0, window, rng);
    EmbeddedNetwork net = delaunay(sample);
    auto cells = voronoi_cells(net);
    REQUIRE(cells.size() == net.vertex_count());
    std::size_t bounded = 0;
    double certified_area = 0.0;
    for (const VoronoiCell& cell : cells) {
      if (!cell.bounded) continue;
      ++bounded;
      CHECK(cell.area > 0.0);
      // Straight-walled chart: Klein for the hyperbolic plane. Convexity and
      // nucleus membership are linear tests there.
      std::vector<Point> k;
      for (const Point& c : cell.boundary.vertices)
        k.push_back(space == Space::euclidean ? c : to_klein(c));
      Point nu = space == Space::euclidean ? net.vertex[cell.nucleus]
                                           : to_klein(net.vertex[cell.nucleus]);
      for (std::size_t i = 0; i < k.size(); ++i) {
        const Point& a = k[i];
        const Point& b = k[(i + 1) % k.size()];
        double cross = (b.x - a.x) * (nu.y - a.y) - (b.y - a.y) * (nu.x - a.x);
        CHECK(cross > -1e-10);
      }
      if (cell.certified) certified_area += cell.area;
    }
    CHECK(bounded > 0);
    CHECK(certified_area > 0.0);
    CHECK(certified_area < ball_volume(space, window));
  }
}

TEST_CASE("root cell from half-plane clipping matches the dual cell") {
  int compared = 0;
  for (auto [space, window] : {std::pair{Space::euclidean, 8.0}, {Space::hyperbolic, 6.5}}) {
    for (int seedno = 0; seedno < 25; ++seedno) {
      Rng rng = derive_stream(206, seedno, space == Space::euclidean ? 0 : 1);
      PointSample sample = sample_poisson(space, 1.0, window, rng, true);
      EmbeddedNetwork net = delaunay(sample);
      auto cells = voronoi_cells(net);
      if (!cells[0].certified) continue;
      ++compared;

      // Feed the clipper the same points sorted by distance to the origin.
      std::vector<std::pair<double, int>> by_dist;
      for (std::size_t i = 1; i < sample.points.size(); ++i)
        by_dist.push_back({dist(space, {0, 0}, sample.points[i]), static_cast<int>(i)});
      std::sort(by_dist.begin(), by_dist.end());
      OriginCellClipper clipper(space, space == Space::euclidean ? window : 4.5);
      for (auto [d, idx] : by_dist) {
        if (!clipper.relevant(d)) break;
        clipper.add(sample.points[idx], idx);
      }
      OriginCell cell = clipper.finish();
      REQUIRE(!cell.hit_bound);

      // Same corners (up to rotation) and same walls as the dual cell.
      REQUIRE(cell.corners.size() == cells[0].boundary.vertices.size());
      auto key = [](const Point& p) { return std::pair<double, double>(p.x, p.y); };
      std::vector<std::pair<double, double>> a, b;
      for (const Point& p : cell.corners) a.push_back(key(p));
      for (const Point& p : cells[0].boundary.vertices) b.push_back(key(p));
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].first == Approx(b[i].first).margin(1e-8));
        CHECK(a[i].second == Approx(b[i].second).margin(1e-8));
      }
      double reach = 0.0;
      for (const Point& p : cells[0].boundary.vertices)
        reach = std::max(reach, dist(space, {0, 0}, p));
      CHECK(cell.max_corner_dist == Approx(reach).margin(1e-8));

      std::set<int> walls(cell.wall_ids.begin(), cell.wall_ids.end());
      std::set<int> neighbors(net.adj[0].begin(), net.adj[0].end());
      CHECK(walls == neighbors);
    }
  }
  REQUIRE(compared >= 20);
}

TEST_CASE("moment estimators") {
  Rng rng = derive_stream(207, 0);
  PointSample sample = sample_poisson(Space::hyperbolic, 1.0, 7.0, rng);
  EmbeddedNetwork net = delaunay(sample);
  double d1 = degree_moment(net, 1);
  CHECK(d1 > 5.5);
  CHECK(d1 < 8.5);
  CHECK(degree_moment(net, 2) >= d1 * d1);
  double v1 = cell_volume_moment(net, 1);
  CHECK(v1 > 0.5);
  CHECK(v1 < 2.0);

  EmbeddedNetwork tiny = delaunay(fixed_sample(Space::euclidean, {{0, 0}, {1, 0}, {0, 1}}, 5.0));
  CHECK_THROWS_AS(degree_moment(tiny, 1), rejection_error);
  CHECK_THROWS_AS(degree_moment(net, 0), std::invalid_argument);
}

TEST_CASE("make_network assembles fixtures") {
  EmbeddedNetwork net = make_network(Space::euclidean, {{0, 0}, {1, 0}, {2, 0}},
                                     {{0, 1}, {1, 2}});
  CHECK(net.adj[1] == std::vector<int>{0, 2});
  CHECK(net.edge_midpoint[0].x == Approx(0.5));
  CHECK(net.certified[0] == 1);
}
