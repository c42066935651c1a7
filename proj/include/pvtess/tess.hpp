#ifndef PVTESS_TESS_HPP
#define PVTESS_TESS_HPP

// Delaunay tessellation and its Voronoi dual on either plane. The
// triangulation is computed in chart coordinates by incremental
// Bowyer-Watson insertion with ghost triangles covering the outside of the
// hull, a point-location walk, and filtered/exact predicates. Because the
// Poincare disk is conformal and its metric circles are chart circles, the
// chart triangulation restricted to certified vertices is exactly the
// hyperbolic Delaunay graph; certification marks the vertices whose full
// star of witness disks fits inside the sample window.
//
// Exactly cocircular quadruples (they arise in lattice-like inputs, not in
// Poisson samples) are canonicalized after construction by flipping every
// cocircular convex quad to the lexicographically smallest diagonal, making
// the output independent of insertion order.

#include <algorithm>
#include <array>
#include <limits>
#include <vector>

#include "pvtess/errors.hpp"
#include "pvtess/geometry.hpp"
#include "pvtess/pointproc.hpp"
#include "pvtess/predicates.hpp"

namespace pvtess {

struct Triangle {
  std::array<int, 3> v{-1, -1, -1};  // counterclockwise
  std::array<int, 3> n{-1, -1, -1};  // n[k] across edge (v[k+1], v[k+2])
};

struct EmbeddedNetwork {
  Space space = Space::euclidean;
  double intensity = 1.0;
  double window_radius = 0.0;
  bool palm = false;

  std::vector<Point> vertex;                // marks, input order preserved
  std::vector<std::pair<int, int>> edges;   // first < second
  std::vector<Point> edge_midpoint;         // geodesic midpoints
  std::vector<std::vector<int>> adj;        // sorted neighbor lists
  std::vector<char> hull;                   // vertex on the chart convex hull
  std::vector<char> certified;

  // Dual payload: solid triangles only, -1 neighbor across hull edges.
  std::vector<Triangle> tris;
  std::vector<Circumcircle> tri_circum;     // metric witness disk per triangle
  std::vector<int> vertex_tri;              // an incident triangle, -1 if none

  std::size_t vertex_count() const { return vertex.size(); }
  std::size_t edge_count() const { return edges.size(); }
};

namespace delaunay_detail {

inline constexpr int kGhost = -1;

// Position of the Hilbert curve for spatial insertion order.
inline std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y) {
  std::uint64_t d = 0;
  for (std::uint32_t s = 1u << 15; s > 0; s >>= 1) {
    std::uint32_t rx = (x & s) ? 1 : 0;
    std::uint32_t ry = (y & s) ? 1 : 0;
    d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
    if (ry == 0) {  // rotate quadrant
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
  }
  return d;
}

inline std::vector<int> spatial_order(const std::vector<Point>& pts) {
  double lo_x = std::numeric_limits<double>::max(), lo_y = lo_x;
  double hi_x = std::numeric_limits<double>::lowest(), hi_y = hi_x;
  for (const Point& p : pts) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  double sx = (hi_x > lo_x) ? 65535.0 / (hi_x - lo_x) : 0.0;
  double sy = (hi_y > lo_y) ? 65535.0 / (hi_y - lo_y) : 0.0;
  std::vector<std::pair<std::uint64_t, int>> keyed(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto gx = static_cast<std::uint32_t>((pts[i].x - lo_x) * sx);
    auto gy = static_cast<std::uint32_t>((pts[i].y - lo_y) * sy);
    keyed[i] = {hilbert_index(gx, gy), static_cast<int>(i)};
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> order(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) order[i] = keyed[i].second;
  return order;
}

inline void require_distinct(const std::vector<Point>& pts) {
  std::vector<int> order(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return pts[a].x < pts[b].x; });
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (pts[order[j]].x - pts[order[i]].x >= kCoincidentTol) break;
      if (std::hypot(pts[order[i]].x - pts[order[j]].x,
                     pts[order[i]].y - pts[order[j]].y) < kCoincidentTol)
        throw std::invalid_argument("coincident input points");
    }
  }
}

// Strict betweenness of p on the segment (a,b), all three collinear.
inline bool strictly_between(Point a, Point b, Point p) {
  if (std::fabs(b.x - a.x) >= std::fabs(b.y - a.y)) {
    double lo = std::min(a.x, b.x), hi = std::max(a.x, b.x);
    return lo < p.x && p.x < hi;
  }
  double lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
  return lo < p.y && p.y < hi;
}

class Builder {
 public:
  explicit Builder(const std::vector<Point>& pts) : pts_(pts) {}

  // Returns false if every point is collinear (no triangulation exists).
  bool run() {
    std::vector<int> order = spatial_order(pts_);
    // Initial triangle: the first two points plus the first point breaking
    // the line through them.
    int i0 = order[0], i1 = order[1];
    int apex_pos = -1, apex_sign = 0;
    for (std::size_t k = 2; k < order.size(); ++k) {
      apex_sign = orient2d(pts_[i0], pts_[i1], pts_[order[k]]);
      if (apex_sign != 0) {
        apex_pos = static_cast<int>(k);
        break;
      }
    }
    if (apex_pos < 0) return false;
    if (apex_sign < 0) std::swap(i0, i1);
    make_seed(i0, i1, order[apex_pos]);
    for (std::size_t k = 2; k < order.size(); ++k) {
      if (static_cast<int>(k) == apex_pos) continue;
      insert(order[k]);
    }
    canonicalize_cocircular();
    return true;
  }

  const std::vector<Triangle>& triangles() const { return tris_; }
  bool alive(int t) const { return tris_[t].v[0] != -2; }
  static bool is_ghost(const Triangle& t) { return t.v[2] == kGhost; }

 private:
  void make_seed(int a, int b, int c) {
    // Solid (a,b,c) counterclockwise plus three ghosts; ghost triangles
    // store their hull edge reversed, i.e. (y, x, kGhost) when the solid
    // side lies left of x -> y, which keeps every shared edge oppositely
    // directed in its two triangles.
    tris_.assign(4, Triangle{});
    tris_[0].v = {a, b, c};
    tris_[0].n = {2, 3, 1};      // ghosts of edges (b,c), (c,a), (a,b)
    tris_[1].v = {b, a, kGhost};  // hull edge a -> b
    tris_[2].v = {c, b, kGhost};  // hull edge b -> c
    tris_[3].v = {a, c, kGhost};  // hull edge c -> a
    tris_[1].n = {3, 2, 0};
    tris_[2].n = {1, 3, 0};
    tris_[3].n = {2, 1, 0};
    stamp_.assign(4, 0);
    last_solid_ = 0;
  }

  bool in_cavity(int t, Point p) const {
    const Triangle& tr = tris_[t];
    if (is_ghost(tr)) {
      Point x = pts_[tr.v[1]], y = pts_[tr.v[0]];  // hull edge x -> y, solid left
      int o = orient2d(x, y, p);
      if (o < 0) return true;
      if (o > 0) return false;
      return strictly_between(x, y, p);
    }
    return incircle(pts_[tr.v[0]], pts_[tr.v[1]], pts_[tr.v[2]], p) > 0;
  }

  int locate(Point p) {
    int t = last_solid_;
    std::size_t guard = 4 * tris_.size() + 64;
    while (guard--) {
      const Triangle& tr = tris_[t];
      if (is_ghost(tr)) {
        Point x = pts_[tr.v[1]], y = pts_[tr.v[0]];
        int o = orient2d(x, y, p);
        if (o < 0) return t;
        if (o > 0) {
          t = tr.n[2];  // back inside across the hull edge
          continue;
        }
        if (strictly_between(x, y, p)) return t;
        // Collinear beyond the edge: slide along the hull toward p.
        t = strictly_between(x, p, y) ? tr.n[1] : tr.n[0];
        continue;
      }
      int next = -1;
      for (int s = 0; s < 3; ++s) {
        int k = (walk_tiebreak_ + s) % 3;
        Point a = pts_[tr.v[(k + 1) % 3]], b = pts_[tr.v[(k + 2) % 3]];
        if (orient2d(a, b, p) < 0) {
          next = tr.n[k];
          break;
        }
      }
      ++walk_tiebreak_;
      if (next < 0) return t;  // inside the closed triangle
      t = next;
    }
    throw std::logic_error("point location walk failed to terminate");
  }

  void insert(int pid) {
    Point p = pts_[pid];
    int seed = locate(p);
    if (!in_cavity(seed, p)) {
      int found = -1;
      for (int k = 0; k < 3 && found < 0; ++k) {
        int nb = tris_[seed].n[k];
        if (nb >= 0 && in_cavity(nb, p)) found = nb;
      }
      if (found < 0) throw std::logic_error("insertion point has no cavity");
      seed = found;
    }

    // Grow the cavity; record the boundary as (outside triangle, edge slot).
    // Stamps memoize the in_cavity answer per triangle and insertion.
    std::uint64_t mark_in = 2 * ++epoch_, mark_out = mark_in + 1;
    cavity_.clear();
    boundary_.clear();
    bfs_.clear();
    bfs_.push_back(seed);
    stamp_[seed] = mark_in;
    while (!bfs_.empty()) {
      int t = bfs_.back();
      bfs_.pop_back();
      cavity_.push_back(t);
      for (int k = 0; k < 3; ++k) {
        int nb = tris_[t].n[k];
        std::uint64_t st = stamp_[nb];
        if (st == mark_in) continue;
        bool inside = (st != mark_out) && in_cavity(nb, p);
        if (inside) {
          stamp_[nb] = mark_in;
          bfs_.push_back(nb);
        } else {
          stamp_[nb] = mark_out;
          boundary_.push_back({nb, slot_of_neighbor(nb, t)});
        }
      }
    }

    // One new triangle per boundary edge, taken in the orientation of the
    // outside triangle so the replacement stays counterclockwise.
    fresh_.clear();
    for (auto [out, j] : boundary_) {
      int u = tris_[out].v[(j + 1) % 3];
      int w = tris_[out].v[(j + 2) % 3];
      int nt = alloc();
      tris_[nt].v = {pid, w, u};
      tris_[nt].n = {out, -1, -1};
      tris_[out].n[j] = nt;
      fresh_.push_back(nt);
    }
    // Wire the fan: across v[1] lies the fresh triangle whose v[2] equals
    // our v[2]'s partner; match edge endpoints directly.
    for (int a : fresh_) {
      for (int b : fresh_) {
        if (a == b) continue;
        if (tris_[a].v[2] == tris_[b].v[1]) tris_[a].n[1] = b;
        if (tris_[a].v[1] == tris_[b].v[2]) tris_[a].n[2] = b;
      }
    }
    int new_solid = -1;
    for (int t : fresh_) {
      if (tris_[t].n[1] < 0 || tris_[t].n[2] < 0)
        throw std::logic_error("cavity boundary failed to close");
      canonicalize_ghost(t);
      if (!is_ghost(tris_[t])) new_solid = t;
    }
    if (new_solid < 0) throw std::logic_error("insertion created no solid triangle");
    last_solid_ = new_solid;
    for (int t : cavity_) release(t);
  }

  int slot_of_neighbor(int t, int nb) const {
    for (int k = 0; k < 3; ++k)
      if (tris_[t].n[k] == nb) return k;
    throw std::logic_error("adjacent triangles disagree");
  }

  // Rotate ghost triangles so the placeholder sits at slot 2.
  void canonicalize_ghost(int t) {
    Triangle& tr = tris_[t];
    for (int step = 0; step < 2 && tr.v[2] != kGhost; ++step) {
      if (tr.v[0] != kGhost && tr.v[1] != kGhost) break;
      Triangle rot;
      rot.v = {tr.v[1], tr.v[2], tr.v[0]};
      rot.n = {tr.n[1], tr.n[2], tr.n[0]};
      tr = rot;
    }
  }

  int alloc() {
    if (!free_.empty()) {
      int t = free_.back();
      free_.pop_back();
      tris_[t] = Triangle{};
      return t;
    }
    tris_.push_back(Triangle{});
    stamp_.push_back(0);
    return static_cast<int>(tris_.size()) - 1;
  }

  void release(int t) {
    tris_[t].v = {-2, -2, -2};
    free_.push_back(t);
  }

  // Flip exactly cocircular convex quads until every interior diagonal is
  // the lexicographically smallest choice. Terminates because each flip
  // strictly decreases the multiset of diagonal keys.
  void canonicalize_cocircular() {
    auto point_less = [&](int a, int b) {
      return pts_[a].x < pts_[b].x || (pts_[a].x == pts_[b].x && pts_[a].y < pts_[b].y);
    };
    auto edge_key = [&](int a, int b) {
      if (point_less(b, a)) std::swap(a, b);
      return std::make_pair(std::pair<double, double>(pts_[a].x, pts_[a].y),
                            std::pair<double, double>(pts_[b].x, pts_[b].y));
    };
    std::vector<std::pair<int, int>> queue;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      if (!alive(static_cast<int>(t)) || is_ghost(tris_[t])) continue;
      for (int k = 0; k < 3; ++k) {
        int nb = tris_[t].n[k];
        if (nb >= 0 && !is_ghost(tris_[nb]) && nb > static_cast<int>(t))
          queue.push_back({static_cast<int>(t), k});
      }
    }
    std::size_t safety = 32 * (queue.size() + 8) + 4096;
    while (!queue.empty()) {
      if (safety-- == 0) throw std::logic_error("cocircular canonicalization did not settle");
      auto [t, k] = queue.back();
      queue.pop_back();
      if (!alive(t) || is_ghost(tris_[t])) continue;
      int o = tris_[t].n[k];
      if (o < 0 || !alive(o) || is_ghost(tris_[o])) continue;
      int j = slot_of_neighbor(o, t);
      int a = tris_[t].v[k];
      int u = tris_[t].v[(k + 1) % 3];
      int w = tris_[t].v[(k + 2) % 3];
      int b = tris_[o].v[j];
      if (incircle(pts_[tris_[t].v[0]], pts_[tris_[t].v[1]], pts_[tris_[t].v[2]], pts_[b]) != 0)
        continue;
      if (!(edge_key(a, b) < edge_key(u, w))) continue;
      // The quad cycle (a, u, b, w) must be strictly convex for the
      // alternative diagonal: u strictly right of a -> b, w strictly left.
      if (orient2d(pts_[a], pts_[b], pts_[u]) >= 0) continue;
      if (orient2d(pts_[a], pts_[b], pts_[w]) <= 0) continue;
      flip(t, k, o, j);
      for (int kk = 0; kk < 3; ++kk) {
        queue.push_back({t, kk});
        queue.push_back({o, kk});
      }
    }
  }

  // Replace diagonal (u,w) of the quad (a,u,b,w) by (a,b). Slots follow the
  // layout after rotating both triangles apex-first.
  void flip(int t, int k, int o, int j) {
    rotate_apex_first(t, k);
    rotate_apex_first(o, j);
    int a = tris_[t].v[0], u = tris_[t].v[1], w = tris_[t].v[2];
    int b = tris_[o].v[0];
    int tb = tris_[t].n[1], tc = tris_[t].n[2];
    int ob = tris_[o].n[1], oc = tris_[o].n[2];
    // t := (a, u, b), o := (b, w, a)
    tris_[t].v = {a, u, b};
    tris_[t].n = {ob, o, tc};
    tris_[o].v = {b, w, a};
    tris_[o].n = {tb, t, oc};
    repoint(ob, o, t);
    repoint(tb, t, o);
  }

  void rotate_apex_first(int t, int k) {
    Triangle& tr = tris_[t];
    for (int step = 0; step < k; ++step) {
      Triangle rot;
      rot.v = {tr.v[1], tr.v[2], tr.v[0]};
      rot.n = {tr.n[1], tr.n[2], tr.n[0]};
      tr = rot;
    }
  }

  void repoint(int t, int from, int to) {
    if (t < 0) return;
    for (int k = 0; k < 3; ++k)
      if (tris_[t].n[k] == from) {
        tris_[t].n[k] = to;
        return;
      }
    throw std::logic_error("neighbor relink failed");
  }

  const std::vector<Point>& pts_;
  std::vector<Triangle> tris_;
  std::vector<std::uint64_t> stamp_;
  std::vector<int> free_;
  std::vector<int> cavity_, bfs_, fresh_;
  std::vector<std::pair<int, int>> boundary_;
  std::uint64_t epoch_ = 0;
  int last_solid_ = 0;
  unsigned walk_tiebreak_ = 0;
};

}  // namespace delaunay_detail

// Certification: a vertex is certified when it is interior to the hull and
// the witness disk of every incident triangle lies inside the open sample
// window, so its star (hence its Voronoi cell and degree) could not change
// if the process were extended beyond the window.
inline void certify(EmbeddedNetwork& net) {
  net.certified.assign(net.vertex_count(), 0);
  Point origin{0.0, 0.0};
  std::vector<char> tri_ok(net.tris.size(), 0);
  for (std::size_t t = 0; t < net.tris.size(); ++t) {
    const Circumcircle& cc = net.tri_circum[t];
    tri_ok[t] = cc.status == CircumStatus::ok &&
                dist(net.space, origin, cc.center) + cc.radius < net.window_radius;
  }
  for (std::size_t v = 0; v < net.vertex_count(); ++v) {
    if (net.hull[v] || net.vertex_tri[v] < 0) continue;
    bool ok = true;
    int start = net.vertex_tri[v], t = start;
    do {
      if (!tri_ok[t]) {
        ok = false;
        break;
      }
      int i = 0;
      while (net.tris[t].v[i] != static_cast<int>(v)) ++i;
      t = net.tris[t].n[(i + 1) % 3];
      if (t < 0) {
        ok = false;  // reached the hull; should not happen off-hull
        break;
      }
    } while (t != start);
    net.certified[v] = ok;
  }
}

inline EmbeddedNetwork delaunay(const PointSample& sample) {
  const std::vector<Point>& pts = sample.points;
  for (const Point& p : pts) require_chart(sample.space, p);
  delaunay_detail::require_distinct(pts);

  EmbeddedNetwork net;
  net.space = sample.space;
  net.intensity = sample.intensity;
  net.window_radius = sample.window_radius;
  net.palm = sample.palm;
  net.vertex = pts;
  net.hull.assign(pts.size(), 1);
  net.vertex_tri.assign(pts.size(), -1);

  auto finish_edges = [&] {
    std::sort(net.edges.begin(), net.edges.end());
    net.adj.assign(pts.size(), {});
    for (auto [a, b] : net.edges) {
      net.adj[a].push_back(b);
      net.adj[b].push_back(a);
    }
    for (auto& nb : net.adj) std::sort(nb.begin(), nb.end());
    net.edge_midpoint.reserve(net.edges.size());
    for (auto [a, b] : net.edges)
      net.edge_midpoint.push_back(geodesic_midpoint(net.space, pts[a], pts[b]));
    certify(net);
  };

  if (pts.size() < 2) {
    finish_edges();
    return net;
  }
  if (pts.size() == 2) {
    net.edges.push_back({0, 1});
    finish_edges();
    return net;
  }

  delaunay_detail::Builder builder(pts);
  if (!builder.run()) {
    // All points collinear: the nearest-neighbor structure degenerates into
    // a path along the line.
    std::vector<int> order(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) order[i] = static_cast<int>(i);
    Point a = pts[order[0]], b = pts[order[1]];
    double dx = b.x - a.x, dy = b.y - a.y;
    std::sort(order.begin(), order.end(), [&](int i, int j) {
      return pts[i].x * dx + pts[i].y * dy < pts[j].x * dx + pts[j].y * dy;
    });
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      int u = order[i], v = order[i + 1];
      net.edges.push_back({std::min(u, v), std::max(u, v)});
    }
    finish_edges();
    return net;
  }

  // Compact live solid triangles, collect hull flags from ghosts.
  const auto& raw = builder.triangles();
  std::vector<int> remap(raw.size(), -1);
  net.hull.assign(pts.size(), 0);
  for (std::size_t t = 0; t < raw.size(); ++t) {
    if (!builder.alive(static_cast<int>(t))) continue;
    if (delaunay_detail::Builder::is_ghost(raw[t])) {
      net.hull[raw[t].v[0]] = 1;
      net.hull[raw[t].v[1]] = 1;
      continue;
    }
    remap[t] = static_cast<int>(net.tris.size());
    net.tris.push_back(raw[t]);
  }
  for (Triangle& tr : net.tris) {
    for (int k = 0; k < 3; ++k) {
      int nb = tr.n[k];
      tr.n[k] = (nb >= 0 && remap[nb] >= 0) ? remap[nb] : -1;
    }
  }
  net.tri_circum.reserve(net.tris.size());
  for (std::size_t t = 0; t < net.tris.size(); ++t) {
    const Triangle& tr = net.tris[t];
    for (int k = 0; k < 3; ++k)
      if (net.vertex_tri[tr.v[k]] < 0) net.vertex_tri[tr.v[k]] = static_cast<int>(t);
    net.tri_circum.push_back(
        circumcircle(net.space, pts[tr.v[0]], pts[tr.v[1]], pts[tr.v[2]]));
    for (int k = 0; k < 3; ++k) {
      int a = tr.v[(k + 1) % 3], b = tr.v[(k + 2) % 3];
      if (tr.n[k] < 0 || tr.n[k] > static_cast<int>(t))
        net.edges.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  finish_edges();
  return net;
}

// --- Voronoi dual -----------------------------------------------------------

struct VoronoiCell {
  int nucleus = -1;
  bool bounded = false;
  bool certified = false;
  GeodesicPolygon boundary;  // counterclockwise corners; empty if unbounded
  double area = 0.0;
};

inline std::vector<VoronoiCell> voronoi_cells(const EmbeddedNetwork& net) {
  std::vector<VoronoiCell> cells(net.vertex_count());
  for (std::size_t v = 0; v < net.vertex_count(); ++v) {
    VoronoiCell& cell = cells[v];
    cell.nucleus = static_cast<int>(v);
    if (net.hull[v] || net.vertex_tri[v] < 0) continue;
    bool ok = true;
    std::vector<Point> corners;
    int start = net.vertex_tri[v], t = start;
    do {
      if (net.tri_circum[t].status != CircumStatus::ok) {
        ok = false;
        break;
      }
      corners.push_back(net.tri_circum[t].center);
      int i = 0;
      while (net.tris[t].v[i] != static_cast<int>(v)) ++i;
      t = net.tris[t].n[(i + 1) % 3];
      if (t < 0) {
        ok = false;
        break;
      }
    } while (t != start);
    if (!ok) continue;
    // Merge numerically coincident corners from near-cocircular witnesses.
    std::vector<Point> merged;
    for (const Point& c : corners) {
      if (!merged.empty() && std::hypot(c.x - merged.back().x, c.y - merged.back().y) < kCoincidentTol)
        continue;
      merged.push_back(c);
    }
    while (merged.size() > 1 &&
           std::hypot(merged.front().x - merged.back().x,
                      merged.front().y - merged.back().y) < kCoincidentTol)
      merged.pop_back();
    if (merged.size() < 3) continue;
    cell.bounded = true;
    cell.boundary = GeodesicPolygon{net.space, std::move(merged)};
    cell.area = polygon_area(cell.boundary);
    cell.certified = net.certified[v] != 0;
  }
  return cells;
}

// --- moment estimators ------------------------------------------------------

// Mean of degree^k over certified vertices.
inline double degree_moment(const EmbeddedNetwork& net, int k) {
  if (k < 1) throw std::invalid_argument("moment order must be at least 1");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t v = 0; v < net.vertex_count(); ++v) {
    if (!net.certified[v]) continue;
    double d = static_cast<double>(net.adj[v].size());
    sum += std::pow(d, k);
    ++count;
  }
  if (count == 0) throw rejection_error("no certified vertex in the window");
  return sum / static_cast<double>(count);
}

// Mean of cell area^k over certified cells.
inline double cell_volume_moment(const EmbeddedNetwork& net, int k) {
  if (k < 1) throw std::invalid_argument("moment order must be at least 1");
  double sum = 0.0;
  std::size_t count = 0;
  for (const VoronoiCell& cell : voronoi_cells(net)) {
    if (!cell.certified) continue;
    sum += std::pow(cell.area, k);
    ++count;
  }
  if (count == 0) throw rejection_error("no certified cell in the window");
  return sum / static_cast<double>(count);
}

// Network assembled from explicit vertices and edges (tests, fixtures).
inline EmbeddedNetwork make_network(Space space, std::vector<Point> vertices,
                                    const std::vector<std::pair<int, int>>& edge_list,
                                    double window_radius = 1e9) {
  EmbeddedNetwork net;
  net.space = space;
  net.window_radius = window_radius;
  net.vertex = std::move(vertices);
  net.hull.assign(net.vertex.size(), 0);
  net.certified.assign(net.vertex.size(), 1);
  net.vertex_tri.assign(net.vertex.size(), -1);
  net.adj.assign(net.vertex.size(), {});
  for (auto [a, b] : edge_list) {
    net.edges.push_back({std::min(a, b), std::max(a, b)});
    net.adj[a].push_back(b);
    net.adj[b].push_back(a);
  }
  std::sort(net.edges.begin(), net.edges.end());
  for (auto& nb : net.adj) std::sort(nb.begin(), nb.end());
  for (auto [a, b] : net.edges)
    net.edge_midpoint.push_back(geodesic_midpoint(space, net.vertex[a], net.vertex[b]));
  return net;
}

}  // namespace pvtess

#endif  // PVTESS_TESS_HPP
