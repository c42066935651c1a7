#ifndef PVTESS_CELLCLIP_HPP
#define PVTESS_CELLCLIP_HPP

// Voronoi cell of the origin by incremental half-plane clipping. In the
// Klein chart hyperbolic bisectors are straight lines, so one convex-polygon
// clipper serves both spaces: the bisector between the origin and a point p
// with hyperboloid lift (X, X0) bounds {z : z . X <= X0 - 1} in Klein
// coordinates, and {z : 2 z . p <= |p|^2} in the Euclidean case.
//
// Fed points in order of increasing distance, clipping may stop once half
// the next distance exceeds the farthest remaining corner; later points
// cannot cut the cell. The clipper starts from a large regular polygon whose
// inradius bounds the representable cell; cells reaching it are flagged.

#include <vector>

#include "pvtess/geometry.hpp"

namespace pvtess {

struct OriginCell {
  std::vector<Point> corners;   // chart coordinates, counterclockwise
  std::vector<int> wall_ids;    // wall_ids[i] generated corners[i] -> corners[i+1]
  double max_corner_dist = 0.0; // metric distance of the farthest corner
  bool hit_bound = false;       // some wall is still the artificial start polygon
};

class OriginCellClipper {
 public:
  static constexpr int kBoundaryWall = -1;

  // The start polygon is a regular 128-gon containing B(o, inradius). In the
  // hyperbolic plane the inradius of any polygon with this few sides is
  // capped (ideal vertices still leave the incircle finite), so the request
  // may be lowered; guaranteed_inradius() reports what was achieved.
  OriginCellClipper(Space space, double inradius) : space_(space) {
    constexpr int n = 128;
    const double slack = std::cos(std::numbers::pi / n);
    double rv;  // clip-chart radius of the start polygon's vertices
    if (space == Space::euclidean) {
      rv = inradius / slack;
      guaranteed_inradius_ = inradius;
    } else {
      rv = std::tanh(inradius) / slack;
      if (rv >= 1.0 - 1e-9) rv = 1.0 - 1e-9;
      guaranteed_inradius_ = std::atanh(rv * slack);
    }
    verts_.reserve(n + 8);
    ids_.assign(n, kBoundaryWall);
    for (int i = 0; i < n; ++i) {
      double a = 2.0 * std::numbers::pi * (i + 0.5) / n;
      verts_.push_back({rv * std::cos(a), rv * std::sin(a)});
    }
    update_max_corner();
  }

  double guaranteed_inradius() const { return guaranteed_inradius_; }

  // Whether a point at metric distance d from the origin can still cut.
  bool relevant(double d) const { return 0.5 * d < max_corner_dist_ + 1e-12; }

  double max_corner_dist() const { return max_corner_dist_; }

  // Clip by the bisector between the origin and p (chart coordinates).
  void add(Point p, int id) {
    double nx, ny, c;
    if (space_ == Space::euclidean) {
      nx = 2.0 * p.x;
      ny = 2.0 * p.y;
      c = norm2(p);
    } else {
      require_chart(space_, p);
      double s = 2.0 / (1.0 - norm2(p));
      nx = s * p.x;
      ny = s * p.y;
      c = s * norm2(p);  // X0 - 1 = 2|p|^2 / (1-|p|^2)
    }
    if (!(c > 0.0)) throw std::invalid_argument("bisector against the origin itself");
    clip(nx, ny, c, id);
    update_max_corner();
  }

  bool hit_bound() const {
    for (int id : ids_)
      if (id == kBoundaryWall) return true;
    return false;
  }

  OriginCell finish() const {
    // Merge coincident consecutive corners; a zero-length wall contributes
    // no neighbor, its id is dropped and the previous corner inherits the
    // following wall.
    std::vector<Point> cv;
    std::vector<int> ci;
    for (std::size_t i = 0; i < verts_.size(); ++i) {
      if (!cv.empty() && coincident(cv.back(), verts_[i])) {
        ci.back() = ids_[i];
        continue;
      }
      cv.push_back(verts_[i]);
      ci.push_back(ids_[i]);
    }
    while (cv.size() > 1 && coincident(cv.front(), cv.back())) {
      cv.pop_back();
      ci.pop_back();
    }
    OriginCell cell;
    cell.corners.reserve(cv.size());
    for (const Point& v : cv)
      cell.corners.push_back(space_ == Space::euclidean ? v : from_klein(v));
    cell.wall_ids = std::move(ci);
    cell.max_corner_dist = max_corner_dist_;
    for (int id : cell.wall_ids)
      if (id == kBoundaryWall) cell.hit_bound = true;
    return cell;
  }

 private:
  static bool coincident(Point a, Point b) {
    return std::fabs(a.x - b.x) < 1e-15 && std::fabs(a.y - b.y) < 1e-15;
  }

  void clip(double nx, double ny, double c, int id) {
    std::size_t m = verts_.size();
    side_.resize(m);
    bool any_out = false;
    for (std::size_t i = 0; i < m; ++i) {
      side_[i] = nx * verts_[i].x + ny * verts_[i].y - c;
      any_out |= side_[i] > 0.0;
    }
    if (!any_out) return;
    std::vector<Point> nv;
    std::vector<int> ni;
    nv.reserve(m + 2);
    ni.reserve(m + 2);
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t j = (i + 1) % m;
      bool in_i = side_[i] <= 0.0, in_j = side_[j] <= 0.0;
      if (in_i) {
        nv.push_back(verts_[i]);
        ni.push_back(ids_[i]);
      }
      if (in_i != in_j) {
        double t = side_[i] / (side_[i] - side_[j]);
        nv.push_back({verts_[i].x + t * (verts_[j].x - verts_[i].x),
                      verts_[i].y + t * (verts_[j].y - verts_[i].y)});
        // Leaving: the wall from the crossing onward is the new bisector.
        // Entering: the remainder of the old edge continues.
        ni.push_back(in_i ? id : ids_[i]);
      }
    }
    verts_ = std::move(nv);
    ids_ = std::move(ni);
  }

  void update_max_corner() {
    double worst = 0.0;
    for (const Point& v : verts_) worst = std::max(worst, std::hypot(v.x, v.y));
    max_corner_dist_ =
        (space_ == Space::euclidean) ? worst : std::atanh(std::min(worst, 1.0 - 1e-16));
  }

  Space space_;
  double guaranteed_inradius_;
  double max_corner_dist_ = 0.0;
  std::vector<Point> verts_;  // clip chart: Klein for hyperbolic
  std::vector<int> ids_;
  std::vector<double> side_;
};

}  // namespace pvtess

#endif  // PVTESS_CELLCLIP_HPP
