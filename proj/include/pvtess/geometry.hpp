#ifndef PVTESS_GEOMETRY_HPP
#define PVTESS_GEOMETRY_HPP

// Metric geometry on the two constant-curvature planes used throughout:
// the Euclidean plane and the hyperbolic plane of curvature -1 in the
// Poincare disk chart. Hyperbolic points are chart coordinates in the open
// unit disk; every distance, radius and area returned here is metric.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace pvtess {

enum class Space { euclidean, hyperbolic };

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using cplx = std::complex<double>;

inline cplx to_cplx(Point p) { return {p.x, p.y}; }
inline Point to_point(cplx z) { return {z.real(), z.imag()}; }

// Disk points must keep 1-|z|^2 above this guard; closer to the rim the
// chart loses all precision and callers are required to stay away.
inline constexpr double kChartGuard = 1e-12;

// Chart distance below which two input points are treated as coincident.
inline constexpr double kCoincidentTol = 1e-12;

// Hard cap on hyperbolic window radii; beyond this the rim guard above
// starts to bite for points near the window boundary.
inline constexpr double kMaxHyperbolicWindow = 12.0;

inline double norm2(Point p) { return p.x * p.x + p.y * p.y; }

inline bool in_chart(Space space, Point p) {
  return space == Space::euclidean || 1.0 - norm2(p) > kChartGuard;
}

inline void require_chart(Space space, Point p) {
  if (!in_chart(space, p))
    throw std::domain_error("point violates the Poincare chart guard");
}

// acosh(1+t) for t >= 0 without cancellation near t = 0.
inline double acosh1p(double t) {
  return std::log1p(t + std::sqrt(t * (t + 2.0)));
}

inline double dist(Space space, Point p, Point q) {
  if (space == Space::euclidean) return std::hypot(p.x - q.x, p.y - q.y);
  require_chart(space, p);
  require_chart(space, q);
  double dd = (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y);
  return acosh1p(2.0 * dd / ((1.0 - norm2(p)) * (1.0 - norm2(q))));
}

// Area of a metric ball of radius r.
inline double ball_volume(Space space, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("ball radius must be nonnegative");
  if (space == Space::euclidean) return std::numbers::pi * r * r;
  double sh = std::sinh(0.5 * r);
  return 4.0 * std::numbers::pi * sh * sh;  // 2 pi (cosh r - 1)
}

inline double inverse_ball_volume(Space space, double a) {
  if (!(a >= 0.0)) throw std::invalid_argument("ball volume must be nonnegative");
  if (space == Space::euclidean) return std::sqrt(a / std::numbers::pi);
  return acosh1p(a / (2.0 * std::numbers::pi));
}

// Mobius map of the disk taking a to the origin: z -> (z-a)/(1-conj(a)z).
inline cplx mobius_to_zero(cplx a, cplx z) {
  return (z - a) / (1.0 - std::conj(a) * z);
}

inline Point geodesic_midpoint(Space space, Point p, Point q) {
  if (space == Space::euclidean)
    return {0.5 * (p.x + q.x), 0.5 * (p.y + q.y)};
  require_chart(space, p);
  require_chart(space, q);
  cplx a = to_cplx(p);
  cplx w = mobius_to_zero(a, to_cplx(q));
  double t = std::abs(w);
  if (t == 0.0) return p;
  // Halve the radial coordinate: tanh(artanh(t)/2) = t / (1 + sqrt(1-t^2)).
  double h = t / (1.0 + std::sqrt(std::max(0.0, 1.0 - t * t)));
  cplx m = w * (h / t);
  // Undo the translation: inverse of z -> (z-a)/(1-conj(a)z) is w -> (w+a)/(1+conj(a)w).
  return to_point((m + a) / (1.0 + std::conj(a) * m));
}

// --- isometries -----------------------------------------------------------

// Euclidean: z -> e^{i angle} (flip ? conj z : z) + anchor.
// Hyperbolic: z -> e^{i angle} (w - anchor) / (1 - conj(anchor) w) with
// w = flip ? conj z : z. The anchor is the point sent to the origin.
struct Isometry {
  Space space = Space::euclidean;
  double angle = 0.0;
  Point anchor;
  bool flip = false;
};

inline Point apply(const Isometry& g, Point p) {
  cplx z = to_cplx(p);
  if (g.flip) z = std::conj(z);
  cplx rot = std::polar(1.0, g.angle);
  if (g.space == Space::euclidean) return to_point(rot * z + to_cplx(g.anchor));
  require_chart(g.space, p);
  return to_point(rot * mobius_to_zero(to_cplx(g.anchor), z));
}

inline Isometry inverse(const Isometry& g) {
  cplx a = to_cplx(g.anchor);
  cplx rot = std::polar(1.0, g.angle);
  if (g.space == Space::euclidean) {
    if (!g.flip) return {g.space, -g.angle, to_point(-a / rot), false};
    return {g.space, g.angle, to_point(-rot * std::conj(a)), true};
  }
  if (!g.flip) return {g.space, -g.angle, to_point(-rot * a), false};
  return {g.space, g.angle, to_point(-std::conj(rot * a)), true};
}

inline Isometry isometry_to_origin(Space space, Point p) {
  if (space == Space::euclidean) return {space, 0.0, {-p.x, -p.y}, false};
  require_chart(space, p);
  return {space, 0.0, p, false};
}

// Translation moving the origin distance d along direction phi.
inline Isometry translation(Space space, double phi, double d) {
  if (!(d >= 0.0)) throw std::invalid_argument("translation distance must be nonnegative");
  cplx dir = std::polar(1.0, phi);
  if (space == Space::euclidean)
    return {space, 0.0, to_point(d * dir), false};
  return {space, 0.0, to_point(-std::tanh(0.5 * d) * dir), false};
}

// --- circumcircles --------------------------------------------------------

// collinear: the three points admit no circumscribed circle.
// unbounded: the chart circumdisk is not contained in the unit disk, so the
// hyperbolic witness region is not a metric ball.
enum class CircumStatus { ok, collinear, unbounded };

struct Circumcircle {
  CircumStatus status = CircumStatus::collinear;
  Point center;    // metric center (chart coordinates)
  double radius = 0.0;  // metric radius
};

// Euclidean circumcenter of a non-degenerate triangle.
inline bool chart_circumcircle(Point a, Point b, Point c, Point& center, double& radius) {
  double abx = b.x - a.x, aby = b.y - a.y;
  double acx = c.x - a.x, acy = c.y - a.y;
  double d = 2.0 * (abx * acy - aby * acx);
  if (d == 0.0) return false;
  double ab2 = abx * abx + aby * aby;
  double ac2 = acx * acx + acy * acy;
  double ux = (acy * ab2 - aby * ac2) / d;
  double uy = (abx * ac2 - acx * ab2) / d;
  center = {a.x + ux, a.y + uy};
  radius = std::hypot(ux, uy);
  return true;
}

inline Circumcircle circumcircle(Space space, Point a, Point b, Point c) {
  Point cc;
  double r;
  if (!chart_circumcircle(a, b, c, cc, r)) return {CircumStatus::collinear, {}, 0.0};
  if (space == Space::euclidean) return {CircumStatus::ok, cc, r};
  require_chart(space, a);
  require_chart(space, b);
  require_chart(space, c);
  double m = std::hypot(cc.x, cc.y);
  if (m + r >= 1.0) return {CircumStatus::unbounded, {}, 0.0};
  // Along the diameter through the origin the chart coordinate t has metric
  // coordinate s(t) = 2 artanh t; the metric center and radius come from the
  // midpoint and half-length of [s(m-r), s(m+r)].
  double s1 = 2.0 * std::atanh(m - r);
  double s2 = 2.0 * std::atanh(m + r);
  double sm = 0.5 * (s1 + s2);
  double rho = 0.5 * (s2 - s1);
  double tm = std::tanh(0.5 * sm);
  Point center = (m > 0.0) ? Point{cc.x * (tm / m), cc.y * (tm / m)} : Point{0.0, 0.0};
  if (!in_chart(space, center)) return {CircumStatus::unbounded, {}, 0.0};
  return {CircumStatus::ok, center, rho};
}

// --- Klein chart ----------------------------------------------------------

// In the Klein chart hyperbolic geodesics and Voronoi cell walls are straight
// lines, which makes half-plane clipping exact in structure. Conversion from
// the Poincare chart and back:
inline Point to_klein(Point p) {
  double s = 2.0 / (1.0 + norm2(p));
  return {s * p.x, s * p.y};
}

inline Point from_klein(Point k) {
  double n = norm2(k);
  if (n >= 1.0) throw std::domain_error("Klein point outside the unit disk");
  double s = 1.0 / (1.0 + std::sqrt(1.0 - n));
  return {s * k.x, s * k.y};
}

// Metric distance from the origin of a Klein point (|k| = tanh of it).
inline double klein_radius_to_dist(double t) { return std::atanh(t); }

// --- geodesic polygons ----------------------------------------------------

struct GeodesicPolygon {
  Space space = Space::euclidean;
  std::vector<Point> vertices;  // counterclockwise
};

// Signed area of the geodesic triangle a,b,c, positive when counterclockwise.
// The hyperbolic sign comes from the Klein chart, where geodesics are straight
// so the vertex triple orientation is the metric one. (The cross product in
// the conformal chart can flip for thin triangles hugging the disk boundary.)
inline double triangle_area(Space space, Point a, Point b, Point c) {
  if (space == Space::euclidean)
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
  Point ka = to_klein(a), kb = to_klein(b), kc = to_klein(c);
  double cross = (kb.x - ka.x) * (kc.y - ka.y) - (kb.y - ka.y) * (kc.x - ka.x);
  double la = dist(space, b, c);
  double lb = dist(space, a, c);
  double lc = dist(space, a, b);
  if (la < kCoincidentTol || lb < kCoincidentTol || lc < kCoincidentTol) return 0.0;
  auto angle = [](double adj1, double adj2, double opp) {
    double v = (std::cosh(adj1) * std::cosh(adj2) - std::cosh(opp)) /
               (std::sinh(adj1) * std::sinh(adj2));
    return std::acos(std::clamp(v, -1.0, 1.0));
  };
  double defect = std::numbers::pi - angle(lb, lc, la) - angle(la, lc, lb) - angle(la, lb, lc);
  return std::copysign(std::max(0.0, defect), cross);
}

// Area of a simple counterclockwise geodesic polygon, fanned from its first
// vertex. Throws on fewer than three vertices or coincident consecutive ones.
inline double polygon_area(const GeodesicPolygon& poly) {
  const auto& v = poly.vertices;
  if (v.size() < 3) throw std::invalid_argument("degenerate polygon: fewer than three vertices");
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& p = v[i];
    const Point& q = v[(i + 1) % v.size()];
    if (std::hypot(p.x - q.x, p.y - q.y) < kCoincidentTol)
      throw std::invalid_argument("degenerate polygon: repeated vertex");
  }
  double area = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    area += triangle_area(poly.space, v[0], v[i], v[i + 1]);
  return area;
}

}  // namespace pvtess

#endif  // PVTESS_GEOMETRY_HPP
