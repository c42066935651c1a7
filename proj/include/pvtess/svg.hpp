#ifndef PVTESS_SVG_HPP
#define PVTESS_SVG_HPP

// Poincare-disk figures as SVG. Hyperbolic geodesics are arcs of circles
// orthogonal to the unit circle, which SVG renders natively, so the output
// is exact up to the arc flattening of the viewer.

#include <cmath>
#include <string>
#include <vector>

#include "pvtess/io.hpp"
#include "pvtess/pointproc.hpp"
#include "pvtess/tess.hpp"

namespace pvtess {

struct DiskArc {
  bool straight = false;  // chord through the origin: geodesic is a diameter
  Point center{0.0, 0.0};
  double radius = 0.0;
  bool ccw = false;  // arc runs counterclockwise from a to b in chart coords
};

// Geodesic through two chart points: the circle with 2 c.a = |a|^2 + 1 and
// 2 c.b = |b|^2 + 1 meets the unit circle at right angles (|c|^2 = r^2 + 1).
// The in-disk arc always subtends less than pi, so it is the minor arc.
inline DiskArc hyperbolic_geodesic(Point a, Point b) {
  double det = 2.0 * (a.x * b.y - a.y * b.x);
  DiskArc arc;
  double na = a.x * a.x + a.y * a.y + 1.0;
  double nb = b.x * b.x + b.y * b.y + 1.0;
  if (std::abs(det) < 1e-7 * std::max(na, nb)) {
    arc.straight = true;
    return arc;
  }
  arc.center = Point{(na * b.y - nb * a.y) / det, (nb * a.x - na * b.x) / det};
  arc.radius = std::sqrt(std::max(0.0,
      arc.center.x * arc.center.x + arc.center.y * arc.center.y - 1.0));
  double cross = (a.x - arc.center.x) * (b.y - arc.center.y) -
                 (a.y - arc.center.y) * (b.x - arc.center.x);
  arc.ccw = cross > 0.0;
  return arc;
}

// One square panel mapping the closed unit disk to pixels; y flips so chart
// coordinates keep their mathematical orientation.
class DiskPanel {
 public:
  explicit DiskPanel(double size = 520.0, double margin = 10.0)
      : size_(size), scale_(size / 2.0 - margin) {
    body_ += "<circle cx=\"" + px(0.0) + "\" cy=\"" + py(0.0) + "\" r=\"" +
             format_double(scale_) +
             "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";
  }

  double size() const { return size_; }

  void point(Point p, double radius_px, const std::string& fill) {
    body_ += "<circle cx=\"" + px(p.x) + "\" cy=\"" + py(p.y) + "\" r=\"" +
             format_double(radius_px) + "\" fill=\"" + fill + "\"/>\n";
  }

  void geodesic(Point a, Point b, const std::string& stroke, double width_px) {
    DiskArc arc = hyperbolic_geodesic(a, b);
    std::string d = "M " + px(a.x) + ' ' + py(a.y) + ' ';
    if (arc.straight) {
      d += "L " + px(b.x) + ' ' + py(b.y);
    } else {
      std::string r = format_double(arc.radius * scale_);
      // Chart counterclockwise turns into sweep 0 after the y flip.
      d += "A " + r + ' ' + r + " 0 0 " + (arc.ccw ? '0' : '1') + ' ' + px(b.x) +
           ' ' + py(b.y);
    }
    body_ += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + stroke +
             "\" stroke-width=\"" + format_double(width_px) + "\"/>\n";
  }

  void walls(const GeodesicPolygon& poly, const std::string& stroke, double width_px) {
    std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i)
      geodesic(poly.vertices[i], poly.vertices[(i + 1) % n], stroke, width_px);
  }

  const std::string& body() const { return body_; }

 private:
  std::string px(double x) const { return format_double(size_ / 2.0 + scale_ * x); }
  std::string py(double y) const { return format_double(size_ / 2.0 - scale_ * y); }

  double size_;
  double scale_;
  std::string body_;
};

// Panels side by side plus a machine-readable metadata block.
inline std::string figure_svg(const std::vector<DiskPanel>& panels, const Json& metadata) {
  double h = 0.0, w = 0.0;
  for (const DiskPanel& p : panels) {
    h = std::max(h, p.size());
    w += p.size();
  }
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    format_double(w) + "\" height=\"" + format_double(h) +
                    "\" viewBox=\"0 0 " + format_double(w) + ' ' + format_double(h) +
                    "\">\n";
  svg += "<metadata id=\"pvtess\">" + metadata.dump() + "</metadata>\n";
  double off = 0.0;
  for (const DiskPanel& p : panels) {
    svg += "<g transform=\"translate(" + format_double(off) + ",0)\">\n";
    svg += p.body();
    svg += "</g>\n";
    off += p.size();
  }
  svg += "</svg>\n";
  return svg;
}

namespace svg_detail {

// Delaunay edges and bounded Voronoi walls of the sample, plus every point
// as a dot. Points beyond the chart cap keep their dots but stay out of the
// tessellation; with fewer than three tessellated points only dots remain.
inline void draw_tessellated(DiskPanel& panel, const PointSample& sample, Json& meta) {
  PointSample clipped = sample;
  clipped.points.clear();
  double cap = std::min(sample.window_radius, kMaxHyperbolicWindow - 0.1);
  double chart_cap = std::tanh(0.5 * cap);
  for (const Point& p : sample.points)
    if (std::hypot(p.x, p.y) <= chart_cap) clipped.points.push_back(p);
  clipped.window_radius = cap;

  std::size_t edge_count = 0, wall_count = 0;
  if (clipped.points.size() >= 3) {
    EmbeddedNetwork net = delaunay(clipped);
    for (const auto& [u, v] : net.edges)
      panel.geodesic(net.vertex[u], net.vertex[v], "#9ecae1", 0.7);
    for (const VoronoiCell& cell : voronoi_cells(net)) {
      if (!cell.bounded) continue;
      panel.walls(cell.boundary, "#555555", 0.9);
      ++wall_count;
    }
    edge_count = net.edge_count();
  }
  for (const Point& p : sample.points) panel.point(p, 2.0, "#b30000");
  meta["points"] = sample.points.size();
  meta["tessellated_points"] = clipped.points.size();
  meta["edges"] = edge_count;
  meta["bounded_cells"] = wall_count;
}

}  // namespace svg_detail

struct FigurePanel {
  DiskPanel panel;
  Json meta;
};

// Roots of a Kac polynomial inside the unit disk, with their tessellation.
inline FigurePanel gaf_figure_panel(int degree, std::uint64_t seed) {
  FigurePanel out;
  PointSample sample = sample_kac_gaf(degree, seed);
  out.meta["kind"] = "gaf";
  out.meta["degree"] = degree;
  out.meta["seed"] = seed;
  out.meta["expected_points"] = degree / 2.0;
  svg_detail::draw_tessellated(out.panel, sample, out.meta);
  return out;
}

// Poisson sample with the intensity and window matched to the GAF panel.
inline FigurePanel pv_figure_panel(int degree, std::uint64_t seed) {
  FigurePanel out;
  MatchedPoissonParams params = matched_poisson_params(degree);
  Rng rng = derive_stream(seed, 0, 4);
  PointSample sample =
      sample_poisson(Space::hyperbolic, params.intensity, params.window_radius, rng);
  out.meta["kind"] = "pv";
  out.meta["degree"] = degree;
  out.meta["seed"] = seed;
  out.meta["lambda"] = params.intensity;
  out.meta["window_radius"] = params.window_radius;
  out.meta["expected_points"] = params.intensity *
                                ball_volume(Space::hyperbolic, params.window_radius);
  svg_detail::draw_tessellated(out.panel, sample, out.meta);
  return out;
}

}  // namespace pvtess

#endif  // PVTESS_SVG_HPP
