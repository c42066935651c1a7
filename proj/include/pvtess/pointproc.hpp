#ifndef PVTESS_POINTPROC_HPP
#define PVTESS_POINTPROC_HPP

// Poisson point processes on metric disks, in two flavors: a batch sampler
// (count then i.i.d. locations) and a radial stream that emits points in
// order of increasing distance from the origin. Both realize the same law;
// the stream exists so consumers can stop as soon as geometry allows.

#include <algorithm>
#include <limits>
#include <vector>

#include "pvtess/geometry.hpp"
#include "pvtess/polyroots.hpp"
#include "pvtess/rng.hpp"

namespace pvtess {

struct PointSample {
  Space space = Space::euclidean;
  double intensity = 1.0;
  double window_radius = 1.0;
  bool palm = false;  // origin prepended as points[0]
  std::vector<Point> points;
};

namespace detail {

inline void validate_window(Space space, double intensity, double window_radius) {
  if (!(intensity > 0.0)) throw std::invalid_argument("intensity must be positive");
  if (!(window_radius > 0.0)) throw std::invalid_argument("window radius must be positive");
  if (space == Space::hyperbolic && window_radius > kMaxHyperbolicWindow)
    throw std::invalid_argument("hyperbolic window radius exceeds the chart cap");
}

// Uniform point in B(o, R) with respect to the metric area measure.
inline Point uniform_in_ball(Space space, double window_radius, Rng& rng) {
  double u = rng.uniform();
  double r;
  if (space == Space::euclidean) {
    r = window_radius * std::sqrt(u);
  } else {
    double sh = std::sinh(0.5 * window_radius);
    r = acosh1p(u * (2.0 * sh * sh));  // u * (cosh R - 1)
  }
  double t = (space == Space::euclidean) ? r : std::tanh(0.5 * r);
  double a = rng.angle();
  return {t * std::cos(a), t * std::sin(a)};
}

// Enforce pairwise chart distance >= kCoincidentTol by redrawing offenders.
// Collisions have probability zero in exact arithmetic and survive here only
// through double rounding, so the loop terminates immediately in practice.
inline void deduplicate(std::vector<Point>& pts, Space space, double window_radius, Rng& rng) {
  for (;;) {
    std::vector<int> order(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return pts[a].x < pts[b].x; });
    std::vector<int> redraw;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        if (pts[order[j]].x - pts[order[i]].x >= kCoincidentTol) break;
        if (std::hypot(pts[order[i]].x - pts[order[j]].x,
                       pts[order[i]].y - pts[order[j]].y) < kCoincidentTol)
          redraw.push_back(std::max(order[i], order[j]));
      }
    }
    if (redraw.empty()) return;
    for (int idx : redraw) pts[idx] = uniform_in_ball(space, window_radius, rng);
  }
}

}  // namespace detail

// Homogeneous Poisson process of the given intensity on B(o, window_radius).
inline PointSample sample_poisson(Space space, double intensity, double window_radius,
                                  Rng& rng, bool palm = false) {
  detail::validate_window(space, intensity, window_radius);
  std::uint64_t n = rng.poisson(intensity * ball_volume(space, window_radius));
  PointSample sample{space, intensity, window_radius, palm, {}};
  sample.points.reserve(n + (palm ? 1 : 0));
  if (palm) sample.points.push_back({0.0, 0.0});
  for (std::uint64_t i = 0; i < n; ++i)
    sample.points.push_back(detail::uniform_in_ball(space, window_radius, rng));
  // Dedup keeps the smaller index of a colliding pair, so the palm origin at
  // index 0 is never moved.
  detail::deduplicate(sample.points, space, window_radius, rng);
  return sample;
}

inline PointSample sample_poisson(Space space, double intensity, double window_radius,
                                  std::uint64_t seed, bool palm = false) {
  Rng rng = derive_stream(seed, 0);
  return sample_poisson(space, intensity, window_radius, rng, palm);
}

// Prepend the origin to an existing sample (Palm conditioning). Errors if a
// point already sits within the coincidence tolerance of the origin.
inline PointSample palmify(PointSample sample) {
  if (sample.palm) throw std::invalid_argument("sample is already palm-conditioned");
  for (const Point& p : sample.points)
    if (std::hypot(p.x, p.y) < kCoincidentTol)
      throw std::invalid_argument("palm origin collides with an existing point");
  sample.palm = true;
  sample.points.insert(sample.points.begin(), Point{0.0, 0.0});
  return sample;
}

// Emits the points of a Poisson process sorted by metric distance from the
// origin: cumulative ball areas are a unit-rate Poisson process scaled by the
// intensity, angles are independent uniforms.
class RadialPoissonStream {
 public:
  RadialPoissonStream(Space space, double intensity, Rng rng,
                      double max_radius = std::numeric_limits<double>::infinity())
      : space_(space), intensity_(intensity), max_radius_(max_radius), rng_(rng) {
    if (!(intensity > 0.0)) throw std::invalid_argument("intensity must be positive");
    if (space == Space::hyperbolic)
      max_radius_ = std::min(max_radius_, kMaxHyperbolicWindow);
    generate();
  }

  // Distance from the origin of the next point, +inf once past max_radius.
  double pending_radius() const { return pending_radius_; }

  bool exhausted() const { return pending_radius_ == std::numeric_limits<double>::infinity(); }

  Point take() {
    if (exhausted()) throw std::logic_error("radial stream past its maximum radius");
    Point p = pending_;
    generate();
    return p;
  }

 private:
  void generate() {
    area_ += rng_.exponential(intensity_);
    double r = inverse_ball_volume(space_, area_);
    double a = rng_.angle();
    if (r > max_radius_) {
      pending_radius_ = std::numeric_limits<double>::infinity();
      return;
    }
    pending_radius_ = r;
    double t = (space_ == Space::euclidean) ? r : std::tanh(0.5 * r);
    pending_ = {t * std::cos(a), t * std::sin(a)};
  }

  Space space_;
  double intensity_;
  double max_radius_;
  double area_ = 0.0;
  double pending_radius_ = 0.0;
  Point pending_;
  Rng rng_;
};

// Kac polynomial with i.i.d. standard complex Gaussian coefficients; the
// roots inside the unit disk, read as chart points of the hyperbolic plane,
// approximate the zero set of the hyperbolic Gaussian analytic function.
// Reversing the coefficient order inverts every root across the unit circle
// and leaves the coefficient law unchanged, so the expected in-disk count is
// exactly degree/2. Away from the disk boundary the intensity tends to
// 1/(4 pi) per unit hyperbolic area as the degree grows.
inline PointSample sample_kac_gaf(int degree, std::uint64_t seed) {
  if (degree < 1) throw std::invalid_argument("degree must be at least 1");
  Rng rng = derive_stream(seed, 0, 2);
  ComplexPolynomial p;
  p.coeff.resize(static_cast<std::size_t>(degree) + 1);
  const double comp = std::sqrt(0.5);  // component sd of a standard complex Gaussian
  for (Complex& c : p.coeff) {
    double re = comp * rng.normal();
    double im = comp * rng.normal();
    c = Complex(re, im);
  }
  PointSample sample{Space::hyperbolic, 1.0 / (4.0 * std::numbers::pi), 0.0, false, {}};
  for (const Complex& z : poly_roots(p)) {
    double ps = std::norm(z);
    if (!(ps < 1.0)) continue;
    sample.points.push_back({z.real(), z.imag()});
    // Metric radius computed directly so roots hugging the unit circle do not
    // trip the chart-precision guard; the window only records their reach.
    double denom = std::max(1.0 - ps, 1e-300);
    sample.window_radius = std::max(sample.window_radius, acosh1p(2.0 * ps / denom));
  }
  return sample;
}

struct MatchedPoissonParams {
  double intensity;
  double window_radius;
};

// Poisson parameters whose expected window count matches the expected
// in-disk root count of a degree-n Kac polynomial: lambda = 1/(4 pi), the
// GAF zero intensity, and lambda * f(R) = n/2, i.e. R = arccosh(1 + n).
inline MatchedPoissonParams matched_poisson_params(int degree) {
  if (degree < 2) throw std::invalid_argument("degree must be at least 2");
  double lambda = 1.0 / (4.0 * std::numbers::pi);
  double radius = inverse_ball_volume(Space::hyperbolic, (degree / 2.0) / lambda);
  return {lambda, radius};
}

}  // namespace pvtess

#endif  // PVTESS_POINTPROC_HPP
