#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "pvtess/pointproc.hpp"
#include "pvtess/stats.hpp"

using namespace pvtess;
using Catch::Approx;

namespace {

// Expand leading * prod(z - r_i) by convolution. Long double keeps the
// oracle's own rounding well below the bound it checks: partial products
// swell before cross-cancelling, which costs several digits in plain double.
std::vector<Complex> from_roots(Complex leading, const std::vector<Complex>& roots) {
  using LC = std::complex<long double>;
  std::vector<LC> c{LC(leading.real(), leading.imag())};
  for (const Complex& rd : roots) {
    LC r(rd.real(), rd.imag());
    c.push_back(c.back());
    for (std::size_t k = c.size() - 2; k > 0; --k) c[k] = c[k - 1] - r * c[k];
    c[0] *= -r;
  }
  std::vector<Complex> out;
  for (const LC& v : c) out.push_back(Complex(static_cast<double>(v.real()),
                                              static_cast<double>(v.imag())));
  return out;
}

double backward_error(const ComplexPolynomial& p, Complex z) {
  Complex v = p.coeff.back();
  double e = std::abs(p.coeff.back());
  double s = std::abs(z);
  for (std::size_t k = p.coeff.size() - 1; k-- > 0;) {
    v = v * z + p.coeff[k];
    e = e * s + std::abs(p.coeff[k]);
  }
  return std::abs(v) / e;
}

}  // namespace

TEST_CASE("roots of small polynomials") {
  SECTION("z^2 - 1") {
    ComplexPolynomial p{{{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}};
    auto r = poly_roots(p);
    REQUIRE(r.size() == 2);
    CHECK(std::abs(r[0] - Complex(-1.0, 0.0)) < 1e-12);
    CHECK(std::abs(r[1] - Complex(1.0, 0.0)) < 1e-12);
  }
  SECTION("z^2 + 1") {
    ComplexPolynomial p{{{1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}};
    auto r = poly_roots(p);
    REQUIRE(r.size() == 2);
    CHECK(std::abs(r[0] - Complex(0.0, -1.0)) < 1e-12);
    CHECK(std::abs(r[1] - Complex(0.0, 1.0)) < 1e-12);
  }
  SECTION("linear") {
    Complex a0(2.0, 1.0), a1(-1.0, 3.0);
    ComplexPolynomial p{{a0, a1}};
    auto r = poly_roots(p);
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r[0] - (-a0 / a1)) < 1e-12);
  }
  SECTION("monomial z^3 keeps its zero roots exact") {
    ComplexPolynomial p{{{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}};
    auto r = poly_roots(p);
    REQUIRE(r.size() == 3);
    for (const Complex& z : r) CHECK(z == Complex(0.0, 0.0));
  }
  SECTION("double root (z-1)^2 (z+2)") {
    ComplexPolynomial p{{{2.0, 0.0}, {-3.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}};
    auto r = poly_roots(p);
    REQUIRE(r.size() == 3);
    CHECK(std::abs(r[0] - Complex(-2.0, 0.0)) < 1e-10);
    CHECK(std::abs(r[1] - Complex(1.0, 0.0)) < 1e-4);
    CHECK(std::abs(r[2] - Complex(1.0, 0.0)) < 1e-4);
  }
}

TEST_CASE("poly_roots validates its input") {
  CHECK_THROWS_AS(poly_roots(ComplexPolynomial{{}}), std::invalid_argument);
  CHECK_THROWS_AS(poly_roots(ComplexPolynomial{{{5.0, 0.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(poly_roots(ComplexPolynomial{{{1.0, 0.0}, {2.0, 0.0}, {0.0, 0.0}}}),
                  std::invalid_argument);
}

TEST_CASE("degree-50 reconstruction from computed roots") {
  Rng rng(1234);
  ComplexPolynomial p;
  for (int k = 0; k <= 50; ++k) p.coeff.push_back(Complex(rng.normal(), rng.normal()));
  auto roots = poly_roots(p);
  REQUIRE(roots.size() == 50);
  double norm = 0.0;
  for (const Complex& c : p.coeff) norm = std::max(norm, std::abs(c));
  auto rebuilt = from_roots(p.coeff.back(), roots);
  REQUIRE(rebuilt.size() == p.coeff.size());
  for (std::size_t k = 0; k < rebuilt.size(); ++k)
    CHECK(std::abs(rebuilt[k] - p.coeff[k]) < 1e-6 * norm);
  for (const Complex& z : roots) CHECK(backward_error(p, z) <= 1e-10);
}

TEST_CASE("conjugating the coefficients conjugates the roots exactly") {
  Rng rng(777);
  ComplexPolynomial p, q;
  for (int k = 0; k <= 23; ++k) {
    Complex c(rng.normal(), rng.normal());
    p.coeff.push_back(c);
    q.coeff.push_back(std::conj(c));
  }
  auto rp = poly_roots(p);
  auto rq = poly_roots(q);
  REQUIRE(rp.size() == rq.size());
  for (Complex& z : rq) z = std::conj(z);
  std::sort(rq.begin(), rq.end(), [](const Complex& u, const Complex& v) {
    if (u.real() != v.real()) return u.real() < v.real();
    return u.imag() < v.imag();
  });
  for (std::size_t i = 0; i < rp.size(); ++i) {
    CHECK(rp[i].real() == rq[i].real());
    CHECK(rp[i].imag() == rq[i].imag());
  }
}

TEST_CASE("kac samples are deterministic and stay inside the disk") {
  PointSample a = sample_kac_gaf(200, 42);
  PointSample b = sample_kac_gaf(200, 42);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].x == b.points[i].x);
    CHECK(a.points[i].y == b.points[i].y);
  }
  CHECK(a.space == Space::hyperbolic);
  CHECK(a.intensity == Approx(1.0 / (4.0 * std::numbers::pi)));
  for (const Point& pt : a.points) {
    double ps = pt.x * pt.x + pt.y * pt.y;
    CHECK(ps < 1.0);
    CHECK(acosh1p(2.0 * ps / (1.0 - ps)) <= a.window_radius);
  }
  PointSample c = sample_kac_gaf(200, 43);
  bool differs = c.points.size() != a.points.size();
  if (!differs && !a.points.empty()) differs = c.points[0].x != a.points[0].x;
  CHECK(differs);
  CHECK_THROWS_AS(sample_kac_gaf(0, 1), std::invalid_argument);
}

TEST_CASE("degree-1 kac sample has at most one in-disk root") {
  int seen_empty = 0, seen_one = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    PointSample s = sample_kac_gaf(1, seed);
    REQUIRE(s.points.size() <= 1);
    (s.points.empty() ? seen_empty : seen_one)++;
  }
  CHECK(seen_empty > 0);
  CHECK(seen_one > 0);
}

TEST_CASE("mean in-disk count is half the degree") {
  // Reversing the coefficient order inverts roots across the unit circle and
  // preserves the coefficient law, so the in-disk mean is exactly degree/2.
  const int degree = 120;
  std::vector<double> counts;
  for (std::uint64_t seed = 0; seed < 60; ++seed)
    counts.push_back(static_cast<double>(sample_kac_gaf(degree, 9000 + seed).points.size()));
  Summary s = summarize(counts);
  CHECK(s.mean == Approx(degree / 2.0).margin(4.0 * s.sd / std::sqrt(60.0) + 0.25));
}

TEST_CASE("in-disk intensity approaches 1/(4 pi) in an inner window") {
  // Count roots within metric radius 2.5 of the origin; the expected count is
  // area/(4 pi) once the degree is high enough that the window stays clear of
  // the unit-circle edge effects.
  const int degree = 400;
  const double r0 = 2.5;
  const double chart = std::tanh(0.5 * r0);
  const double area = ball_volume(Space::hyperbolic, r0);
  std::vector<double> counts;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    PointSample s = sample_kac_gaf(degree, 4400 + seed);
    int c = 0;
    for (const Point& pt : s.points)
      if (pt.x * pt.x + pt.y * pt.y < chart * chart) ++c;
    counts.push_back(c);
  }
  Summary s = summarize(counts);
  double expected = area / (4.0 * std::numbers::pi);
  CHECK(s.mean == Approx(expected).margin(4.0 * s.sd / std::sqrt(30.0) + 0.05 * expected));
}

TEST_CASE("matched poisson parameters solve the count equation") {
  MatchedPoissonParams m = matched_poisson_params(1000);
  CHECK(m.intensity == Approx(1.0 / (4.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(m.window_radius == Approx(7.601901710374324).margin(1e-12));  // arccosh(1001)
  CHECK(matched_poisson_params(2).window_radius ==
        Approx(std::acosh(3.0)).margin(1e-12));
  for (int degree : {2, 7, 1000}) {
    MatchedPoissonParams mp = matched_poisson_params(degree);
    CHECK(mp.intensity * ball_volume(Space::hyperbolic, mp.window_radius) ==
          Approx(degree / 2.0).margin(1e-9));
  }
  CHECK_THROWS_AS(matched_poisson_params(1), std::invalid_argument);
}
