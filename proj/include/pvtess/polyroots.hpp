#ifndef PVTESS_POLYROOTS_HPP
#define PVTESS_POLYROOTS_HPP

// Aberth-Ehrlich simultaneous iteration for dense complex polynomials.
// Initial guesses sit on circles whose radii come from the upper convex hull
// of (k, log|a_k|); a root is accepted once its backward error
// |p(z)| / sum_k |a_k||z|^k reaches 1e-10, i.e. z is an exact root of a
// polynomial whose coefficients were perturbed by one part in 1e10.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "pvtess/errors.hpp"

namespace pvtess {

using Complex = std::complex<double>;

struct ComplexPolynomial {
  std::vector<Complex> coeff;  // a_0 .. a_n, leading coefficient nonzero
  int degree() const { return static_cast<int>(coeff.size()) - 1; }
};

namespace polyroots_detail {

constexpr double kCertificate = 1e-10;
constexpr double kEps = 2.220446049250313e-16;
constexpr int kMaxSweeps = 500;

struct HornerEval {
  Complex value;   // p(z)
  Complex deriv;   // p'(z)
  double scale;    // sum_k |a_k| |z|^k
};

inline HornerEval horner(const std::vector<Complex>& a, Complex z) {
  double s = std::abs(z);
  Complex v = a.back();
  Complex d = 0.0;
  double e = std::abs(a.back());
  for (std::size_t k = a.size() - 1; k-- > 0;) {
    d = d * z + v;
    v = v * z + a[k];
    e = e * s + std::abs(a[k]);
  }
  return {v, d, e};
}

// Between consecutive hull vertices k1 < k2 of the upper convex hull of
// (k, log|a_k|), the k1- and k2-terms balance at |z| = exp((y1-y2)/(k2-k1)),
// which approximates the moduli of the k2-k1 roots in that band. Angles are
// spread evenly with a fixed phase so no guess starts on a symmetry axis.
inline std::vector<Complex> initial_guesses(const std::vector<Complex>& a) {
  int n = static_cast<int>(a.size()) - 1;
  struct Pt {
    double y;
    int k;
  };
  std::vector<Pt> pts;
  for (int k = 0; k <= n; ++k) {
    double m = std::abs(a[static_cast<std::size_t>(k)]);
    if (m > 0.0) pts.push_back({std::log(m), k});
  }
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (hull.size() >= 2) {
      const Pt& p1 = pts[hull[hull.size() - 2]];
      const Pt& p2 = pts[hull.back()];
      double cross = (p2.k - p1.k) * (pts[i].y - p1.y) -
                     (pts[i].k - p1.k) * (p2.y - p1.y);
      if (cross >= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }
  std::vector<Complex> z;
  z.reserve(static_cast<std::size_t>(n));
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const Pt& p1 = pts[hull[h]];
    const Pt& p2 = pts[hull[h + 1]];
    int m = p2.k - p1.k;
    double r = std::exp((p1.y - p2.y) / m);
    for (int j = 0; j < m; ++j) {
      double th = two_pi * j / m + two_pi * p1.k / n + 0.4;
      z.push_back(Complex(r * std::cos(th), r * std::sin(th)));
    }
  }
  return z;
}

inline std::vector<Complex> aberth(const std::vector<Complex>& a) {
  std::vector<Complex> z = initial_guesses(a);
  std::vector<bool> done(z.size(), false);
  // The certificate is an acceptance bound, not a stopping rule: iterating
  // down to the Horner rounding floor (about 4n eps) keeps forward errors,
  // and hence the root-product reconstruction error, near machine precision.
  const double polish = 4.0 * static_cast<double>(a.size()) * kEps;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    int active = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (done[i]) continue;
      HornerEval h = horner(a, z[i]);
      if (std::abs(h.value) <= polish * h.scale) {
        done[i] = true;
        continue;
      }
      ++active;
      if (h.deriv == 0.0) {
        z[i] += Complex(1e-8, 1e-8) * (1.0 + std::abs(z[i]));
        continue;
      }
      Complex ratio = h.value / h.deriv;
      Complex s = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (j == i) continue;
        Complex diff = z[i] - z[j];
        if (diff == 0.0) diff = Complex(1e-14, 1e-14) * (1.0 + std::abs(z[i]));
        s += 1.0 / diff;
      }
      Complex denom = 1.0 - ratio * s;
      Complex w = (denom == 0.0) ? ratio : ratio / denom;
      z[i] -= w;
      // A correction below one ulp of the iterate cannot improve it further.
      if (std::abs(w) <= 4.0 * kEps * std::abs(z[i])) done[i] = true;
    }
    if (active == 0) break;
  }
  std::vector<std::size_t> failed;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (done[i]) continue;
    HornerEval h = horner(a, z[i]);
    if (std::abs(h.value) <= kCertificate * h.scale) continue;
    failed.push_back(i);
  }
  if (!failed.empty()) {
    std::ostringstream msg;
    msg << "poly_roots: " << failed.size() << " of " << z.size()
        << " roots failed the backward-error certificate after " << kMaxSweeps
        << " sweeps (indices";
    for (std::size_t i = 0; i < failed.size() && i < 8; ++i) msg << ' ' << failed[i];
    if (failed.size() > 8) msg << " ...";
    msg << ')';
    throw rejection_error(msg.str());
  }
  return z;
}

}  // namespace polyroots_detail

// All n roots, with multiplicity, sorted by (real, imaginary). The input is
// conjugated to a canonical half-space before iterating and the roots
// conjugated back, so conjugating every coefficient conjugates the returned
// root multiset bit for bit.
inline std::vector<Complex> poly_roots(const ComplexPolynomial& p) {
  if (p.coeff.size() < 2)
    throw std::invalid_argument("polynomial degree must be at least 1");
  if (p.coeff.back() == 0.0)
    throw std::invalid_argument("leading coefficient must be nonzero");
  std::vector<Complex> a = p.coeff;
  bool conjugated = false;
  for (const Complex& c : a) {
    if (c.imag() != 0.0) {
      conjugated = c.imag() < 0.0;
      break;
    }
  }
  if (conjugated)
    for (Complex& c : a) c = std::conj(c);
  std::size_t zeros = 0;
  while (zeros + 1 < a.size() && a[zeros] == 0.0) ++zeros;
  a.erase(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(zeros));
  std::vector<Complex> roots(zeros, Complex(0.0, 0.0));
  if (a.size() > 1) {
    std::vector<Complex> found = polyroots_detail::aberth(a);
    roots.insert(roots.end(), found.begin(), found.end());
  }
  if (conjugated)
    for (Complex& r : roots) r = std::conj(r);
  std::sort(roots.begin(), roots.end(), [](const Complex& u, const Complex& v) {
    if (u.real() != v.real()) return u.real() < v.real();
    return u.imag() < v.imag();
  });
  return roots;
}

}  // namespace pvtess

#endif  // PVTESS_POLYROOTS_HPP
