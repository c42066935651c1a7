#ifndef PVTESS_STATS_HPP
#define PVTESS_STATS_HPP

// Small statistics toolkit: summary moments, confidence intervals,
// Kolmogorov-Smirnov distances, chi-square tail probabilities and a least
// squares slope. Tail probabilities use the regularized incomplete gamma
// function (series + continued fraction, Cephes-style).

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace pvtess {

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
};

inline Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.n = xs.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return lo <= v && v <= hi; }
};

// Normal-approximation confidence interval for the mean, z = 1.96 for 95%.
inline Interval normal_ci(const Summary& s, double z = 1.96) {
  if (s.n == 0) throw std::invalid_argument("empty sample");
  double half = z * s.sd / std::sqrt(static_cast<double>(s.n));
  return {s.mean - half, s.mean + half};
}

// --- regularized incomplete gamma ------------------------------------------

namespace detail {

inline double gamma_series_p(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_cf_q(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// P(a,x): probability that a Gamma(a,1) variable is below x.
inline double lower_regularized_gamma(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("bad incomplete gamma arguments");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return detail::gamma_series_p(a, x);
  return 1.0 - detail::gamma_cf_q(a, x);
}

inline double upper_regularized_gamma(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("bad incomplete gamma arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_series_p(a, x);
  return detail::gamma_cf_q(a, x);
}

// Survival function of the chi-square distribution with k degrees of freedom.
inline double chi2_sf(double x, double k) {
  return upper_regularized_gamma(0.5 * k, 0.5 * x);
}

// Pearson statistic and p-value for observed counts against expected counts.
struct Chi2Result {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t dof = 0;
};

inline Chi2Result chi2_test(const std::vector<double>& observed,
                            const std::vector<double>& expected) {
  if (observed.size() != expected.size() || observed.size() < 2)
    throw std::invalid_argument("chi-square needs matching bins, at least two");
  Chi2Result r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0)) throw std::invalid_argument("expected bin count must be positive");
    double d = observed[i] - expected[i];
    r.statistic += d * d / expected[i];
  }
  r.dof = observed.size() - 1;
  r.p_value = chi2_sf(r.statistic, static_cast<double>(r.dof));
  return r;
}

// Two-sided Kolmogorov-Smirnov distance between a sample and a continuous
// CDF. The sample is sorted in place by the caller or here.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  if (xs.empty()) throw std::invalid_argument("empty sample");
  std::sort(xs.begin(), xs.end());
  double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double f = cdf(xs[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return d;
}

// Slope of the least squares line y = a + b x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("slope needs matching samples, at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("degenerate x sample");
  return sxy / sxx;
}

}  // namespace pvtess

#endif  // PVTESS_STATS_HPP
