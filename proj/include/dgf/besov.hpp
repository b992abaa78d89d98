#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "dgf/errors.hpp"
#include "dgf/grid.hpp"
#include "dgf/sde.hpp"

namespace dgf {

inline double binomial(int m, int j) {
  double r = 1.0;
  for (int i = 1; i <= j; ++i) r = r * static_cast<double>(m - j + i) / static_cast<double>(i);
  return r;
}

/// Delta^m_h f(x) = sum_{j=0}^m (-1)^(m-j) C(m, j) f(x + j h)
template <class F>
double delta_m_h(F&& f, int m, double h, double x) {
  double s = 0.0;
  for (int j = 0; j <= m; ++j) s += ((m - j) % 2 == 0 ? 1.0 : -1.0) * binomial(m, j) * f(x + j * h);
  return s;
}

/// Same operator through Delta^m_h f(x) = Delta^(m-1)_h f(x + h) - Delta^(m-1)_h f(x).
template <class F>
double delta_m_h_recursive(F&& f, int m, double h, double x) {
  if (m == 0) return f(x);
  return delta_m_h_recursive(f, m - 1, h, x + h) - delta_m_h_recursive(f, m - 1, h, x);
}

/// Delta^m applied to cell values extended by zero, shift = k cells (k may be negative).
/// Returns values on cells lo .. n-1+hi of the extended line, with offset() giving lo.
struct ExtendedDifference {
  std::vector<double> values;
  long first_cell = 0;
  double dx = 0.0;

  double l1() const {
    double s = 0.0;
    for (double v : values) s += std::abs(v);
    return s * dx;
  }
  double sup() const {
    double s = 0.0;
    for (double v : values) s = std::max(s, std::abs(v));
    return s;
  }
};

inline ExtendedDifference delta_m_h(const GridFunction& f, int m, long k) {
  const long n = static_cast<long>(f.size());
  const long lo = std::min(0L, -m * k), hi = std::max(n - 1, n - 1 - m * k);
  ExtendedDifference d;
  d.first_cell = lo;
  d.dx = f.dx();
  d.values.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  auto at = [&](long i) { return i >= 0 && i < n ? f.values[static_cast<std::size_t>(i)] : 0.0; };
  for (long i = lo; i <= hi; ++i) {
    double s = 0.0;
    for (int j = 0; j <= m; ++j) s += ((m - j) % 2 == 0 ? 1.0 : -1.0) * binomial(m, j) * at(i + j * k);
    d.values[static_cast<std::size_t>(i - lo)] = s;
  }
  return d;
}

/// Geometric h-grid from h_max down to max(2 dx, h_floor), rounded to whole cells, deduplicated,
/// strictly decreasing.
inline std::vector<double> default_h_grid(double dx, std::size_t points = 16, double h_max = 0.5,
                                          double h_floor = 1e-3) {
  const double h_min = std::max(2.0 * dx, h_floor);
  std::vector<double> out;
  if (h_min > h_max) return out;
  for (std::size_t i = 0; i < points; ++i) {
    const double frac = points > 1 ? static_cast<double>(i) / static_cast<double>(points - 1) : 0.0;
    const double h = h_max * std::pow(h_min / h_max, frac);
    double k = std::round(h / dx);
    if (k * dx < h_min - 1e-12 * dx) k = std::ceil(h_min / dx);
    const double hr = k * dx;
    if (out.empty() || hr < out.back() - 1e-12 * dx) out.push_back(hr);
  }
  return out;
}

/// ||f||_1 + max over the h-grid of |h|^(-s) ||Delta^m_h f||_1 (f extended by zero).
inline double besov_norm(const GridFunction& f, double s, int m, std::vector<double> h_grid = {}) {
  if (!(s > 0.0) || !(static_cast<double>(m) > s)) throw ParamOutOfRange("besov_norm: need m > s > 0");
  if (h_grid.empty()) h_grid = default_h_grid(f.dx());
  double l1 = 0.0;
  for (double v : f.values) l1 += std::abs(v);
  l1 *= f.dx();
  double best = 0.0;
  for (double h : h_grid) {
    const long k = std::lround(h / f.dx());
    if (k == 0) continue;
    const double hk = static_cast<double>(k) * f.dx();
    best = std::max(best, std::pow(std::abs(hk), -s) * delta_m_h(f, m, k).l1());
  }
  return l1 + best;
}

struct DifferenceProfile {
  int m = 1;
  std::vector<double> h;
  std::vector<double> l1;  // ||Delta^m_h f||_1
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double ci_low = 0.0;   // 95% confidence interval of the slope
  double ci_high = 0.0;
};

/// Least-squares line through (log x_i, log y_i) with a 95% t-interval on the slope.
inline void fit_loglog(const std::vector<double>& x, const std::vector<double>& y, DifferenceProfile& p) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(std::max(y[i], 1e-300));
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  p.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  p.intercept = my - p.slope * mx;
  if (n > 2 && sxx > 0.0) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ly[i] - p.intercept - p.slope * lx[i];
      rss += r * r;
    }
    p.slope_se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    const boost::math::students_t dist(static_cast<double>(n - 2));
    const double q = boost::math::quantile(boost::math::complement(dist, 0.025));
    p.ci_low = p.slope - q * p.slope_se;
    p.ci_high = p.slope + q * p.slope_se;
  } else {
    p.ci_low = p.ci_high = p.slope;
  }
}

inline DifferenceProfile smoothness_exponent(const GridFunction& f, int m, std::vector<double> h_grid = {}) {
  if (m < 1) throw ParamOutOfRange("smoothness_exponent: m must be >= 1");
  if (h_grid.empty()) h_grid = default_h_grid(f.dx());
  DifferenceProfile p;
  p.m = m;
  for (double h : h_grid) {
    if (h < 2.0 * f.dx() * (1.0 - 1e-9)) throw HTooSmallForGrid("smoothness_exponent: h below two grid cells");
    const long k = std::lround(h / f.dx());
    p.h.push_back(static_cast<double>(k) * f.dx());
    p.l1.push_back(delta_m_h(f, m, k).l1());
  }
  if (p.h.size() < 2) throw HTooSmallForGrid("smoothness_exponent: fewer than two usable shifts");
  fit_loglog(p.h, p.l1, p);
  return p;
}

struct BesovExponents {
  double alpha = 0.0, beta = 0.0;
  int m = 1, k = 0;
  double c_alpha_k = 0.0;
  double eta = 0.0;
  double s = 0.0;  // (2m / (2m + 3 alpha)) eta
};

inline BesovExponents predicted_exponents(double alpha, double beta, int m, int k) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParamOutOfRange("predicted_exponents: need 0 < alpha < 1");
  if (m < 1 || !(static_cast<double>(m) > 3.0 * alpha)) throw ParamOutOfRange("predicted_exponents: need m >= 1, m > 3 alpha");
  if (!(beta > 0.0 && beta <= 1.0)) throw ParamOutOfRange("predicted_exponents: need beta in (0, 1]");
  if (k < 0) throw ParamOutOfRange("predicted_exponents: need k >= 0");
  BesovExponents e;
  e.alpha = alpha;
  e.beta = beta;
  e.m = m;
  e.k = k;
  const double md = static_cast<double>(m);
  e.c_alpha_k = std::max(alpha, std::max(0.0, static_cast<double>(k - 1)) / 2.0);
  e.eta = std::min({beta, 0.5, (md - 3.0 * alpha) / (2.0 * md / alpha)});
  e.s = 2.0 * md / (2.0 * md + 3.0 * alpha) * e.eta;
  return e;
}

/// Largest smoothing index for k = 0, beta = 1, m = 1: max over alpha of alpha (1 - 3 alpha) / (2 + 3 alpha).
inline double lambda_max() { return (5.0 - 2.0 * std::sqrt(6.0)) / 3.0; }

/// Probabilists' Hermite polynomial He_m.
inline double hermite_he(int m, double z) {
  double a = 1.0, b = z;
  if (m == 0) return a;
  for (int k = 1; k < m; ++k) {
    const double c = z * b - static_cast<double>(k) * a;
    a = b;
    b = c;
  }
  return b;
}

/// Roots of He_m (eigenvalues of its Jacobi matrix), ascending.
inline std::vector<double> hermite_he_roots(int m) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(static_cast<double>(i));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  std::vector<double> r(es.eigenvalues().data(), es.eigenvalues().data() + m);
  std::sort(r.begin(), r.end());
  return r;
}

/// int_R |d^m/dx^m g_sigma(x)| dx for the centered Gaussian density of width sigma, using
/// d^m g_sigma = (-1)^m He_m(x / sigma) g_sigma(x) / sigma^m, integrated adaptively on
/// [-10 sigma, 10 sigma] between consecutive sign changes.
inline double gaussian_derivative_l1(int m, double sigma) {
  if (m < 1 || !(sigma > 0.0)) throw ParamOutOfRange("gaussian_derivative_l1: need m >= 1, sigma > 0");
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * M_PI)) / std::pow(sigma, m);
  auto integrand = [&](double x) {
    const double z = x / sigma;
    return std::abs(hermite_he(m, z)) * std::exp(-0.5 * z * z) * norm;
  };
  std::vector<double> cuts{-10.0 * sigma};
  for (double r : hermite_he_roots(m)) cuts.push_back(r * sigma);
  cuts.push_back(10.0 * sigma);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, cuts[i], cuts[i + 1], 15, 1e-14);
  return total;
}

/// Hoelder test functions with a certified bound on ||phi||_inf + [phi]_alpha.
struct HolderTestFunction {
  enum class Kind { AbsPower, Weierstrass };
  Kind kind = Kind::AbsPower;
  double alpha = 0.5;
  double a = 0.0;     // centre for AbsPower, phase shift for Weierstrass
  int terms = 8;      // Weierstrass partial sum length (base 2)
  double scale = 1.0; // normalization so that the certified norm is `norm`

  /// min(|x - a|, 1)^alpha, norm <= 2.
  static HolderTestFunction abs_power(double alpha, double a) {
    HolderTestFunction h;
    h.kind = Kind::AbsPower;
    h.alpha = alpha;
    h.a = a;
    return h;
  }

  /// Normalized sum_{n<N} 2^(-n alpha) cos(2^n (x - a)), norm <= 1.
  static HolderTestFunction weierstrass(double alpha, int terms, double a = 0.0) {
    HolderTestFunction h;
    h.kind = Kind::Weierstrass;
    h.alpha = alpha;
    h.terms = terms;
    h.a = a;
    h.scale = 1.0 / raw_weierstrass_norm(alpha, terms);
    return h;
  }

  double operator()(double x) const {
    if (kind == Kind::AbsPower) return std::pow(std::min(std::abs(x - a), 1.0), alpha);
    double s = 0.0;
    for (int n = 0; n < terms; ++n) s += std::pow(2.0, -n * alpha) * std::cos(std::pow(2.0, n) * (x - a));
    return scale * s;
  }

  /// Certified upper bound of sup|phi| + sup |phi(x) - phi(y)| / |x - y|^alpha.
  double norm() const { return kind == Kind::AbsPower ? 2.0 : 1.0; }

  /// Hoelder seminorm bound alone.
  double seminorm() const {
    if (kind == Kind::AbsPower) return 1.0;
    return scale * (1.0 / (1.0 - std::pow(2.0, alpha - 1.0)) + 2.0 / (1.0 - std::pow(2.0, -alpha)));
  }

 private:
  static double raw_weierstrass_norm(double alpha, int terms) {
    double sup = 0.0;
    for (int n = 0; n < terms; ++n) sup += std::pow(2.0, -n * alpha);
    return sup + 1.0 / (1.0 - std::pow(2.0, alpha - 1.0)) + 2.0 / (1.0 - std::pow(2.0, -alpha));
  }
};

struct CriterionStatistic {
  double mean = 0.0;
  double se = 0.0;
  double scaled = 0.0;  // mean / |h|^alpha
};

/// Sample mean of sigma(X_i) Delta^m_h phi(X_i).
template <class Sigma, class Phi>
CriterionStatistic density_criterion_statistic(const std::vector<double>& samples, Sigma&& sigma_fn, Phi&& phi,
                                               double alpha, int m, double h) {
  if (samples.empty()) throw ParamOutOfRange("density_criterion_statistic: no samples");
  const Estimate e = detail::mean_and_se(samples.size(), [&](std::size_t i) {
    const double x = samples[i];
    const double w = sigma_fn(x);
    return w == 0.0 ? 0.0 : w * delta_m_h(phi, m, h, x);
  });
  return {e.mean, e.se, e.mean / std::pow(std::abs(h), alpha)};
}

}  // namespace dgf
