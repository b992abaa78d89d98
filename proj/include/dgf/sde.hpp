#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "dgf/coefficients.hpp"
#include "dgf/errors.hpp"
#include "dgf/grid.hpp"
#include "dgf/random.hpp"

namespace dgf {

/// Resource trajectory frozen from a prior solve; piecewise linear, constant outside its range.
struct ResourcePath {
  std::vector<double> times;
  std::vector<double> values;

  static ResourcePath constant(double r) { return {{0.0}, {r}}; }

  double operator()(double t) const {
    if (times.empty()) return 0.0;
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
    return (1.0 - w) * values[k - 1] + w * values[k];
  }
};

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

struct SdeOptions {
  double dt = 1e-3;
  std::size_t n_paths = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::size_t chunk = 1024;  // paths per random substream
};

struct PathEnsemble {
  std::vector<double> values;
  double x0 = 0.0;
  double s = 0.0;
  double t = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
};

struct TransitionDensityEstimate {
  GridFunction density;  // normalized histogram over [0, x_max]
  double bin_width = 0.0;
  std::size_t n_paths = 0;
  double outside_fraction = 0.0;  // paths that ended beyond x_max
  std::vector<double> eps;
  std::vector<double> below_eps;  // fraction of paths ending in [0, eps]
};

namespace detail {

inline std::size_t n_steps_for(double s, double t, double dt) {
  if (!(t > s)) throw ParamOutOfRange("SDE integration needs s < t");
  if (!(dt > 0.0)) throw ParamOutOfRange("SDE step must be positive");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((t - s) / dt - 1e-9)));
}

inline double euler_update(double x, double zeta, double diff, double h, double dw) {
  return std::max(0.0, x + zeta * h + std::sqrt(2.0 * std::max(diff, 0.0)) * dw);
}

template <class Fn>
Estimate mean_and_se(std::size_t n, Fn&& value_of) {
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = value_of(i);
    sum += v;
    sum2 += v * v;
  }
  Estimate e;
  e.mean = sum / static_cast<double>(n);
  if (n > 1) {
    const double var = std::max(0.0, (sum2 - static_cast<double>(n) * e.mean * e.mean) / static_cast<double>(n - 1));
    e.se = std::sqrt(var / static_cast<double>(n));
  }
  return e;
}

}  // namespace detail

/// Positivity-preserving Euler path of dX = zeta(X, R_u) du + sqrt(2 D(X, R_u)) dW on [s, t].
/// If `path` is given it receives every grid value including the start.
inline double integrate_trait(double x0, double s, double t, const ResourcePath& rpath, const CoefficientSet& c,
                              double dt, Engine& eng, std::vector<double>* path = nullptr) {
  if (!(x0 >= 0.0)) throw ParamOutOfRange("integrate_trait: start must be >= 0");
  const std::size_t n = detail::n_steps_for(s, t, dt);
  const double h = (t - s) / static_cast<double>(n);
  const double sq = std::sqrt(h);
  std::normal_distribution<double> normal(0.0, 1.0);
  double x = x0;
  if (path) {
    path->clear();
    path->push_back(x);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double r = rpath(s + static_cast<double>(k) * h);
    x = detail::euler_update(x, c.zeta(x, r), c.diff(x, r), h, sq * normal(eng));
    if (path) path->push_back(x);
  }
  return x;
}

/// Terminal values X_t for paths started at starts[i] at time s. Paths are grouped in chunks
/// with one substream each, so the result does not depend on the thread count. If `coarse`
/// is non-null it receives the same paths integrated with twice the step from the summed
/// increments (the step count is made even for this purpose).
inline std::vector<double> terminal_values(const std::vector<double>& starts, double s, double t,
                                           const ResourcePath& rpath, const CoefficientSet& c,
                                           const SdeOptions& opt, std::vector<double>* coarse = nullptr) {
  std::size_t n = detail::n_steps_for(s, t, opt.dt);
  if (coarse && n % 2 == 1) ++n;
  const double h = (t - s) / static_cast<double>(n);
  const double sq = std::sqrt(h);
  std::vector<double> out(starts);
  if (coarse) *coarse = starts;
  const std::size_t chunk = std::max<std::size_t>(1, opt.chunk);
  const std::size_t n_chunks = (starts.size() + chunk - 1) / chunk;
  parallel_chunks(n_chunks, opt.threads, [&](std::size_t ci) {
    Engine eng = make_engine(derive_seed(opt.seed, {ci}));
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t lo = ci * chunk, hi = std::min(starts.size(), lo + chunk);
    std::vector<double> dw_prev(hi - lo, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double tk = s + static_cast<double>(k) * h;
      const double r = rpath(tk);
      const bool coarse_step = coarse && (k % 2 == 1);
      const double rc = coarse_step ? rpath(tk - h) : 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        const double dw = sq * normal(eng);
        double& x = out[i];
        x = detail::euler_update(x, c.zeta(x, r), c.diff(x, r), h, dw);
        if (coarse) {
          if (coarse_step) {
            double& y = (*coarse)[i];
            y = detail::euler_update(y, c.zeta(y, rc), c.diff(y, rc), 2.0 * h, dw_prev[i - lo] + dw);
          } else {
            dw_prev[i - lo] = dw;
          }
        }
      }
    }
  });
  return out;
}

struct CoupledGap {
  double mean = 0.0;
  double se = 0.0;
  double order_violation_fraction = 0.0;  // paths on which the ordering of the starts flipped
};

/// E|X^x - X^y| with both paths driven by the same Brownian increments.
inline CoupledGap coupled_gap(double x, double y, double s, double t, const ResourcePath& rpath,
                              const CoefficientSet& c, const SdeOptions& opt) {
  const std::size_t n = detail::n_steps_for(s, t, opt.dt);
  const double h = (t - s) / static_cast<double>(n);
  const double sq = std::sqrt(h);
  const std::size_t chunk = std::max<std::size_t>(1, opt.chunk);
  const std::size_t n_chunks = (opt.n_paths + chunk - 1) / chunk;
  std::vector<double> gaps(opt.n_paths, 0.0);
  std::vector<unsigned char> violated(opt.n_paths, 0);
  const double sign = x >= y ? 1.0 : -1.0;
  parallel_chunks(n_chunks, opt.threads, [&](std::size_t ci) {
    Engine eng = make_engine(derive_seed(opt.seed, {ci}));
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t lo = ci * chunk, hi = std::min(opt.n_paths, lo + chunk);
    std::vector<double> a(hi - lo, x), b(hi - lo, y);
    for (std::size_t k = 0; k < n; ++k) {
      const double r = rpath(s + static_cast<double>(k) * h);
      for (std::size_t i = 0; i < hi - lo; ++i) {
        const double dw = sq * normal(eng);
        a[i] = detail::euler_update(a[i], c.zeta(a[i], r), c.diff(a[i], r), h, dw);
        b[i] = detail::euler_update(b[i], c.zeta(b[i], r), c.diff(b[i], r), h, dw);
        if (sign * (a[i] - b[i]) < 0.0) violated[lo + i] = 1;
      }
    }
    for (std::size_t i = 0; i < hi - lo; ++i) gaps[lo + i] = std::abs(a[i] - b[i]);
  });
  const Estimate e = detail::mean_and_se(opt.n_paths, [&](std::size_t i) { return gaps[i]; });
  CoupledGap g;
  g.mean = e.mean;
  g.se = e.se;
  std::size_t v = 0;
  for (auto f : violated) v += f;
  g.order_violation_fraction = static_cast<double>(v) / static_cast<double>(opt.n_paths);
  return g;
}

/// Monte Carlo estimate of P_{s,t-s} phi(x) = E[phi(X^x_{s,t})].
template <class Phi>
Estimate feynman_kac(Phi&& phi, double x, double s, double t, const ResourcePath& rpath, const CoefficientSet& c,
                     const SdeOptions& opt) {
  const std::vector<double> starts(opt.n_paths, x);
  const std::vector<double> ends = terminal_values(starts, s, t, rpath, c, opt);
  return detail::mean_and_se(ends.size(), [&](std::size_t i) { return phi(ends[i]); });
}

/// E[phi'(Y_t) exp(int_s^t dzeta/dx(Y_u, R_u) du)] with dY = (zeta + dD/dx) du + sqrt(2 D) dW.
/// The exponential weight uses the left endpoint of each step.
template <class PhiPrime>
Estimate weighted_feynman_kac(PhiPrime&& phi_prime, double x, double s, double t, const ResourcePath& rpath,
                              const CoefficientSet& c, const SdeOptions& opt) {
  if (!c.has_x_derivatives())
    throw FamilyNotDifferentiable("weighted_feynman_kac: coefficients carry no analytic x-derivatives");
  const std::size_t n = detail::n_steps_for(s, t, opt.dt);
  const double h = (t - s) / static_cast<double>(n);
  const double sq = std::sqrt(h);
  const std::size_t chunk = std::max<std::size_t>(1, opt.chunk);
  const std::size_t n_chunks = (opt.n_paths + chunk - 1) / chunk;
  std::vector<double> vals(opt.n_paths, 0.0);
  parallel_chunks(n_chunks, opt.threads, [&](std::size_t ci) {
    Engine eng = make_engine(derive_seed(opt.seed, {ci}));
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t lo = ci * chunk, hi = std::min(opt.n_paths, lo + chunk);
    std::vector<double> y(hi - lo, x), logw(hi - lo, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double r = rpath(s + static_cast<double>(k) * h);
      for (std::size_t i = 0; i < hi - lo; ++i) {
        const double yi = y[i];
        logw[i] += c.dzeta_dx(yi, r) * h;
        const double drift = c.zeta(yi, r) + c.ddiff_dx(yi, r);
        y[i] = detail::euler_update(yi, drift, c.diff(yi, r), h, sq * normal(eng));
      }
    }
    for (std::size_t i = 0; i < hi - lo; ++i) vals[lo + i] = phi_prime(y[i]) * std::exp(logw[i]);
  });
  return detail::mean_and_se(opt.n_paths, [&](std::size_t i) { return vals[i]; });
}

/// Samples of dZ = c dt + sqrt(2 c Z) dW at time t from Z_0 = x0, by the symmetrized Euler
/// scheme Z <- |Z + c h + sqrt(2 c Z) dW| (a clamp would put an artificial atom at 0).
inline PathEnsemble simulate_comparison_z(double c_lower, double t, double x0, std::size_t n_paths, double dt,
                                          std::uint64_t seed, unsigned threads = 1) {
  if (!(c_lower > 0.0)) throw ParamOutOfRange("comparison process needs c > 0");
  const std::size_t n = detail::n_steps_for(0.0, t, dt);
  const double h = t / static_cast<double>(n);
  const double sq = std::sqrt(h);
  PathEnsemble ens{std::vector<double>(n_paths, x0), x0, 0.0, t, h, seed};
  const std::size_t chunk = 1024;
  const std::size_t n_chunks = (n_paths + chunk - 1) / chunk;
  parallel_chunks(n_chunks, threads, [&](std::size_t ci) {
    Engine eng = make_engine(derive_seed(seed, {ci}));
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t lo = ci * chunk, hi = std::min(n_paths, lo + chunk);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = lo; i < hi; ++i) {
        double& z = ens.values[i];
        z = std::abs(z + c_lower * h + std::sqrt(2.0 * c_lower * z) * sq * normal(eng));
      }
  });
  return ens;
}

/// Histogram estimate of the transition density y -> p_{s,t}(x, y) on [0, x_max].
inline TransitionDensityEstimate estimate_transition_density(double x, double s, double t, const ResourcePath& rpath,
                                                             const CoefficientSet& c, const SdeOptions& opt,
                                                             std::size_t bins, double x_max,
                                                             std::vector<double> eps = {1e-3}) {
  if (bins < 10) throw ParamOutOfRange("estimate_transition_density: need at least 10 bins");
  const std::vector<double> ends = terminal_values(std::vector<double>(opt.n_paths, x), s, t, rpath, c, opt);
  TransitionDensityEstimate est;
  est.density = GridFunction(x_max, bins);
  est.bin_width = est.density.dx();
  est.n_paths = opt.n_paths;
  std::size_t inside = 0;
  for (double v : ends) {
    if (v >= x_max) continue;
    ++inside;
    est.density.values[std::min(bins - 1, static_cast<std::size_t>(v / est.bin_width))] += 1.0;
  }
  est.outside_fraction = 1.0 - static_cast<double>(inside) / static_cast<double>(ends.size());
  if (inside > 0) est.density *= 1.0 / (static_cast<double>(inside) * est.bin_width);
  est.eps = eps;
  for (double e : eps) {
    std::size_t k = 0;
    for (double v : ends) k += v <= e ? 1 : 0;
    est.below_eps.push_back(static_cast<double>(k) / static_cast<double>(ends.size()));
  }
  return est;
}

}  // namespace dgf
