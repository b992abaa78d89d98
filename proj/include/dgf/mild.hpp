#pragma once

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "dgf/coefficients.hpp"
#include "dgf/errors.hpp"
#include "dgf/grid.hpp"
#include "dgf/initial.hpp"
#include "dgf/kernel.hpp"
#include "dgf/pde.hpp"
#include "dgf/random.hpp"
#include "dgf/sde.hpp"

namespace dgf {

struct MildOptions {
  std::size_t s_nodes = 8;             // Gauss-Legendre nodes in s on [0, t]
  std::size_t strata = 16;             // equal-mass strata of u_s for the start points x'
  std::size_t paths_per_node = 10000;  // per (s, stratum) node
  std::size_t initial_paths = 100000;  // for the nu_0 term
  std::size_t bin_cells = 4;           // comparison bin width in PDE cells
  double range = 0.0;                  // compared interval [0, range]; 0 means x_max / 2
  double pde_error = 0.0;              // binned L1 estimate of the PDE discretization error, if known
  SdeOptions sde{};
};

struct MildResidualReport {
  double t = 0.0;
  double residual = 0.0;      // sum_B |lhs_B - rhs_B| |B|
  double mc_se = 0.0;         // delta-method standard error of the residual
  double noise_floor = 0.0;   // expected residual from Monte Carlo noise alone
  double histogram_bias = 0.0;
  double quadrature_bound = 0.0;
  double sde_bias = 0.0;      // step-doubling estimate of the Euler bias
  double pde_error = 0.0;
  double budget = 0.0;
  bool within_budget = true;
  std::vector<double> bin_edges;
  std::vector<double> lhs, rhs, rhs_sd;
};

/// Sum over aligned bins of |mean_B(a) - mean_B(b)| |B| for two grid functions on [0, range].
inline double binned_l1(const GridFunction& a, const GridFunction& b, double bin_width, double range) {
  const auto nb = static_cast<std::size_t>(std::floor(range / bin_width + 1e-9));
  double s = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    const double lo = static_cast<double>(k) * bin_width, hi = lo + bin_width;
    s += std::abs((a.cumulative(hi) - a.cumulative(lo)) - (b.cumulative(hi) - b.cumulative(lo)));
  }
  return s;
}

namespace detail {

/// Point of mass-quantile q in (0, mass) of a non-negative piecewise-constant density.
inline double quantile_point(const GridFunction& u, const std::vector<double>& prefix, double q) {
  const auto it = std::upper_bound(prefix.begin(), prefix.end(), q);
  std::size_t j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - prefix.begin())) - 1;
  j = std::min(j, u.size() - 1);
  while (j + 1 < u.size() && u.values[j] <= 0.0) ++j;
  const double h = u.dx();
  const double frac = u.values[j] > 0.0 ? (q - prefix[j]) / (u.values[j] * h) : 0.5;
  return (static_cast<double>(j) + std::clamp(frac, 0.0, 1.0)) * h;
}

struct BinAccumulator {
  std::vector<double> sum, sum2, coarse_sum;
  explicit BinAccumulator(std::size_t nb) : sum(nb, 0.0), sum2(nb, 0.0), coarse_sum(nb, 0.0) {}
};

}  // namespace detail

/// L1 distance, on bins aligned with the PDE cells, between u_t and the right side of the mild
/// system assembled from trait-SDE transition probabilities along the solved resource path:
///   <nu_0, p_{0,t}(., B)> + int_0^t int u_s(x') [b G[p_{s,t}(., B)](x') - d p_{s,t}(x', B)] dx' ds.
/// The nu_0 term uses starts drawn from nu_0; the reaction term uses Gauss-Legendre nodes in s
/// and stratified draws x' ~ u_s with alpha ~ M. Throws InsufficientPaths if the Monte Carlo
/// standard error exceeds half the residual.
inline MildResidualReport mild_residual(const PdeTrajectory& traj, const InitialLaw& nu0, const CoefficientSet& c,
                                        const FragmentationKernel& kernel, double t, const MildOptions& opt) {
  if (!(t > 0.0) || t > traj.times.back() + 1e-12) throw ParamOutOfRange("mild_residual: t outside the trajectory");
  const GridFunction ut = traj.at(t);
  const double width = static_cast<double>(std::max<std::size_t>(1, opt.bin_cells)) * ut.dx();
  const double range = opt.range > 0.0 ? opt.range : 0.5 * ut.x_max;
  const auto nb = static_cast<std::size_t>(std::floor(range / width + 1e-9));
  if (nb < 2) throw ParamOutOfRange("mild_residual: fewer than two comparison bins");
  const ResourcePath rpath = traj.resource_path();

  MildResidualReport rep;
  rep.t = t;
  rep.pde_error = opt.pde_error;
  for (std::size_t k = 0; k <= nb; ++k) rep.bin_edges.push_back(static_cast<double>(k) * width);
  rep.lhs.resize(nb);
  for (std::size_t k = 0; k < nb; ++k)
    rep.lhs[k] = (ut.cumulative(rep.bin_edges[k + 1]) - ut.cumulative(rep.bin_edges[k])) / width;

  auto bin_of = [&](double y) -> long {
    if (!(y < static_cast<double>(nb) * width)) return -1;
    return static_cast<long>(std::min(nb - 1, static_cast<std::size_t>(y / width)));
  };

  std::vector<double> rhs(nb, 0.0), var(nb, 0.0), rhs_coarse(nb, 0.0);

  // nu_0 term.
  if (nu0.mass > 0.0 && opt.initial_paths > 0) {
    Engine eng = make_engine(derive_seed(opt.sde.seed, {0}));
    std::vector<double> starts(opt.initial_paths);
    for (double& x : starts) x = nu0.sample(eng);
    SdeOptions so = opt.sde;
    so.seed = derive_seed(opt.sde.seed, {1});
    std::vector<double> coarse;
    const std::vector<double> ends = terminal_values(starts, 0.0, t, rpath, c, so, &coarse);
    std::vector<double> cnt(nb, 0.0), cnt_c(nb, 0.0);
    for (std::size_t i = 0; i < ends.size(); ++i) {
      if (long b = bin_of(ends[i]); b >= 0) cnt[static_cast<std::size_t>(b)] += 1.0;
      if (long b = bin_of(coarse[i]); b >= 0) cnt_c[static_cast<std::size_t>(b)] += 1.0;
    }
    const double n = static_cast<double>(ends.size());
    for (std::size_t k = 0; k < nb; ++k) {
      const double p = cnt[k] / n;
      rhs[k] += nu0.mass * p / width;
      rhs_coarse[k] += nu0.mass * (cnt_c[k] / n) / width;
      var[k] += nu0.mass * nu0.mass * p * (1.0 - p) / n / (width * width);
    }
  }

  // Reaction term.
  std::vector<double> s_nodes, s_weights;
  {
    // Gauss-Legendre on [-1, 1] through boost's tabulated rules for the supported sizes.
    auto fill = [&](const auto& abscissa, const auto& weights, bool odd) {
      for (std::size_t i = 0; i < abscissa.size(); ++i) {
        const double a = abscissa[i], w = weights[i];
        if (i == 0 && odd) {
          s_nodes.push_back(0.0);
          s_weights.push_back(w);
        } else {
          s_nodes.push_back(a);
          s_weights.push_back(w);
          s_nodes.push_back(-a);
          s_weights.push_back(w);
        }
      }
    };
    switch (opt.s_nodes) {
      case 4:
        fill(boost::math::quadrature::gauss<double, 4>::abscissa(), boost::math::quadrature::gauss<double, 4>::weights(), false);
        break;
      case 8:
        fill(boost::math::quadrature::gauss<double, 8>::abscissa(), boost::math::quadrature::gauss<double, 8>::weights(), false);
        break;
      case 16:
        fill(boost::math::quadrature::gauss<double, 16>::abscissa(), boost::math::quadrature::gauss<double, 16>::weights(), false);
        break;
      default:
        throw ParamOutOfRange("mild_residual: s_nodes must be 4, 8 or 16");
    }
    for (std::size_t i = 0; i < s_nodes.size(); ++i) {
      s_nodes[i] = 0.5 * t * (s_nodes[i] + 1.0);
      s_weights[i] *= 0.5 * t;
    }
  }

  // Deterministic check of the s-quadrature: GL versus the trapezoidal rule over every stored
  // step, applied to s -> <u_s, b - d> and s -> <u_s, b + d>.
  {
    auto pair_at = [&](const GridFunction& u, double R, double sign) {
      return u.integrate([&](double x) { return c.birth(x, R) + sign * c.death(x); });
    };
    double gl_minus = 0.0, gl_plus = 0.0;
    for (std::size_t i = 0; i < s_nodes.size(); ++i) {
      const GridFunction us = traj.at(s_nodes[i]);
      const double R = rpath(s_nodes[i]);
      gl_minus += s_weights[i] * pair_at(us, R, -1.0);
      gl_plus += s_weights[i] * pair_at(us, R, 1.0);
    }
    double tr_minus = 0.0, tr_plus = 0.0;
    for (std::size_t k = 1; k < traj.times.size() && traj.times[k] <= t + 1e-12; ++k) {
      const double h = traj.times[k] - traj.times[k - 1];
      tr_minus += 0.5 * h * (pair_at(traj.u[k - 1], traj.R[k - 1], -1.0) + pair_at(traj.u[k], traj.R[k], -1.0));
      tr_plus += 0.5 * h * (pair_at(traj.u[k - 1], traj.R[k - 1], 1.0) + pair_at(traj.u[k], traj.R[k], 1.0));
    }
    rep.quadrature_bound = std::abs(gl_minus - tr_minus) + std::abs(gl_plus - tr_plus);
  }

  const std::size_t n = opt.paths_per_node;
  for (std::size_t i = 0; i < s_nodes.size() && n > 0; ++i) {
    const double s = s_nodes[i];
    const GridFunction us = traj.at(s);
    const double R = rpath(s);
    const double mass = us.mass();
    if (!(mass > 0.0)) continue;
    const std::vector<double> prefix = us.prefix_masses();
    const double m_stratum = mass / static_cast<double>(opt.strata);
    for (std::size_t k = 0; k < opt.strata; ++k) {
      Engine eng = make_engine(derive_seed(opt.sde.seed, {2, i, k}));
      std::vector<double> starts(2 * n), w1(n), w2(n);
      bool any = false;
      for (std::size_t p = 0; p < n; ++p) {
        const double q = m_stratum * (static_cast<double>(k) + uniform_open(eng));
        const double x = detail::quantile_point(us, prefix, q);
        const double b = c.birth(x, R);
        const double d = c.death(x);
        starts[p] = x;
        starts[n + p] = kernel.sample(eng) * x;
        w1[p] = -(b + d);
        w2[p] = 2.0 * b;
        any = any || w1[p] != 0.0 || w2[p] != 0.0;
      }
      if (!any) continue;
      SdeOptions so = opt.sde;
      so.seed = derive_seed(opt.sde.seed, {3, i, k});
      std::vector<double> coarse;
      const std::vector<double> ends = terminal_values(starts, s, t, rpath, c, so, &coarse);
      detail::BinAccumulator acc(nb);
      for (std::size_t p = 0; p < n; ++p) {
        const long b1 = bin_of(ends[p]), b2 = bin_of(ends[n + p]);
        if (b1 >= 0 && b1 == b2) {
          const double y = w1[p] + w2[p];
          acc.sum[static_cast<std::size_t>(b1)] += y;
          acc.sum2[static_cast<std::size_t>(b1)] += y * y;
        } else {
          if (b1 >= 0) {
            acc.sum[static_cast<std::size_t>(b1)] += w1[p];
            acc.sum2[static_cast<std::size_t>(b1)] += w1[p] * w1[p];
          }
          if (b2 >= 0) {
            acc.sum[static_cast<std::size_t>(b2)] += w2[p];
            acc.sum2[static_cast<std::size_t>(b2)] += w2[p] * w2[p];
          }
        }
        if (long c1 = bin_of(coarse[p]); c1 >= 0) acc.coarse_sum[static_cast<std::size_t>(c1)] += w1[p];
        if (long c2 = bin_of(coarse[n + p]); c2 >= 0) acc.coarse_sum[static_cast<std::size_t>(c2)] += w2[p];
      }
      const double nd = static_cast<double>(n);
      const double scale = s_weights[i] * m_stratum / width;
      for (std::size_t bidx = 0; bidx < nb; ++bidx) {
        const double mean = acc.sum[bidx] / nd;
        const double v = std::max(0.0, acc.sum2[bidx] / nd - mean * mean) * nd / std::max(1.0, nd - 1.0);
        rhs[bidx] += scale * mean;
        rhs_coarse[bidx] += scale * acc.coarse_sum[bidx] / nd;
        var[bidx] += scale * scale * v / nd;
      }
    }
  }

  rep.rhs = rhs;
  rep.rhs_sd.resize(nb);
  double se2 = 0.0;
  for (std::size_t k = 0; k < nb; ++k) {
    const double sd = std::sqrt(var[k]);
    rep.rhs_sd[k] = sd;
    rep.residual += std::abs(rep.lhs[k] - rhs[k]) * width;
    rep.noise_floor += std::sqrt(2.0 / M_PI) * sd * width;
    rep.sde_bias += std::abs(rhs[k] - rhs_coarse[k]) * width;
    se2 += var[k] * width * width;
  }
  rep.mc_se = std::sqrt(se2);
  // Both sides are compared as bin averages on cells of the PDE grid, so binning adds no bias.
  rep.histogram_bias = 0.0;
  rep.budget = 3.0 * (rep.noise_floor + rep.histogram_bias + rep.quadrature_bound + rep.sde_bias + rep.pde_error);
  rep.within_budget = rep.residual <= rep.budget;
  if (rep.mc_se > 0.5 * rep.residual)
    throw InsufficientPaths("mild_residual: Monte Carlo standard error " + std::to_string(rep.mc_se) +
                            " exceeds half the residual " + std::to_string(rep.residual));
  return rep;
}

}  // namespace dgf
