#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dgf/besov.hpp"
#include "dgf/config.hpp"
#include "dgf/ibm.hpp"
#include "dgf/metrics.hpp"
#include "dgf/mild.hpp"
#include "dgf/pde.hpp"
#include "dgf/random.hpp"
#include "dgf/sde.hpp"
#include "dgf/validation.hpp"

namespace dgf {

struct GuardCheck {
  std::string name;
  bool pass = true;
  double value = 0.0;
  double limit = 0.0;
};

struct ConfigReport {
  ValidationReport coefficients;
  std::vector<GuardCheck> guards;
  bool passed() const {
    return coefficients.passed() && std::all_of(guards.begin(), guards.end(), [](const GuardCheck& g) { return g.pass; });
  }
};

/// Checks the coefficient assumptions and that every numerical guard can be met.
inline ConfigReport check_config(const RunConfig& cfg) {
  ConfigReport rep;
  const CoefficientSet c = cfg.coefficients();
  rep.coefficients = validate_coefficients(c, cfg.numerics.x_max, cfg.r_bar(), cfg.numerics.validation_grid);
  const auto& n = cfg.numerics;
  const double ibm_rate = n.dt_ibm * (c.bounds.birth.sup + c.bounds.death.sup);
  rep.guards.push_back({"ibm_step_rate", ibm_rate <= 0.1, ibm_rate, 0.1});
  const double cfl = n.dt_pde * c.bounds.zeta.sup / n.dx;
  rep.guards.push_back({"pde_cfl", cfl <= n.cfl_max, cfl, n.cfl_max});
  const double tail = cfg.initial.tail(0.5 * n.x_max);
  rep.guards.push_back({"initial_tail_beyond_half_domain", tail < n.initial_tail_tol, tail, n.initial_tail_tol});
  const double m1 = cfg.initial.mass * cfg.initial.mean_trait();
  rep.guards.push_back({"initial_first_moment_finite", std::isfinite(m1), m1, 0.0});
  bool snaps_on_grid = true;
  for (double t : cfg.experiment.snapshot_times) {
    const double k = t / n.dt_ibm;
    snaps_on_grid = snaps_on_grid && std::abs(k - std::round(k)) < 1e-6;
  }
  rep.guards.push_back({"snapshot_times_on_ibm_grid", snaps_on_grid, 0.0, 0.0});
  return rep;
}

inline std::uint64_t job_seed(const RunConfig& cfg, std::size_t K, std::uint64_t seed) {
  return derive_seed(cfg.experiment.run_seed, {static_cast<std::uint64_t>(K), seed});
}

inline IbmTrajectory run_ibm(const RunConfig& cfg, std::size_t K, std::uint64_t seed) {
  return simulate_ibm(cfg.ibm_setup(K), job_seed(cfg, K, seed));
}

inline PdeTrajectory run_pde(const RunConfig& cfg, double refine = 1.0) { return solve_pde(cfg.pde_setup(refine)); }

struct ResourceBracket {
  double min = 0.0;
  double max = 0.0;
  double upper = 0.0;        // r_in v R0
  double lower_bound = 0.0;  // R0 exp(-(1 + rho) T)
  double rho = 0.0;
  bool pass = true;
};

/// Checks R in [0, r_in v R0] and R >= R0 exp(-(1 + rho) T) - tol, rho = Lip_r(chi) sup_t mass.
inline ResourceBracket resource_bracket(const std::vector<double>& R, const std::vector<double>& mass,
                                        const RunConfig& cfg, double tol = 1e-6) {
  ResourceBracket b;
  b.min = *std::min_element(R.begin(), R.end());
  b.max = *std::max_element(R.begin(), R.end());
  b.upper = cfg.r_bar();
  const double sup_mass = mass.empty() ? 0.0 : *std::max_element(mass.begin(), mass.end());
  b.rho = cfg.coefficients().bounds.chi.lip_r * sup_mass;
  b.lower_bound = cfg.R0 * std::exp(-(1.0 + b.rho) * cfg.experiment.T);
  b.pass = b.min >= 0.0 && b.max <= b.upper * (1.0 + 1e-12) && b.min >= b.lower_bound - tol;
  return b;
}

inline ResourceBracket resource_bracket(const IbmTrajectory& traj, const RunConfig& cfg, double tol = 1e-6) {
  std::vector<double> R, m;
  for (const auto& s : traj.summaries) {
    R.push_back(s.resource);
    m.push_back(s.mass);
  }
  return resource_bracket(R, m, cfg, tol);
}

inline ResourceBracket resource_bracket(const PdeTrajectory& traj, const RunConfig& cfg, double tol = 1e-6) {
  return resource_bracket(traj.R, traj.mass, cfg, tol);
}

// ---------------------------------------------------------------------------------------------
// Large-K convergence

struct ConvergeRow {
  std::size_t K = 0;
  std::uint64_t seed = 0;
  std::vector<double> bl;  // per snapshot time
  double resource_error = 0.0;
  ResourceBracket bracket;
};

struct ConvergeReport {
  std::vector<double> times;
  std::vector<std::size_t> K;
  std::vector<ConvergeRow> rows;
  std::vector<std::vector<double>> mean_bl;  // [K][time]
  std::vector<std::vector<double>> se_bl;
  std::vector<double> mean_resource_error;   // [K], at T
  std::vector<double> fitted_rate;           // per time: slope of log mean error vs log K
  std::vector<std::string> dictionary;
  double pde_self_distance = 0.0;
  ResourceBracket pde_bracket;

  bool bl_strictly_decreasing() const {
    for (std::size_t i = 1; i < K.size(); ++i)
      for (std::size_t t = 0; t < times.size(); ++t)
        if (!(mean_bl[i][t] < mean_bl[i - 1][t])) return false;
    return true;
  }
  bool resource_strictly_decreasing() const {
    for (std::size_t i = 1; i < K.size(); ++i)
      if (!(mean_resource_error[i] < mean_resource_error[i - 1])) return false;
    return true;
  }
  /// Largest ratio over snapshot times of the error at the largest K to that at the smallest.
  double worst_ratio() const {
    double r = 0.0;
    for (std::size_t t = 0; t < times.size(); ++t) r = std::max(r, mean_bl.back()[t] / mean_bl.front()[t]);
    return r;
  }
};

inline ConvergeReport converge_experiment(const RunConfig& cfg, unsigned threads = 1) {
  const auto& ex = cfg.experiment;
  if (ex.K.size() < 3) throw ParamOutOfRange("converge_experiment: need at least three K values");
  if (ex.seeds.size() < 3) throw ParamOutOfRange("converge_experiment: need at least three seeds per K");
  const double q = static_cast<double>(ex.K[1]) / static_cast<double>(ex.K[0]);
  for (std::size_t i = 1; i < ex.K.size(); ++i)
    if (std::abs(static_cast<double>(ex.K[i]) / static_cast<double>(ex.K[i - 1]) - q) > 1e-9 * q || !(q > 1.0))
      throw ParamOutOfRange("converge_experiment: K values must form an increasing geometric progression");

  ConvergeReport rep;
  rep.times = ex.snapshot_times;
  rep.K = ex.K;
  const PdeTrajectory pde = run_pde(cfg);
  rep.pde_bracket = resource_bracket(pde, cfg);
  const TestDictionary dict = TestDictionary::standard(cfg.numerics.dictionary_size, cfg.numerics.dictionary_scale);
  for (const auto& m : dict.members) rep.dictionary.push_back(m.describe());
  std::vector<GridFunction> u_at;
  for (double t : rep.times) u_at.push_back(pde.at(t));
  rep.pde_self_distance = bl_distance(u_at.back(), u_at.back(), dict);
  const double R_T = pde.R.back();

  const std::size_t nK = ex.K.size(), nS = ex.seeds.size();
  rep.rows.resize(nK * nS);
  parallel_chunks(nK * nS, threads, [&](std::size_t job) {
    const std::size_t K = ex.K[job / nS];
    const std::uint64_t seed = ex.seeds[job % nS];
    const IbmTrajectory traj = run_ibm(cfg, K, seed);
    ConvergeRow row;
    row.K = K;
    row.seed = seed;
    for (std::size_t t = 0; t < rep.times.size(); ++t) {
      const EmpiricalMeasure nu{traj.snapshots[t].traits, K};
      row.bl.push_back(bl_distance(nu, u_at[t], dict));
    }
    row.resource_error = std::abs(traj.summaries.back().resource - R_T);
    row.bracket = resource_bracket(traj, cfg);
    rep.rows[job] = std::move(row);
  });

  rep.mean_bl.assign(nK, std::vector<double>(rep.times.size(), 0.0));
  rep.se_bl.assign(nK, std::vector<double>(rep.times.size(), 0.0));
  rep.mean_resource_error.assign(nK, 0.0);
  for (std::size_t i = 0; i < nK; ++i) {
    for (std::size_t t = 0; t < rep.times.size(); ++t) {
      const Estimate e = detail::mean_and_se(nS, [&](std::size_t s) { return rep.rows[i * nS + s].bl[t]; });
      rep.mean_bl[i][t] = e.mean;
      rep.se_bl[i][t] = e.se;
    }
    rep.mean_resource_error[i] =
        detail::mean_and_se(nS, [&](std::size_t s) { return rep.rows[i * nS + s].resource_error; }).mean;
  }
  for (std::size_t t = 0; t < rep.times.size(); ++t) {
    std::vector<double> ks, es;
    for (std::size_t i = 0; i < nK; ++i) {
      ks.push_back(static_cast<double>(ex.K[i]));
      es.push_back(rep.mean_bl[i][t]);
    }
    DifferenceProfile fit;
    fit_loglog(ks, es, fit);
    rep.fitted_rate.push_back(fit.slope);
  }
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Solver agreement

struct WeakResidualEntry {
  std::string test_function;
  double coarse = 0.0;  // max over time
  double fine = 0.0;
  double ratio = 0.0;
};

struct AgreementReport {
  std::vector<WeakResidualEntry> weak;
  MildResidualReport mild;
  bool mild_ran = false;
  ResourceBracket bracket;
  double min_weak_ratio() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& w : weak)
      if (w.coarse > 0.0) r = std::min(r, w.ratio);
    return r;
  }
};

/// Test battery for the weak residual: bumps spread over the populated part of the domain.
inline std::vector<std::pair<std::string, TestFunction>> weak_test_battery(double x_max) {
  const double L = std::min(x_max / 2.0, 16.0);
  return {{"bump(0.05L,0.4L)", bump(0.05 * L, 0.4 * L)},
          {"bump(0.1L,0.7L)", bump(0.1 * L, 0.7 * L)},
          {"bump(0,0.25L)", bump(0.0, 0.25 * L)},
          {"bump(0.2L,L)", bump(0.2 * L, L)}};
}

inline double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

inline AgreementReport agreement_experiment(const RunConfig& cfg, unsigned threads = 1, double mild_time = -1.0) {
  AgreementReport rep;
  const CoefficientSet c = cfg.coefficients();
  const FragmentationKernel kernel = cfg.kernel.build();
  const PdeTrajectory coarse = run_pde(cfg, 1.0);
  const PdeTrajectory fine = run_pde(cfg, 2.0);
  rep.bracket = resource_bracket(coarse, cfg);
  for (auto& [name, tf] : weak_test_battery(cfg.numerics.x_max)) {
    WeakResidualEntry e;
    e.test_function = name;
    e.coarse = max_of(weak_form_residual(coarse, tf, c, kernel));
    e.fine = max_of(weak_form_residual(fine, tf, c, kernel));
    e.ratio = e.fine > 0.0 ? e.coarse / e.fine : (e.coarse > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    rep.weak.push_back(e);
  }
  const double t = mild_time > 0.0 ? mild_time : std::min(1.0, cfg.experiment.T);
  const auto& ms = cfg.experiment.mild;
  MildOptions opt;
  opt.s_nodes = ms.s_nodes;
  opt.strata = ms.strata;
  opt.paths_per_node = ms.paths_per_node;
  opt.initial_paths = ms.initial_paths;
  opt.bin_cells = ms.bin_cells;
  opt.range = std::min(ms.range, 0.5 * cfg.numerics.x_max);
  opt.sde.dt = cfg.numerics.dt_sde;
  opt.sde.seed = derive_seed(cfg.experiment.run_seed, {0x6d696c64});
  opt.sde.threads = threads;
  const double width = static_cast<double>(ms.bin_cells) * coarse.u.front().dx();
  opt.pde_error = binned_l1(coarse.at(t), fine.at(t), width, opt.range);
  rep.mild = mild_residual(coarse, cfg.initial, c, kernel, t, opt);
  rep.mild_ran = true;
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Density diagnostics

struct DensityReport {
  double t = 0.0;
  double c_lower = 0.0;
  double resource_at_t = 0.0;
  std::vector<double> eps;
  std::vector<double> pde_atom_fraction;  // <u_t, 1_[0,eps]> / <u_t, 1>
  std::vector<double> sde_atom_fraction;  // paths from nu_0 ending in [0, eps]
  DifferenceProfile weighted_profile;     // of D^(1/2)(., R_t) u_t
  DifferenceProfile transition_profile;   // of the transition-density histogram
  double weighted_l1 = 0.0;
  double weighted_besov_lambda_max = 0.0;  // Besov norm at index lambda_max, order m
  double lambda_max = 0.0;
  BesovExponents predicted_at_optimum;     // k = 0, beta = 1, m = 1 at the maximizing alpha
  double transition_start = 0.0;
};

inline DensityReport density_diagnostics(const RunConfig& cfg, unsigned threads = 1) {
  DensityReport rep;
  const auto& dg = cfg.experiment.diagnostics;
  const CoefficientSet c = cfg.coefficients();
  rep.c_lower = validate_coefficients(c, cfg.numerics.x_max, cfg.r_bar(), cfg.numerics.validation_grid).c_lower;
  RunConfig local = cfg;
  local.experiment.T = std::max(cfg.experiment.T, dg.time);
  const PdeTrajectory traj = run_pde(local);
  rep.t = dg.time;
  const GridFunction u = traj.at(dg.time);
  const ResourcePath rpath = traj.resource_path();
  rep.resource_at_t = rpath(dg.time);
  rep.eps = dg.eps;
  const double mass = u.mass();
  for (double e : dg.eps) rep.pde_atom_fraction.push_back(mass > 0.0 ? u.cumulative(e) / mass : 0.0);

  SdeOptions so;
  so.dt = cfg.numerics.dt_sde;
  so.n_paths = dg.n_paths;
  so.threads = threads;
  so.seed = derive_seed(cfg.experiment.run_seed, {0x64656e73});
  {
    Engine eng = make_engine(derive_seed(so.seed, {0}));
    std::vector<double> starts(dg.n_paths);
    for (double& x : starts) x = cfg.initial.sample(eng);
    const std::vector<double> ends = terminal_values(starts, 0.0, dg.time, rpath, c, so);
    for (double e : dg.eps) {
      std::size_t k = 0;
      for (double v : ends) k += v <= e ? 1 : 0;
      rep.sde_atom_fraction.push_back(static_cast<double>(k) / static_cast<double>(ends.size()));
    }
  }

  GridFunction weighted = u;
  for (std::size_t j = 0; j < u.size(); ++j)
    weighted.values[j] = std::sqrt(std::max(0.0, c.diff(u.center(j), rep.resource_at_t))) * u.values[j];
  const std::vector<double> hg =
      default_h_grid(u.dx(), cfg.numerics.h_points, cfg.numerics.h_max, cfg.numerics.h_floor);
  rep.weighted_profile = smoothness_exponent(weighted, dg.m, hg);
  rep.weighted_l1 = weighted.mass();
  rep.lambda_max = lambda_max();
  rep.weighted_besov_lambda_max = besov_norm(weighted, rep.lambda_max, std::max(dg.m, 1), hg);
  rep.predicted_at_optimum = predicted_exponents((std::sqrt(6.0) - 2.0) / 3.0, 1.0, 1, 0);

  rep.transition_start = cfg.initial.mean_trait();
  so.seed = derive_seed(so.seed, {1});
  const TransitionDensityEstimate td =
      estimate_transition_density(rep.transition_start, 0.0, dg.time, rpath, c, so, dg.bins, cfg.numerics.x_max / 2.0, dg.eps);
  const std::vector<double> th = default_h_grid(td.bin_width, cfg.numerics.h_points, cfg.numerics.h_max,
                                                std::max(cfg.numerics.h_floor, 2.0 * td.bin_width));
  if (th.size() >= 2) rep.transition_profile = smoothness_exponent(td.density, dg.m, th);
  return rep;
}

}  // namespace dgf
