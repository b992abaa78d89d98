#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "dgf/coefficients.hpp"
#include "dgf/errors.hpp"
#include "dgf/initial.hpp"
#include "dgf/kernel.hpp"
#include "dgf/random.hpp"

namespace dgf {

/// Finite population; each individual carries mass 1/K.
struct Population {
  std::size_t K = 1;
  std::vector<double> traits;

  double mass() const { return static_cast<double>(traits.size()) / static_cast<double>(K); }
};

struct ResourceState {
  double value = 0.0;
};

struct StepCounters {
  std::uint64_t births = 0;
  std::uint64_t deaths = 0;
  std::uint64_t steps = 0;
  std::uint64_t resource_clamps = 0;
};

inline std::pair<double, double> split_trait(double x, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw AlphaOutOfRange("split_trait: alpha must lie in (0,1)");
  if (!(x >= 0.0)) throw ParamOutOfRange("split_trait: trait must be >= 0");
  const double mother = alpha * x;
  return {mother, x - mother};
}

/// r_in - R - (1/K) sum_i chi(x_i, R)
inline double resource_drift(const Population& pop, const ResourceState& res, const CoefficientSet& c) {
  double s = 0.0;
  for (double x : pop.traits) s += c.chi(x, res.value);
  return c.r_in - res.value - s / static_cast<double>(pop.K);
}

/// Replaces individual i by its two offspring (mother keeps alpha x, daughter appended).
inline void divide(Population& pop, std::size_t i, double alpha) {
  auto [m, d] = split_trait(pop.traits[i], alpha);
  pop.traits[i] = m;
  pop.traits.push_back(d);
}

/// Upper bound of the resource bracket carried by the coefficient metadata (infinite if unset).
inline double resource_ceiling(const CoefficientSet& c) {
  return c.bounds.r_bar > 0.0 ? c.bounds.r_bar : std::numeric_limits<double>::infinity();
}

/// One operator-split step: trait diffusion with frozen R, then division/death by competing
/// exponential clocks, then an explicit Euler step of the resource (using the population at
/// the start of the step), clamped to [0, R_bar].
inline void ibm_step(Population& pop, ResourceState& res, const CoefficientSet& c, const FragmentationKernel& kernel,
                     double dt, Engine& eng, StepCounters* counters = nullptr) {
  if (!(dt > 0.0)) throw StepTooLarge("ibm_step: dt must be positive");
  if (dt * (c.bounds.birth.sup + c.bounds.death.sup) > 0.1)
    throw StepTooLarge("ibm_step: dt * (|b|_inf + |d|_inf) exceeds 0.1");

  const double R = res.value;
  const double drift_R = resource_drift(pop, res, c);

  std::normal_distribution<double> normal(0.0, 1.0);
  std::exponential_distribution<double> unit_exp(1.0);
  const double sq = std::sqrt(dt);
  for (double& x : pop.traits) {
    const double D = std::max(c.diff(x, R), 0.0);
    x = std::max(0.0, x + c.zeta(x, R) * dt + std::sqrt(2.0 * D) * sq * normal(eng));
  }

  const std::size_t n0 = pop.traits.size();
  std::size_t write = 0;
  std::vector<double> newborn;
  for (std::size_t i = 0; i < n0; ++i) {
    const double x = pop.traits[i];
    const double b = c.birth(x, R);
    const double d = c.death(x);
    const double tb = b > 0.0 ? unit_exp(eng) / b : std::numeric_limits<double>::infinity();
    const double td = d > 0.0 ? unit_exp(eng) / d : std::numeric_limits<double>::infinity();
    if (td < dt && td <= tb) {
      if (counters) ++counters->deaths;
      continue;
    }
    if (tb < dt) {
      auto [m, dau] = split_trait(x, kernel.sample(eng));
      pop.traits[write++] = m;
      newborn.push_back(dau);
      if (counters) ++counters->births;
      continue;
    }
    pop.traits[write++] = x;
  }
  pop.traits.resize(write);
  pop.traits.insert(pop.traits.end(), newborn.begin(), newborn.end());

  double r_next = R + dt * drift_R;
  const double ceiling = resource_ceiling(c);
  if (r_next < 0.0 || r_next > ceiling) {
    r_next = std::clamp(r_next, 0.0, ceiling);
    if (counters) ++counters->resource_clamps;
  }
  res.value = r_next;
  if (counters) ++counters->steps;
}

struct IbmSummary {
  double time = 0.0;
  double mass = 0.0;
  double moment1 = 0.0;  // <nu, x>
  double moment2 = 0.0;  // <nu, x^2>
  double resource = 0.0;
  std::size_t count = 0;
  double min_trait = 0.0;
};

struct IbmSnapshot {
  double time = 0.0;
  std::vector<double> traits;
  double resource = 0.0;
};

struct IbmTrajectory {
  std::size_t K = 1;
  std::uint64_t seed = 0;
  std::vector<IbmSummary> summaries;  // every step, starting at t = 0
  std::vector<IbmSnapshot> snapshots;
  StepCounters counters;
};

/// Everything needed to run the individual-based model.
struct IbmSetup {
  CoefficientSet coefficients;
  FragmentationKernel kernel = FragmentationKernel::uniform();
  InitialLaw initial;
  double R0 = 1.0;
  double T = 1.0;
  double dt = 1e-3;
  std::size_t K = 100;
  std::vector<double> snapshot_times;
  double max_clamp_fraction = 1e-6;
};

inline IbmSummary summarize(const Population& pop, const ResourceState& res, double t) {
  IbmSummary s;
  s.time = t;
  s.count = pop.traits.size();
  s.mass = pop.mass();
  s.resource = res.value;
  s.min_trait = pop.traits.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  double m1 = 0.0, m2 = 0.0;
  for (double x : pop.traits) {
    m1 += x;
    m2 += x * x;
    s.min_trait = std::min(s.min_trait, x);
  }
  s.moment1 = m1 / static_cast<double>(pop.K);
  s.moment2 = m2 / static_cast<double>(pop.K);
  return s;
}

/// floor(<nu_0, 1> K) individuals drawn i.i.d. from nu_0 / <nu_0, 1>.
inline Population initial_population(const InitialLaw& law, std::size_t K, Engine& eng) {
  Population pop;
  pop.K = K;
  const auto n = static_cast<std::size_t>(std::floor(law.mass * static_cast<double>(K)));
  pop.traits.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pop.traits.push_back(law.sample(eng));
  return pop;
}

inline IbmTrajectory simulate_ibm(const IbmSetup& setup, std::uint64_t seed) {
  if (setup.K == 0) throw ParamOutOfRange("simulate_ibm: K must be positive");
  Engine eng = make_engine(seed);
  IbmTrajectory traj;
  traj.K = setup.K;
  traj.seed = seed;
  Population pop = initial_population(setup.initial, setup.K, eng);
  ResourceState res{setup.R0};

  const auto n_steps = static_cast<std::size_t>(std::llround(setup.T / setup.dt));
  std::vector<std::size_t> snap_steps;
  for (double t : setup.snapshot_times) snap_steps.push_back(static_cast<std::size_t>(std::llround(t / setup.dt)));
  auto maybe_snapshot = [&](std::size_t step) {
    if (std::find(snap_steps.begin(), snap_steps.end(), step) != snap_steps.end())
      traj.snapshots.push_back({static_cast<double>(step) * setup.dt, pop.traits, res.value});
  };

  traj.summaries.reserve(n_steps + 1);
  traj.summaries.push_back(summarize(pop, res, 0.0));
  maybe_snapshot(0);
  for (std::size_t n = 1; n <= n_steps; ++n) {
    ibm_step(pop, res, setup.coefficients, setup.kernel, setup.dt, eng, &traj.counters);
    const double t = static_cast<double>(n) * setup.dt;
    traj.summaries.push_back(summarize(pop, res, t));
    maybe_snapshot(n);
  }
  if (static_cast<double>(traj.counters.resource_clamps) >
      setup.max_clamp_fraction * static_cast<double>(std::max<std::uint64_t>(traj.counters.steps, 1)))
    throw ResourceClampExceeded("simulate_ibm: resource clamp activated too often");
  return traj;
}

/// (time, (1/K) sum_i (1 + x_i^p)) over the retained snapshots.
inline std::vector<std::pair<double, double>> mass_moment_track(const IbmTrajectory& traj, double p) {
  std::vector<std::pair<double, double>> out;
  for (const auto& s : traj.snapshots) {
    double acc = 0.0;
    for (double x : s.traits) acc += 1.0 + std::pow(x, p);
    out.emplace_back(s.time, acc / static_cast<double>(traj.K));
  }
  return out;
}

}  // namespace dgf
