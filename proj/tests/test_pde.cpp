#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace dgf;

namespace {

RunConfig shortened(const std::string& name, double T) {
  RunConfig c = support::load_shipped(name);
  c.experiment.T = T;
  c.experiment.snapshot_times = {T};
  return c;
}

// Mass under m' = lambda m with the stepper's time discretization: IMEX Euler, then SBDF2
// with the reaction extrapolated as 2 E_n - E_{n-1}.
double scheme_mass(double m0, double lambda, double dt, std::size_t steps) {
  if (steps == 0) return m0;
  double prev = m0, cur = m0 + dt * lambda * m0;
  for (std::size_t k = 1; k < steps; ++k) {
    const double next = (4.0 * cur - prev + 2.0 * dt * lambda * (2.0 * cur - prev)) / 3.0;
    prev = cur;
    cur = next;
  }
  return cur;
}

void expect_mass_law(const PdeTrajectory& traj, double lambda, double dt) {
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto steps = static_cast<std::size_t>(std::lround(traj.times[k] / dt));
    EXPECT_NEAR(traj.mass[k] / scheme_mass(traj.mass[0], lambda, dt, steps), 1.0, 1e-12) << traj.times[k];
    EXPECT_NEAR(traj.mass[k] / (traj.mass[0] * std::exp(lambda * traj.times[k])), 1.0, 3.0 * dt * dt * (1.0 + traj.times[k]))
        << traj.times[k];
  }
}

}  // namespace

TEST(PdeStep, ConservativeCoreKeepsMass) {
  const RunConfig cfg = support::load_shipped("conservative");
  const auto traj = run_pde(cfg);
  const double m0 = traj.mass.front();
  for (std::size_t k = 1; k < traj.times.size(); ++k)
    EXPECT_LE(std::abs(traj.mass[k] - m0) / m0, 1e-12 * traj.times[k] + 1e-15);
  EXPECT_EQ(traj.clipped_mass, 0.0);
}

TEST(PdeStep, SingleImexStepConservesMass) {
  const RunConfig cfg = support::load_shipped("conservative");
  const CoefficientSet c = cfg.coefficients();
  const GridFunction u = cfg.initial.project(cfg.numerics.x_max, cfg.n_cells());
  const auto [next, R] = pde_step(u, cfg.R0, c, cfg.kernel.build(), cfg.numerics.dt_pde);
  EXPECT_NEAR(next.mass(), u.mass(), 1e-14);
  EXPECT_GE(R, 0.0);
}

TEST(PdeStep, DeathOnlyMassDecays) {
  const RunConfig cfg = support::load_shipped("death_only");
  expect_mass_law(run_pde(cfg), -1.0, cfg.numerics.dt_pde);
}

TEST(PdeStep, BirthOnlyMassGrows) {
  const RunConfig cfg = support::load_shipped("birth_only");
  expect_mass_law(run_pde(cfg), 1.0, cfg.numerics.dt_pde);
}

TEST(PdeStep, CflGuard) {
  const RunConfig cfg = support::load_shipped("reference");
  const CoefficientSet c = cfg.coefficients();
  const GridFunction u = cfg.initial.project(cfg.numerics.x_max, cfg.n_cells());
  EXPECT_THROW(pde_step(u, cfg.R0, c, cfg.kernel.build(), 0.1), CflViolation);
}

TEST(SolvePde, ZeroInitialDensity) {
  RunConfig cfg = support::load_shipped("reference");
  cfg.initial = InitialLaw::point_mass(0.0, 1.0);
  const auto traj = run_pde(cfg);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    for (double v : traj.u[k].values) ASSERT_EQ(v, 0.0);
    const double exact = cfg.family.r_in + (cfg.R0 - cfg.family.r_in) * std::exp(-traj.times[k]);
    EXPECT_NEAR(traj.R[k], exact, 1e-5);
  }
  for (const auto& [name, tf] : weak_test_battery(cfg.numerics.x_max))
    for (double r : weak_form_residual(traj, tf, cfg.coefficients(), cfg.kernel.build())) EXPECT_EQ(r, 0.0) << name;
}

TEST(SolvePde, ResourceBracketsAndPositivity) {
  for (const char* name : {"reference", "death_only", "birth_only", "reaction_free", "conservative", "point_mass"}) {
    const RunConfig cfg = support::load_shipped(name);
    const auto traj = run_pde(cfg);
    const auto b = resource_bracket(traj, cfg);
    EXPECT_TRUE(b.pass) << name << " min " << b.min << " lb " << b.lower_bound;
    for (const auto& u : traj.u)
      for (double v : u.values) ASSERT_GE(v, 0.0) << name;
    for (double t : traj.tail) EXPECT_LE(t, cfg.numerics.truncation_tol) << name;
  }
}

TEST(SolvePde, FirstMomentBalance) {
  // d/dt <u, x> = <u, zeta - d x>; G[id] = 0 removes the division term
  const RunConfig cfg = support::load_shipped("reference");
  const CoefficientSet c = cfg.coefficients();
  const auto traj = run_pde(cfg);
  double integral = 0.0;
  auto rate = [&](std::size_t k) {
    return traj.u[k].integrate([&](double x) { return c.zeta(x, traj.R[k]) - c.death(x) * x; });
  };
  for (std::size_t k = 1; k < traj.times.size(); ++k)
    integral += 0.5 * (traj.times[k] - traj.times[k - 1]) * (rate(k) + rate(k - 1));
  const double change = traj.moment1.back() - traj.moment1.front();
  EXPECT_NEAR(change, integral, 1e-3 * std::abs(traj.moment1.front()));
}

TEST(SolvePde, FragmentationNeutralForFirstMoment) {
  CoefficientSet c = support::constant_set(0.0, 0.0, 1.0, 0.0);
  c.diff = [](double, double) { return 0.0; };
  c.bounds.zeta.sup = 0.0;
  PdeSetup s;
  s.coefficients = c;
  s.initial = InitialLaw::truncated_gaussian(1.0, 5.0, 1.0);
  s.T = 1.0;
  s.dt = 0.01;
  s.x_max = 20.0;
  s.n_cells = 800;
  const auto traj = solve_pde(s);
  expect_mass_law(traj, 1.0, s.dt);
  EXPECT_NEAR(traj.moment1.back(), traj.moment1.front(), 1e-3 * traj.moment1.front());
}

TEST(SolvePde, TruncationGuard) {
  RunConfig cfg = support::load_shipped("reference");
  cfg.initial = InitialLaw::point_mass(1.0, 0.8 * cfg.numerics.x_max);
  EXPECT_THROW(run_pde(cfg), TruncationTolExceeded);
}

TEST(WeakResidual, TrivialCases) {
  const RunConfig cfg = shortened("reference", 0.2);
  const auto traj = run_pde(cfg);
  TestFunction zero{[](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
  for (double r : weak_form_residual(traj, zero, cfg.coefficients(), cfg.kernel.build())) EXPECT_EQ(r, 0.0);
}

TEST(WeakResidual, BumpDerivativesMatchFiniteDifferences) {
  const TestFunction b = bump(1.0, 4.0);
  for (double x : {1.3, 2.0, 2.5, 3.7}) {
    const double h = 1e-5;
    EXPECT_NEAR(b.df(x), (b.f(x + h) - b.f(x - h)) / (2 * h), 1e-6);
    EXPECT_NEAR(b.d2f(x), (b.df(x + h) - b.df(x - h)) / (2 * h), 1e-5);
  }
}

TEST(WeakResidual, ShrinksUnderRefinementOnEveryShippedConfig) {
  for (const char* name : {"reference", "death_only", "birth_only", "reaction_free", "conservative", "point_mass"}) {
    const RunConfig cfg = shortened(name, 1.0);
    const CoefficientSet c = cfg.coefficients();
    const auto k = cfg.kernel.build();
    const auto coarse = run_pde(cfg, 1.0);
    const auto fine = run_pde(cfg, 2.0);
    for (const auto& [tfname, tf] : weak_test_battery(cfg.numerics.x_max)) {
      const double rc = max_of(weak_form_residual(coarse, tf, c, k));
      const double rf = max_of(weak_form_residual(fine, tf, c, k));
      EXPECT_LT(rf, rc) << name << " " << tfname;
    }
  }
}
