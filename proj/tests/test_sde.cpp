#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"

using namespace dgf;

namespace {

CoefficientSet reference_coefficients() { return support::load_shipped("reference").coefficients(); }

SdeOptions opts(std::size_t n, double dt, std::uint64_t seed) {
  SdeOptions o;
  o.n_paths = n;
  o.dt = dt;
  o.seed = seed;
  return o;
}

}  // namespace

TEST(ResourcePath, PiecewiseLinear) {
  const ResourcePath p{{0.0, 1.0, 2.0}, {1.0, 2.0, 0.0}};
  EXPECT_DOUBLE_EQ(p(0.5), 1.5);
  EXPECT_DOUBLE_EQ(p(1.5), 1.0);
  EXPECT_DOUBLE_EQ(p(-1.0), 1.0);
  EXPECT_DOUBLE_EQ(p(3.0), 0.0);
  EXPECT_DOUBLE_EQ(ResourcePath::constant(0.7)(12.0), 0.7);
}

TEST(IntegrateTrait, DriftOnlyIsExact) {
  CoefficientSet c = support::constant_set(0.3, 0.0, 0.0, 0.0);
  c.diff = [](double, double) { return 0.0; };
  Engine eng = make_engine(1);
  std::vector<double> path;
  const double x = integrate_trait(1.0, 0.5, 2.5, ResourcePath::constant(1.0), c, 0.01, eng, &path);
  EXPECT_NEAR(x, 1.0 + 0.3 * 2.0, 1e-12);
  EXPECT_EQ(path.size(), 201u);
}

TEST(IntegrateTrait, MomentEstimateStableInStart) {
  const CoefficientSet c = reference_coefficients();
  const ResourcePath rp = ResourcePath::constant(1.0);
  for (double p : {1.0, 2.0, 4.0}) {
    std::vector<double> ratio;
    for (double x0 : {0.0, 1.0, 10.0}) {
      Engine eng = make_engine(derive_seed(5, {static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(x0)}));
      double acc = 0.0;
      const int n = 2000;
      std::vector<double> path;
      for (int i = 0; i < n; ++i) {
        integrate_trait(x0, 0.0, 1.0, rp, c, 0.01, eng, &path);
        acc += std::pow(*std::max_element(path.begin(), path.end()), p);
      }
      ratio.push_back(acc / n / (1.0 + std::pow(x0, p)));
    }
    const double cp = *std::max_element(ratio.begin(), ratio.end());
    EXPECT_LT(cp, 10.0 * std::pow(2.0, p)) << p;
    // the constant fitted at the largest start covers it without growth
    EXPECT_LE(ratio[2], ratio[1]) << p;
  }
}

TEST(IntegrateTrait, NoAtomAtZero) {
  const CoefficientSet c = reference_coefficients();
  const std::vector<double> starts(20000, 0.0);
  const auto ends = terminal_values(starts, 0.0, 1.0, ResourcePath::constant(1.0), c, opts(20000, 1e-3, 11));
  std::vector<double> frac;
  for (double e : {1e-1, 1e-2, 1e-3}) {
    frac.push_back(static_cast<double>(std::count_if(ends.begin(), ends.end(), [e](double v) { return v <= e; })) /
                   static_cast<double>(ends.size()));
  }
  EXPECT_GE(frac[0], frac[1]);
  EXPECT_GE(frac[1], frac[2]);
  EXPECT_LT(frac[2], 1e-3);
  for (double v : ends) EXPECT_GE(v, 0.0);
}

TEST(TerminalValues, ThreadCountInvariant) {
  const CoefficientSet c = reference_coefficients();
  SdeOptions o = opts(5000, 0.01, 3);
  const std::vector<double> starts(5000, 1.0);
  const auto a = terminal_values(starts, 0.0, 0.5, ResourcePath::constant(1.0), c, o);
  o.threads = 4;
  const auto b = terminal_values(starts, 0.0, 0.5, ResourcePath::constant(1.0), c, o);
  EXPECT_EQ(a, b);
}

TEST(CoupledGap, ZeroAndSymmetric) {
  const CoefficientSet c = reference_coefficients();
  const auto rp = ResourcePath::constant(1.2);
  const auto o = opts(2000, 0.01, 4);
  EXPECT_EQ(coupled_gap(1.0, 1.0, 0.0, 1.0, rp, c, o).mean, 0.0);
  const auto g1 = coupled_gap(1.0, 1.5, 0.0, 1.0, rp, c, o);
  const auto g2 = coupled_gap(1.5, 1.0, 0.0, 1.0, rp, c, o);
  EXPECT_EQ(g1.mean, g2.mean);
  EXPECT_GT(g1.mean, 0.0);
}

TEST(CoupledGap, LipschitzConstantStableAcrossGaps) {
  const CoefficientSet c = reference_coefficients();
  const auto rp = ResourcePath::constant(1.2);
  std::vector<double> C;
  for (double gap : {0.01, 0.1, 1.0}) {
    double worst = 0.0;
    for (double y : {0.5, 1.0, 2.0}) {
      const auto g = coupled_gap(y + gap, y, 0.0, 1.0, rp, c, opts(2000, 1e-3, 8));
      worst = std::max(worst, g.mean / gap);
      EXPECT_LT(g.order_violation_fraction, 1e-3);
    }
    C.push_back(worst);
  }
  const double hi = *std::max_element(C.begin(), C.end()), lo = *std::min_element(C.begin(), C.end());
  EXPECT_LE(hi / lo, 2.0);
}

TEST(FeynmanKac, ConstantIsExact) {
  const CoefficientSet c = reference_coefficients();
  const Estimate e = feynman_kac([](double) { return 3.25; }, 1.0, 0.0, 1.0, ResourcePath::constant(1.0), c,
                                 opts(1000, 0.01, 1));
  EXPECT_EQ(e.mean, 3.25);
  EXPECT_EQ(e.se, 0.0);
}

TEST(FeynmanKac, LinearTestFunctionFollowsDrift) {
  CoefficientSet c = support::constant_set(0.7, 0.3, 0.0, 0.0);
  const Estimate e =
      feynman_kac([](double x) { return x; }, 3.0, 0.0, 1.0, ResourcePath::constant(1.0), c, opts(50000, 0.01, 2));
  EXPECT_NEAR(e.mean, 3.7, 3.0 * e.se);
}

TEST(FeynmanKac, AgreesWithTransitionHistogram) {
  const CoefficientSet c = reference_coefficients();
  const auto rp = ResourcePath::constant(1.0);
  auto phi = [](double x) { return std::exp(-0.5 * x); };
  const auto o = opts(100000, 0.01, 21);
  const Estimate fk = feynman_kac(phi, 2.0, 0.0, 1.0, rp, c, o);
  const auto td = estimate_transition_density(2.0, 0.0, 1.0, rp, c, o, 200, 20.0);
  EXPECT_NEAR(td.density.mass(), 1.0, 1e-12);
  const double hist = td.density.integrate(phi) * (1.0 - td.outside_fraction);
  // same paths, so only the histogram bias separates them: |phi'| h / 2 per unit mass
  EXPECT_NEAR(hist, fk.mean, 0.5 * 0.5 * td.bin_width + 1e-12);
}

TEST(WeightedFeynmanKac, Examples) {
  const CoefficientSet c = reference_coefficients();
  const auto rp = ResourcePath::constant(1.0);
  const auto o = opts(4000, 0.01, 5);
  EXPECT_EQ(weighted_feynman_kac([](double) { return 0.0; }, 1.0, 0.0, 1.0, rp, c, o).mean, 0.0);

  // zeta free of x: plain Feynman-Kac under drift zeta + dD/dx with identical increments
  auto phi_prime = [](double x) { return std::cos(x); };
  CoefficientSet shifted = c;
  shifted.zeta = [c](double x, double r) { return c.zeta(x, r) + c.ddiff_dx(x, r); };
  const Estimate w = weighted_feynman_kac(phi_prime, 1.0, 0.0, 1.0, rp, c, o);
  const Estimate p = feynman_kac(phi_prime, 1.0, 0.0, 1.0, rp, shifted, o);
  EXPECT_DOUBLE_EQ(w.mean, p.mean);

  EXPECT_THROW(weighted_feynman_kac(phi_prime, 1.0, 0.0, 1.0, rp, support::constant_set(1, 1, 0, 0), o),
               FamilyNotDifferentiable);
}

TEST(WeightedFeynmanKac, ExponentialBound) {
  FamilySpec f = *reference_coefficients().family;
  f.drift.zx = 0.8;
  const CoefficientSet c = make_coefficients(f, 40.0, 2.0);
  const auto rp = ResourcePath::constant(1.0);
  for (double x : {0.0, 0.5, 2.0, 5.0}) {
    const Estimate g = weighted_feynman_kac([](double y) { return std::sin(3.0 * y); }, x, 0.0, 1.0, rp, c,
                                            opts(2000, 0.01, 6));
    EXPECT_LE(std::abs(g.mean), std::exp(0.8 * 1.0));
  }
}

TEST(ComparisonProcess, MeanOnSmokeGrid) {
  for (double cl : {0.1, 1.0}) {
    for (double t : {0.5, 2.0}) {
      for (double x0 : {0.0, 1.0}) {
        const auto e = simulate_comparison_z(cl, t, x0, 20000, 1e-2, 17);
        const Estimate m = detail::mean_and_se(e.values.size(), [&](std::size_t i) { return e.values[i]; });
        EXPECT_NEAR(m.mean, x0 + cl * t, 3.5 * m.se) << cl << " " << t << " " << x0;
        for (double v : e.values) ASSERT_GE(v, 0.0);
      }
    }
  }
}

TEST(ComparisonProcess, AtomShrinksWithStep) {
  auto frac = [](double dt) {
    const auto e = simulate_comparison_z(1.0, 1.0, 0.0, 50000, dt, 23);
    return static_cast<double>(std::count_if(e.values.begin(), e.values.end(), [](double v) { return v <= 1e-4; })) /
           5e4;
  };
  const double coarse = frac(0.1), fine = frac(1e-3);
  EXPECT_LE(fine, coarse + 3.0 * std::sqrt(1e-4 / 5e4));
  EXPECT_LT(fine, 5e-4);
}

TEST(TransitionDensity, ProbabilityVector) {
  const CoefficientSet c = reference_coefficients();
  const auto td =
      estimate_transition_density(1.0, 0.0, 1.0, ResourcePath::constant(1.0), c, opts(20000, 0.01, 9), 100, 20.0, {1e-3, 1e-2});
  for (double v : td.density.values) EXPECT_GE(v, 0.0);
  EXPECT_NEAR(td.density.mass(), 1.0, 1e-12);
  EXPECT_EQ(td.below_eps.size(), 2u);
  EXPECT_LE(td.below_eps[0], td.below_eps[1]);
  EXPECT_THROW(estimate_transition_density(1.0, 0.0, 1.0, ResourcePath::constant(1.0), c, opts(10, 0.01, 9), 5, 20.0),
               ParamOutOfRange);
}
