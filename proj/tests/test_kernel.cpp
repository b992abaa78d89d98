#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "support.hpp"

using namespace dgf;

TEST(Kernel, WeightsSumToOneAndNodesInside) {
  for (const auto& k : support::shipped_kernels()) {
    const double s = std::accumulate(k.weights().begin(), k.weights().end(), 0.0);
    EXPECT_NEAR(s, 1.0, 1e-14) << k.name();
    for (double a : k.nodes()) {
      EXPECT_GT(a, 0.0);
      EXPECT_LT(a, 1.0);
    }
  }
}

TEST(Kernel, ReflectionSymmetryIsExact) {
  for (const auto& k : support::shipped_kernels()) {
    for (auto g : {+[](double a) { return a * a * a; }, +[](double a) { return std::exp(3.0 * a); },
                   +[](double a) { return std::log(a) * a; }}) {
      const double lhs = k.integrate(g);
      const double rhs = k.integrate([&](double a) { return g(1.0 - a); });
      EXPECT_EQ(lhs, rhs) << k.name();
    }
    // node set closed under a -> 1 - a, bit for bit
    for (double a : k.nodes()) {
      const double b = 1.0 - a;
      EXPECT_NE(std::find(k.nodes().begin(), k.nodes().end(), b), k.nodes().end()) << k.name();
    }
  }
}

TEST(Kernel, FirstMomentIsOneHalf) {
  for (const auto& k : support::shipped_kernels())
    EXPECT_NEAR(k.integrate([](double a) { return a; }), 0.5, 2e-16) << k.name();
  EXPECT_NEAR(support::singular_beta().integrate([](double a) { return a; }), 0.5, 2e-16);
}

TEST(Kernel, UniformMomentsMatchClosedForm) {
  const auto k = FragmentationKernel::uniform(32);
  for (int p = 0; p <= 20; ++p)
    EXPECT_NEAR(k.integrate([p](double a) { return std::pow(a, p); }), 1.0 / (p + 1.0), 1e-14) << p;
}

TEST(Kernel, BetaMomentsMatchClosedForm) {
  for (double a : {0.5, 2.0, 5.0}) {
    const auto k = FragmentationKernel::symmetric_beta(a, 32);
    // E alpha^p for Beta(a, a) = prod_{i<p} (a + i) / (2a + i)
    for (int p = 1; p <= 10; ++p) {
      double e = 1.0;
      for (int i = 0; i < p; ++i) e *= (a + i) / (2.0 * a + i);
      EXPECT_NEAR(k.integrate([p](double x) { return std::pow(x, p); }), e, 1e-13) << a << " " << p;
    }
  }
}

TEST(Kernel, DiscreteIsSymmetrized) {
  const auto k = FragmentationKernel::discrete({{0.2, 1.0}});
  ASSERT_EQ(k.nodes().size(), 2u);
  EXPECT_DOUBLE_EQ(k.weights()[0], 0.5);
  EXPECT_DOUBLE_EQ(k.nodes()[0] + k.nodes()[1], 1.0);
  const auto h = FragmentationKernel::discrete({{0.5, 3.0}});
  ASSERT_EQ(h.nodes().size(), 1u);
  EXPECT_DOUBLE_EQ(h.weights()[0], 1.0);
  EXPECT_THROW(FragmentationKernel::discrete({{1.0, 1.0}}), ParamOutOfRange);
  EXPECT_THROW(FragmentationKernel::discrete({}), ParamOutOfRange);
  EXPECT_THROW(FragmentationKernel::symmetric_beta(0.0), ParamOutOfRange);
}

TEST(Kernel, SamplerMatchesLaw) {
  Engine eng = make_engine(42);
  for (const auto& k : support::shipped_kernels()) {
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = k.sample(eng);
      ASSERT_GT(a, 0.0);
      ASSERT_LT(a, 1.0);
      s += a;
      s2 += a * a;
    }
    const double m2 = k.integrate([](double a) { return a * a; });
    const double var = m2 - 0.25;
    EXPECT_NEAR(s / n, 0.5, 5.0 * std::sqrt(var / n) + 1e-12) << k.name();
    // second moment against the quadrature value
    const double var2 = k.integrate([](double a) { return std::pow(a, 4); }) - m2 * m2;
    EXPECT_NEAR(s2 / n, m2, 5.0 * std::sqrt(var2 / n) + 1e-12) << k.name();
  }
}
