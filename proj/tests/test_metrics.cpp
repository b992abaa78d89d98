#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace dgf;

namespace {

const TestDictionary& dict() {
  static const TestDictionary d = TestDictionary::standard(64, 10.0);
  return d;
}

// Random piecewise-linear function on [0, 2] (constant beyond), scaled to sup + Lip = 1.
struct RandomLipschitz {
  std::vector<double> knots, values;
  double operator()(double x) const {
    if (x <= knots.front()) return values.front();
    if (x >= knots.back()) return values.back();
    std::size_t k = 1;
    while (knots[k] < x) ++k;
    const double w = (x - knots[k - 1]) / (knots[k] - knots[k - 1]);
    return (1 - w) * values[k - 1] + w * values[k];
  }
};

RandomLipschitz random_member(Engine& eng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RandomLipschitz r;
  for (int i = 0; i <= 8; ++i) {
    r.knots.push_back(0.25 * i);
    r.values.push_back(u(eng));
  }
  double sup = 0.0, lip = 0.0;
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    sup = std::max(sup, std::abs(r.values[i]));
    if (i > 0) lip = std::max(lip, std::abs(r.values[i] - r.values[i - 1]) / 0.25);
  }
  for (double& v : r.values) v /= (sup + lip);
  return r;
}

}  // namespace

TEST(Dictionary, CertifiedAndSized) {
  EXPECT_EQ(dict().members.size(), 64u);
  EXPECT_LE(dict().worst_measured_norm, 1.0 + 1e-9);
  for (const auto& m : dict().members) EXPECT_LE(m.certified_norm(), 1.0);
  EXPECT_EQ(dict().members.front().kind, DictionaryMember::Kind::Constant);
}

TEST(BlDistance, IdenticalIsZero) {
  const EmpiricalMeasure a{{0.5, 1.0, 3.0}, 10};
  EXPECT_EQ(bl_distance(a, a, dict()), 0.0);
  const GridFunction g = support::gaussian_cells(20.0, 400, 3.0, 1.0);
  EXPECT_EQ(bl_distance(g, g, dict()), 0.0);
}

TEST(BlDistance, MassDifferenceSeenByConstant) {
  for (double a : {0.2, 1.0, 3.0})
    for (double b : {0.0, 0.7, 2.5}) {
      const AtomicMeasure m1{{2.0}, {a}}, m2{{2.0}, {b}};
      EXPECT_GE(bl_distance(m1, m2, dict()), std::abs(a - b) / 2.0 - 1e-15);
    }
}

TEST(BlDistance, CloseToBruteForceSupremum) {
  const AtomicMeasure d0{{0.0}, {1.0}}, d1{{1.0}, {1.0}};
  Engine eng = make_engine(2024);
  double brute = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto f = random_member(eng);
    brute = std::max(brute, std::abs(f(0.0) - f(1.0)));
  }
  const double v = bl_distance(d0, d1, dict());
  EXPECT_GE(v, 0.9 * brute);
  EXPECT_LE(v, 2.0 / 3.0 + 1e-12);  // the true distance
}

TEST(BlDistance, MetricProperties) {
  Engine eng = make_engine(5);
  std::uniform_real_distribution<double> u(0.0, 15.0);
  for (int trial = 0; trial < 20; ++trial) {
    EmpiricalMeasure a{{}, 50}, b{{}, 50}, c{{}, 50};
    for (int i = 0; i < 40; ++i) {
      a.points.push_back(u(eng));
      b.points.push_back(u(eng));
      c.points.push_back(u(eng));
    }
    const double ab = bl_distance(a, b, dict()), ba = bl_distance(b, a, dict());
    EXPECT_EQ(ab, ba);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, bl_distance(a, c, dict()) + bl_distance(c, b, dict()) + 1e-15);
  }
}

TEST(BlDistance, EmpiricalApproachesGrid) {
  const GridFunction g = support::gaussian_cells(20.0, 800, 5.0, 1.0);
  const InitialLaw law = InitialLaw::truncated_gaussian(1.0, 5.0, 1.0);
  std::vector<double> errs;
  for (std::size_t K : {100u, 10000u}) {
    Engine eng = make_engine(K);
    EmpiricalMeasure e{{}, K};
    for (std::size_t i = 0; i < K; ++i) e.points.push_back(law.sample(eng));
    errs.push_back(bl_distance(e, g, dict()));
  }
  EXPECT_LT(errs[1], errs[0]);
}

TEST(Moments, Examples) {
  EXPECT_EQ(moments(EmpiricalMeasure{{}, 10}, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(moments(AtomicMeasure{{2.0}, {1.0}}, 2.0), 5.0);
  const AtomicMeasure m{{1.0, 3.0}, {0.5, 0.25}};
  EXPECT_DOUBLE_EQ(moments(m, 0.0), 2.0 * m.mass());
  // Gaussian: <N(m, s^2), 1 + x^2> = 1 + m^2 + s^2
  const GridFunction g = support::gaussian_cells(20.0, 4000, 10.0, 1.5);
  EXPECT_NEAR(moments(g, 2.0), 1.0 + 100.0 + 2.25, 1e-4);
  EXPECT_NEAR(moments(g, 1.0), 1.0 + 10.0, 1e-6);
}

TEST(TailMass, Examples) {
  const AtomicMeasure inside{{0.1, 0.9, 1.5}, {1.0, 1.0, 1.0}};
  EXPECT_EQ(tail_mass(inside, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(tail_mass(AtomicMeasure{{8.0}, {0.7}}, 4.0), 0.7);
  const GridFunction g = support::gaussian_cells(30.0, 600, 5.0, 2.0);
  double prev = g.mass();
  for (double n : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double t = tail_mass(g, n);
    EXPECT_LE(t, prev + 1e-15);
    EXPECT_GE(t, 0.0);
    prev = t;
  }
  EXPECT_THROW(tail_mass(g, 0.0), ParamOutOfRange);
}

TEST(TailMass, RampIsMonotoneC2) {
  double prev = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = 1.5 * i / 1000.0;
    const double v = tail_ramp(x);
    EXPECT_GE(v, prev);
    prev = v;
  }
  const double h = 1e-4;
  for (double x : {0.5, 1.0}) {
    const double d1l = (tail_ramp(x) - tail_ramp(x - h)) / h, d1r = (tail_ramp(x + h) - tail_ramp(x)) / h;
    EXPECT_NEAR(d1l, d1r, 1e-3);
  }
}
