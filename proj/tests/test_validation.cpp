#include <gtest/gtest.h>

#include "support.hpp"

using namespace dgf;

namespace {

FamilySpec example_family() {
  FamilySpec f;
  f.r_in = 2.0;
  f.drift = {1.0, 1.0, 0.0};
  f.diffusion = {DiffusionSpec::Kind::Multiplicative, 1.0, 1.0, 0.0, 0.0};
  f.birth = {1.0, {MonodSpec::Kind::Constant, 1.0}, {}};
  f.death = {1.0, 0.0, {}};
  f.consumption = {1.0, {MonodSpec::Kind::Monod, 1.0}, {}, 0.0};
  return f;
}

}  // namespace

TEST(Validation, ExampleFamilyPassesWithUnitLowerConstant) {
  const auto c = make_coefficients(example_family(), 10.0, 2.0);
  const auto rep = validate_coefficients(c, 10.0, 2.0, 201);
  for (const auto& e : rep.entries) EXPECT_NE(e.status, ValidationEntry::Status::Fail) << e.id << " " << e.clause;
  EXPECT_TRUE(rep.passed());
  EXPECT_NEAR(rep.c_lower, 1.0, 1e-12);
}

TEST(Validation, DiffusionOffsetFailsAtZeroWithWitness) {
  auto f = example_family();
  f.diffusion.offset = 0.1;
  const auto c = make_coefficients(f, 10.0, 2.0);
  const auto rep = validate_coefficients(c, 10.0, 2.0, 201);
  const auto* e = rep.find("A1.3c");
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->status, ValidationEntry::Status::Fail);
  EXPECT_EQ(e->witness_x, 0.0);
  EXPECT_NEAR(e->magnitude, 0.1, 1e-12);
  EXPECT_FALSE(rep.passed());
}

TEST(Validation, ConstantConsumptionFailsChiAtZeroResource) {
  auto f = example_family();
  f.consumption = {0.0, {}, {}, 0.5};
  const auto c = make_coefficients(f, 10.0, 2.0);
  const auto rep = validate_coefficients(c, 10.0, 2.0, 201);
  const auto* e = rep.find("A1.4");
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->status, ValidationEntry::Status::Fail);
  EXPECT_EQ(e->witness_r, 0.0);
  EXPECT_FALSE(std::isnan(e->witness_x));
}

TEST(Validation, FailEntriesCarryWitness) {
  auto f = example_family();
  f.diffusion.offset = 0.2;
  f.consumption.offset = 0.3;
  const auto c = make_coefficients(f, 10.0, 2.0);
  for (const auto& e : validate_coefficients(c, 10.0, 2.0, 51).entries)
    if (e.status == ValidationEntry::Status::Fail) {
      EXPECT_GT(e.magnitude, 0.0) << e.id;
      EXPECT_FALSE(std::isnan(e.witness_x) && std::isnan(e.witness_r)) << e.id;
    }
}

TEST(Validation, DeathBelowOneOnlyWarns) {
  auto f = example_family();
  f.death.d0 = 0.5;
  const auto c = make_coefficients(f, 10.0, 2.0);
  const auto rep = validate_coefficients(c, 10.0, 2.0, 101);
  EXPECT_EQ(rep.find("assd")->status, ValidationEntry::Status::Warn);
  EXPECT_TRUE(rep.passed());
}

TEST(Validation, MislabelledLipschitzConstantIsCaught) {
  auto c = make_coefficients(example_family(), 10.0, 2.0);
  c.bounds.diff.lip_x *= 0.5;
  EXPECT_EQ(validate_coefficients(c, 10.0, 2.0, 101).find("A1.1")->status, ValidationEntry::Status::Fail);
}

TEST(Validation, ShippedConfigsPassAndDeclaredBoundsAreTight) {
  for (const char* name : {"reference", "death_only", "birth_only", "reaction_free", "conservative", "point_mass"}) {
    const RunConfig cfg = support::load_shipped(name);
    const CoefficientSet c = cfg.coefficients();
    const auto rep = validate_coefficients(c, cfg.numerics.x_max, cfg.r_bar(), 401);
    EXPECT_TRUE(rep.passed()) << name;
    auto close = [&](double declared, double measured, const char* what) {
      EXPECT_LE(measured, declared * (1.0 + 1e-9) + 1e-12) << name << " " << what;
      EXPECT_GE(measured, 0.99 * declared - 1e-12) << name << " " << what;
    };
    close(c.bounds.zeta.sup, rep.measured.zeta.sup, "zeta");
    close(c.bounds.diff.sup, rep.measured.diff.sup, "D");
    close(c.bounds.birth.sup, rep.measured.birth.sup, "b");
    close(c.bounds.death.sup, rep.measured.death.sup, "d");
    close(c.bounds.chi.sup, rep.measured.chi.sup, "chi");
    // grid slopes never exceed the declared constants
    for (auto [meas, decl] : {std::pair{rep.measured.zeta, c.bounds.zeta}, std::pair{rep.measured.diff, c.bounds.diff},
                              std::pair{rep.measured.birth, c.bounds.birth}, std::pair{rep.measured.chi, c.bounds.chi}}) {
      EXPECT_LE(meas.lip_x, decl.lip_x * (1.0 + 1e-9) + 1e-12) << name;
      EXPECT_LE(meas.lip_r, decl.lip_r * (1.0 + 1e-9) + 1e-12) << name;
    }
  }
}

TEST(Validation, AssumptionFourConstantOnReference) {
  const RunConfig cfg = support::load_shipped("reference");
  const auto rep = validate_coefficients(cfg.coefficients(), cfg.numerics.x_max, cfg.r_bar(), 201);
  // zeta >= 0.5 and D / x = 0.2 (0.5 + r) >= 0.1
  EXPECT_NEAR(rep.c_lower, 0.1, 1e-12);
  EXPECT_EQ(rep.find("A4.1")->status, ValidationEntry::Status::Pass);
}
