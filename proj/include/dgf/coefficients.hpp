#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "dgf/errors.hpp"

namespace dgf {

/// Bounded multiplicative trait profile used by birth, death and consumption rates.
struct ShapeSpec {
  enum class Kind { One, Saturating };  // 1, or x / (x + theta)
  Kind kind = Kind::One;
  double theta = 1.0;

  double operator()(double x) const { return kind == Kind::One ? 1.0 : x / (x + theta); }
  double derivative(double x) const {
    return kind == Kind::One ? 0.0 : theta / ((x + theta) * (x + theta));
  }
  double sup(double x_max) const { return kind == Kind::One ? 1.0 : x_max / (x_max + theta); }
  double lip() const { return kind == Kind::One ? 0.0 : 1.0 / theta; }
};

/// Resource response: constant 1, or the Monod factor r / (kappa + r).
struct MonodSpec {
  enum class Kind { Constant, Monod };
  Kind kind = Kind::Constant;
  double kappa = 1.0;

  double operator()(double r) const { return kind == Kind::Constant ? 1.0 : r / (kappa + r); }
  double sup(double r_bar) const { return kind == Kind::Constant ? 1.0 : r_bar / (kappa + r_bar); }
  double lip() const { return kind == Kind::Constant ? 0.0 : 1.0 / kappa; }
};

/// zeta(x, r) = z0 + z1 r + zx x / (1 + x)
struct DriftSpec {
  double z0 = 1.0;
  double z1 = 0.0;
  double zx = 0.0;
};

/// Multiplicative:  D = delta0 x (delta1 + r) + offset
/// ResourceFree:    D = delta0 x (1 + s1 x / (1 + x)) + offset
/// Zero:            D = 0
struct DiffusionSpec {
  enum class Kind { Multiplicative, ResourceFree, Zero };
  Kind kind = Kind::Multiplicative;
  double delta0 = 0.2;
  double delta1 = 0.5;
  double s1 = 0.0;
  double offset = 0.0;
};

/// b(x, r) = b0 * resource(r) * shape(x)
struct BirthSpec {
  double b0 = 1.0;
  MonodSpec resource{};
  ShapeSpec shape{};
};

/// d(x) = d0 + d1 * shape(x)
struct DeathSpec {
  double d0 = 1.0;
  double d1 = 0.0;
  ShapeSpec shape{};
};

/// chi(x, r) = chi0 * resource(r) * shape(x) + offset
struct ConsumptionSpec {
  double chi0 = 1.0;
  MonodSpec resource{MonodSpec::Kind::Monod, 1.0};
  ShapeSpec shape{};
  double offset = 0.0;
};

/// Parameter vector of the preset family.
struct FamilySpec {
  DriftSpec drift{};
  DiffusionSpec diffusion{};
  BirthSpec birth{};
  DeathSpec death{};
  ConsumptionSpec consumption{};
  double r_in = 1.0;
};

struct FunctionBounds {
  double sup = 0.0;
  double lip_x = 0.0;
  double lip_r = 0.0;
};

/// Declared sup-norms and Lipschitz constants on [0, x_max] x [0, r_bar].
struct CoefficientBounds {
  double x_max = 0.0;
  double r_bar = 0.0;
  FunctionBounds zeta, diff, birth, death, chi;
};

using Field2 = std::function<double(double, double)>;
using Field1 = std::function<double(double)>;

/// The model coefficients. Built from a FamilySpec by make_coefficients, or assembled by hand
/// in tests (in which case the analytic derivatives may be left empty).
struct CoefficientSet {
  Field2 zeta;
  Field2 diff;
  Field2 birth;
  Field1 death;
  Field2 chi;
  double r_in = 1.0;
  bool degenerate_at_zero = true;
  CoefficientBounds bounds{};
  std::optional<FamilySpec> family;

  // x-derivatives, present for the analytic families only.
  Field2 dzeta_dx;
  Field2 ddiff_dx;

  bool has_x_derivatives() const { return static_cast<bool>(dzeta_dx) && static_cast<bool>(ddiff_dx); }
};

namespace detail {

inline double drift_value(const DriftSpec& s, double x, double r) {
  return s.z0 + s.z1 * r + s.zx * x / (1.0 + x);
}

inline double diffusion_value(const DiffusionSpec& s, double x, double r) {
  switch (s.kind) {
    case DiffusionSpec::Kind::Multiplicative:
      return s.delta0 * x * (s.delta1 + r) + s.offset;
    case DiffusionSpec::Kind::ResourceFree:
      return s.delta0 * x * (1.0 + s.s1 * x / (1.0 + x)) + s.offset;
    case DiffusionSpec::Kind::Zero:
      return 0.0;
  }
  return 0.0;
}

inline double diffusion_dx(const DiffusionSpec& s, double x, double r) {
  switch (s.kind) {
    case DiffusionSpec::Kind::Multiplicative:
      return s.delta0 * (s.delta1 + r);
    case DiffusionSpec::Kind::ResourceFree:
      return s.delta0 * (1.0 + s.s1 * (x * x + 2.0 * x) / ((1.0 + x) * (1.0 + x)));
    case DiffusionSpec::Kind::Zero:
      return 0.0;
  }
  return 0.0;
}

}  // namespace detail

/// Instantiates a preset family and computes its declared bounds on [0, x_max] x [0, r_bar].
inline CoefficientSet make_coefficients(const FamilySpec& f, double x_max, double r_bar) {
  if (!(x_max > 0.0) || !(r_bar > 0.0)) throw ParamOutOfRange("make_coefficients: x_max and r_bar must be positive");
  CoefficientSet c;
  c.family = f;
  c.r_in = f.r_in;
  c.degenerate_at_zero = f.diffusion.offset == 0.0;

  c.zeta = [s = f.drift](double x, double r) { return detail::drift_value(s, x, r); };
  c.dzeta_dx = [s = f.drift](double x, double) { return s.zx / ((1.0 + x) * (1.0 + x)); };
  c.diff = [s = f.diffusion](double x, double r) { return detail::diffusion_value(s, x, r); };
  c.ddiff_dx = [s = f.diffusion](double x, double r) { return detail::diffusion_dx(s, x, r); };
  c.birth = [s = f.birth](double x, double r) { return s.b0 * s.resource(r) * s.shape(x); };
  c.death = [s = f.death](double x) { return s.d0 + s.d1 * s.shape(x); };
  c.chi = [s = f.consumption](double x, double r) {
    return s.chi0 * s.resource(r) * s.shape(x) + s.offset;
  };

  CoefficientBounds& b = c.bounds;
  b.x_max = x_max;
  b.r_bar = r_bar;

  // Drift is monotone in each variable, so its extremes sit at the corners.
  {
    const double smax = x_max / (1.0 + x_max);
    double sup = 0.0;
    for (double r : {0.0, r_bar})
      for (double s : {0.0, smax}) sup = std::max(sup, std::abs(f.drift.z0 + f.drift.z1 * r + f.drift.zx * s));
    b.zeta = {sup, std::abs(f.drift.zx), std::abs(f.drift.z1)};
  }
  {
    const auto& d = f.diffusion;
    switch (d.kind) {
      case DiffusionSpec::Kind::Multiplicative:
        b.diff = {std::abs(d.delta0) * x_max * std::abs(d.delta1 + r_bar) + std::abs(d.offset),
                  std::abs(d.delta0) * std::max(std::abs(d.delta1), std::abs(d.delta1 + r_bar)),
                  std::abs(d.delta0) * x_max};
        break;
      case DiffusionSpec::Kind::ResourceFree: {
        const double q = x_max / (1.0 + x_max);
        b.diff = {std::abs(d.delta0) * x_max * (1.0 + d.s1 * q) + std::abs(d.offset),
                  std::abs(d.delta0) * (1.0 + d.s1 * (x_max * x_max + 2.0 * x_max) / ((1.0 + x_max) * (1.0 + x_max))),
                  0.0};
        break;
      }
      case DiffusionSpec::Kind::Zero:
        b.diff = {0.0, 0.0, 0.0};
        break;
    }
  }
  {
    const auto& s = f.birth;
    const double b0 = std::abs(s.b0);
    b.birth = {b0 * s.resource.sup(r_bar) * s.shape.sup(x_max), b0 * s.resource.sup(r_bar) * s.shape.lip(),
               b0 * s.resource.lip() * s.shape.sup(x_max)};
  }
  {
    const auto& s = f.death;
    b.death = {std::max(std::abs(s.d0), std::abs(s.d0 + s.d1 * s.shape.sup(x_max))), std::abs(s.d1) * s.shape.lip(),
               0.0};
  }
  {
    const auto& s = f.consumption;
    const double c0 = std::abs(s.chi0);
    b.chi = {c0 * s.resource.sup(r_bar) * s.shape.sup(x_max) + std::abs(s.offset),
             c0 * s.resource.sup(r_bar) * s.shape.lip(), c0 * s.resource.lip() * s.shape.sup(x_max)};
  }
  return c;
}

}  // namespace dgf
