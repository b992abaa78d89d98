#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dgf/errors.hpp"
#include "dgf/grid.hpp"

namespace dgf {

/// (1/K) sum_i delta_{x_i}
struct EmpiricalMeasure {
  std::vector<double> points;
  std::size_t K = 1;

  double mass() const { return static_cast<double>(points.size()) / static_cast<double>(K); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (double x : points) s += f(x);
    return s / static_cast<double>(K);
  }
};

/// Weighted point measure sum_i w_i delta_{x_i}; handy for atoms in tests.
struct AtomicMeasure {
  std::vector<double> points;
  std::vector<double> weights;

  double mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] * f(points[i]);
    return s;
  }
};

/// Member of the bounded-Lipschitz test class with ||phi||_inf + Lip(phi) <= 1.
struct DictionaryMember {
  enum class Kind { Constant, Ramp, Cosine, Sine, Exponential };
  Kind kind = Kind::Constant;
  double a = 0.0;  // ramp start / frequency / decay rate
  double w = 1.0;  // ramp width

  double operator()(double x) const {
    switch (kind) {
      case Kind::Constant:
        return 0.5;
      case Kind::Ramp: {
        const double r = std::clamp((x - a) / w, 0.0, 1.0);
        return (2.0 * r - 1.0) / (1.0 + 2.0 / w);
      }
      case Kind::Cosine:
        return std::cos(a * x) / (1.0 + a);
      case Kind::Sine:
        return std::sin(a * x) / (1.0 + a);
      case Kind::Exponential:
        return std::exp(-a * std::max(x, 0.0)) / (1.0 + a);
    }
    return 0.0;
  }

  /// Analytic sup-norm + Lipschitz constant on [0, inf).
  double certified_norm() const {
    switch (kind) {
      case Kind::Constant:
        return 0.5;
      case Kind::Ramp:  // sup 1/(1+2/w) plus slope (2/w)/(1+2/w)
      case Kind::Cosine:
      case Kind::Sine:
      case Kind::Exponential:
        return 1.0;
    }
    return 0.0;
  }

  std::string describe() const {
    switch (kind) {
      case Kind::Constant:
        return "const(0.5)";
      case Kind::Ramp:
        return "ramp(a=" + std::to_string(a) + ",w=" + std::to_string(w) + ")";
      case Kind::Cosine:
        return "cos(k=" + std::to_string(a) + ")";
      case Kind::Sine:
        return "sin(k=" + std::to_string(a) + ")";
      case Kind::Exponential:
        return "exp(lambda=" + std::to_string(a) + ")";
    }
    return "?";
  }
};

/// Finite family of certified bounded-Lipschitz test functions.
struct TestDictionary {
  std::vector<DictionaryMember> members;
  double cert_x_max = 0.0;
  std::size_t cert_grid_n = 0;
  double worst_measured_norm = 0.0;

  /// Measures sup|phi| + max slope on a uniform grid of [0, x_max] and rejects any member
  /// whose measured norm exceeds 1 (up to rounding).
  void certify(double x_max, std::size_t grid_n) {
    cert_x_max = x_max;
    cert_grid_n = grid_n;
    worst_measured_norm = 0.0;
    const double h = x_max / static_cast<double>(grid_n - 1);
    for (const auto& m : members) {
      double sup = 0.0, lip = 0.0, prev = m(0.0);
      sup = std::abs(prev);
      for (std::size_t i = 1; i < grid_n; ++i) {
        const double v = m(h * static_cast<double>(i));
        sup = std::max(sup, std::abs(v));
        lip = std::max(lip, std::abs(v - prev) / h);
        prev = v;
      }
      const double norm = sup + lip;
      worst_measured_norm = std::max(worst_measured_norm, norm);
      if (norm > 1.0 + 1e-9 || m.certified_norm() > 1.0 + 1e-12)
        throw ParamOutOfRange("test dictionary member " + m.describe() + " violates its norm bound");
    }
  }

  /// Default family of `size` members: the constant 1/2, centered ramps, damped cosines and
  /// sines, and scaled exponentials, spread over the trait scale `x_scale`.
  static TestDictionary standard(std::size_t size = 64, double x_scale = 10.0) {
    TestDictionary d;
    using K = DictionaryMember::Kind;
    d.members.push_back({K::Constant, 0.0, 1.0});
    const std::size_t rest = size > 0 ? size - 1 : 0;
    const std::size_t n_ramp = rest / 2;
    const std::size_t n_osc = (rest - n_ramp) / 3;
    const std::size_t n_exp = rest - n_ramp - 2 * n_osc;
    // Ramps: starts over [0, x_scale], widths cycling through {0.5, 1, 2, 4}.
    const double widths[] = {0.5, 1.0, 2.0, 4.0};
    for (std::size_t i = 0; i < n_ramp; ++i) {
      const double a = x_scale * static_cast<double>(i / 4) / static_cast<double>(std::max<std::size_t>(1, (n_ramp + 3) / 4));
      d.members.push_back({K::Ramp, a, widths[i % 4]});
    }
    for (std::size_t i = 0; i < n_osc; ++i) {
      const double k = 0.25 * static_cast<double>(i + 1);
      d.members.push_back({K::Cosine, k, 1.0});
      d.members.push_back({K::Sine, k, 1.0});
    }
    for (std::size_t i = 0; i < n_exp; ++i) {
      const double lam = 0.05 * std::pow(2.0, static_cast<double>(i) * 8.0 / static_cast<double>(std::max<std::size_t>(1, n_exp - 1)));
      d.members.push_back({K::Exponential, lam, 1.0});
    }
    d.certify(std::max(4.0 * x_scale, 1.0), 20001);
    return d;
  }
};

/// max over the dictionary of |<mu1 - mu2, phi>|: a lower bound of the bounded-Lipschitz distance.
template <class M1, class M2>
double bl_distance(const M1& mu1, const M2& mu2, const TestDictionary& dict) {
  double best = 0.0;
  for (const auto& m : dict.members) {
    const double d = mu1.integrate(m) - mu2.integrate(m);
    best = std::max(best, std::abs(d));
  }
  return best;
}

/// <mu, 1 + x^p>, with x^0 = 1 (so p = 0 gives twice the mass).
template <class M>
double moments(const M& mu, double p) {
  return mu.integrate([p](double x) { return 1.0 + (p == 0.0 ? 1.0 : std::pow(x, p)); });
}

/// Monotone C^2 ramp: 0 on [0, 1/2], 1 on [1, inf), quintic smoothstep in between.
inline double tail_ramp(double x) {
  if (x <= 0.5) return 0.0;
  if (x >= 1.0) return 1.0;
  const double t = (x - 0.5) / 0.5;
  return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

/// <mu, f(x / n)> with f the tail ramp.
template <class M>
double tail_mass(const M& mu, double n) {
  if (!(n > 0.0)) throw ParamOutOfRange("tail_mass: scale must be positive");
  return mu.integrate([n](double x) { return tail_ramp(x / n); });
}

}  // namespace dgf
