#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "dgf/errors.hpp"
#include "dgf/grid.hpp"
#include "dgf/random.hpp"

namespace dgf {

/// Initial trait measure nu_0 = mass * (probability law on [0, inf)).
struct InitialLaw {
  enum class Shape { PointMass, TruncatedGaussian, GridProfile };
  Shape shape = Shape::TruncatedGaussian;
  double mass = 1.0;
  double x0 = 1.0;     // point mass location
  double mean = 2.0;   // Gaussian location before truncation to [0, inf)
  double sd = 0.5;
  // Grid profile: piecewise-constant density on [0, profile_x_max], normalized internally.
  double profile_x_max = 1.0;
  std::vector<double> profile;

  static InitialLaw point_mass(double mass, double x0) {
    InitialLaw l;
    l.shape = Shape::PointMass;
    l.mass = mass;
    l.x0 = x0;
    return l;
  }
  static InitialLaw truncated_gaussian(double mass, double mean, double sd) {
    InitialLaw l;
    l.shape = Shape::TruncatedGaussian;
    l.mass = mass;
    l.mean = mean;
    l.sd = sd;
    return l;
  }
  static InitialLaw grid_profile(double mass, double x_max, std::vector<double> values) {
    InitialLaw l;
    l.shape = Shape::GridProfile;
    l.mass = mass;
    l.profile_x_max = x_max;
    l.profile = std::move(values);
    return l;
  }

  void check() const {
    if (!(mass >= 0.0) || !std::isfinite(mass)) throw ParamOutOfRange("initial mass must be finite and >= 0");
    switch (shape) {
      case Shape::PointMass:
        if (!(x0 >= 0.0)) throw ParamOutOfRange("point mass location must be >= 0");
        break;
      case Shape::TruncatedGaussian:
        if (!(sd > 0.0)) throw ParamOutOfRange("gaussian sd must be positive");
        break;
      case Shape::GridProfile: {
        if (profile.empty() || !(profile_x_max > 0.0)) throw ParamOutOfRange("grid profile is empty");
        double s = 0.0;
        for (double v : profile) {
          if (!(v >= 0.0)) throw ParamOutOfRange("grid profile values must be >= 0");
          s += v;
        }
        if (!(s > 0.0)) throw ParamOutOfRange("grid profile has zero mass");
        break;
      }
    }
  }

  /// Probability that a draw lies in [0, y].
  double cdf(double y) const {
    if (y < 0.0) return 0.0;
    switch (shape) {
      case Shape::PointMass:
        return y >= x0 ? 1.0 : 0.0;
      case Shape::TruncatedGaussian: {
        const double z0 = gauss_cdf((0.0 - mean) / sd);
        return (gauss_cdf((y - mean) / sd) - z0) / (1.0 - z0);
      }
      case Shape::GridProfile: {
        const GridFunction g{profile_x_max, profile};
        return g.cumulative(y) / g.cumulative(profile_x_max);
      }
    }
    return 0.0;
  }

  /// <nu_0 / mass, x>.
  double mean_trait() const {
    switch (shape) {
      case Shape::PointMass:
        return x0;
      case Shape::TruncatedGaussian: {
        const double a = -mean / sd;
        const double phi = std::exp(-0.5 * a * a) / std::sqrt(2.0 * M_PI);
        return mean + sd * phi / (1.0 - gauss_cdf(a));
      }
      case Shape::GridProfile: {
        const GridFunction g{profile_x_max, profile};
        return g.moment(1.0) / g.mass();
      }
    }
    return 0.0;
  }

  double sample(Engine& eng) const {
    switch (shape) {
      case Shape::PointMass:
        return x0;
      case Shape::TruncatedGaussian: {
        std::normal_distribution<double> n(mean, sd);
        for (;;) {
          const double v = n(eng);
          if (v >= 0.0) return v;
        }
      }
      case Shape::GridProfile: {
        std::discrete_distribution<std::size_t> pick(profile.begin(), profile.end());
        const double h = profile_x_max / static_cast<double>(profile.size());
        const std::size_t j = pick(eng);
        return (static_cast<double>(j) + uniform_open(eng)) * h;
      }
    }
    return 0.0;
  }

  /// Cell averages of nu_0 on a grid over [0, x_max]. A point mass is placed in its cell.
  GridFunction project(double x_max, std::size_t n_cells) const {
    GridFunction g(x_max, n_cells);
    const double h = g.dx();
    if (shape == Shape::PointMass) {
      const auto j = std::min<std::size_t>(n_cells - 1, static_cast<std::size_t>(x0 / h));
      g.values[j] = mass / h;
      return g;
    }
    double prev = 0.0;
    for (std::size_t j = 0; j < n_cells; ++j) {
      const double c = cdf(static_cast<double>(j + 1) * h);
      g.values[j] = mass * (c - prev) / h;
      prev = c;
    }
    return g;
  }

  /// Mass of nu_0 beyond y.
  double tail(double y) const { return mass * (1.0 - cdf(y)); }

 private:
  static double gauss_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
};

}  // namespace dgf
