#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "dgf/errors.hpp"

namespace dgf {

/// Cell-average representation of a density on [0, x_max] with uniform cells.
/// Values outside [0, x_max] are taken to be zero.
struct GridFunction {
  double x_max = 1.0;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(double xmax, std::size_t n_cells, double fill = 0.0) : x_max(xmax), values(n_cells, fill) {
    if (!(xmax > 0.0) || n_cells == 0) throw ParamOutOfRange("GridFunction: need x_max > 0 and at least one cell");
  }

  GridFunction(double xmax, std::vector<double> v) : x_max(xmax), values(std::move(v)) {
    if (!(xmax > 0.0) || values.empty()) throw ParamOutOfRange("GridFunction: need x_max > 0 and at least one cell");
  }

  template <class F>
  static GridFunction from_function(double xmax, std::size_t n_cells, F&& f) {
    GridFunction g(xmax, n_cells);
    for (std::size_t j = 0; j < n_cells; ++j) g.values[j] = f(g.center(j));
    return g;
  }

  std::size_t size() const { return values.size(); }
  double dx() const { return x_max / static_cast<double>(values.size()); }
  double center(std::size_t j) const { return (static_cast<double>(j) + 0.5) * dx(); }
  double left_edge(std::size_t j) const { return static_cast<double>(j) * dx(); }

  double mass() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * dx();
  }

  /// Midpoint quadrature of <u, f>.
  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) s += values[j] * f(center(j));
    return s * dx();
  }

  double moment(double p) const {
    return integrate([p](double x) { return std::pow(x, p); });
  }

  /// Integral of the piecewise-constant reconstruction over [0, y].
  double cumulative(double y) const {
    if (y <= 0.0) return 0.0;
    const double h = dx();
    const double pos = y / h;
    const std::size_t n = values.size();
    std::size_t j = pos >= static_cast<double>(n) ? n : static_cast<std::size_t>(pos);
    double s = 0.0;
    for (std::size_t i = 0; i < j; ++i) s += values[i];
    s *= h;
    if (j < n) s += values[j] * (y - static_cast<double>(j) * h);
    return s;
  }

  /// Prefix sums of cell masses: result[j] = integral over [0, j dx].
  std::vector<double> prefix_masses() const {
    std::vector<double> c(values.size() + 1, 0.0);
    const double h = dx();
    for (std::size_t j = 0; j < values.size(); ++j) c[j + 1] = c[j] + values[j] * h;
    return c;
  }

  GridFunction& operator+=(const GridFunction& o) {
    for (std::size_t j = 0; j < values.size(); ++j) values[j] += o.values[j];
    return *this;
  }
  GridFunction& operator*=(double a) {
    for (double& v : values) v *= a;
    return *this;
  }
};

inline double l1_distance(const GridFunction& a, const GridFunction& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::abs(a.values[j] - b.values[j]);
  return s * a.dx();
}

}  // namespace dgf
