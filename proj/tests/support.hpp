#pragma once

#include <cmath>
#include <string>

#include "dgf/dgf.hpp"

namespace dgf::support {

inline std::string source_path(const std::string& rel) { return std::string(DGF_SOURCE_DIR) + "/" + rel; }

inline RunConfig load_shipped(const std::string& name) { return load_config(source_path("configs/" + name + ".json")); }

/// Hand-assembled coefficients with constant rates, declared bounds filled in.
inline CoefficientSet constant_set(double zeta, double diff_slope, double b, double d, double r_in = 1.0,
                                   double x_max = 40.0, double r_bar = 2.0) {
  CoefficientSet c;
  c.zeta = [zeta](double, double) { return zeta; };
  c.diff = [diff_slope](double x, double) { return diff_slope * x; };
  c.birth = [b](double, double) { return b; };
  c.death = [d](double) { return d; };
  c.chi = [](double, double r) { return r / (1.0 + r); };
  c.r_in = r_in;
  c.bounds.x_max = x_max;
  c.bounds.r_bar = r_bar;
  c.bounds.zeta = {zeta, 0.0, 0.0};
  c.bounds.diff = {diff_slope * x_max, diff_slope, 0.0};
  c.bounds.birth = {b, 0.0, 0.0};
  c.bounds.death = {d, 0.0, 0.0};
  c.bounds.chi = {1.0, 0.0, 1.0};
  return c;
}

/// One kernel per variant, with regular parameters.
inline std::vector<FragmentationKernel> shipped_kernels() {
  return {FragmentationKernel::dirac_half(), FragmentationKernel::uniform(32), FragmentationKernel::symmetric_beta(2.0, 32),
          FragmentationKernel::discrete({{0.3, 1.0}, {0.5, 2.0}, {0.9, 0.5}})};
}

/// Beta kernel with density blowing up at 0 and 1: puts quadrature nodes close to the endpoints.
inline FragmentationKernel singular_beta() { return FragmentationKernel::symmetric_beta(0.5, 32); }

inline double gauss_pdf(double x, double m, double s) {
  const double z = (x - m) / s;
  return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * M_PI));
}

/// Exact cell averages of a Gaussian density.
inline GridFunction gaussian_cells(double x_max, std::size_t n, double m, double s) {
  GridFunction g(x_max, n);
  const double h = g.dx();
  for (std::size_t j = 0; j < n; ++j) {
    const double a = g.left_edge(j), b = a + h;
    g.values[j] = 0.5 * (std::erf((b - m) / (s * std::sqrt(2.0))) - std::erf((a - m) / (s * std::sqrt(2.0)))) / h;
  }
  return g;
}

}  // namespace dgf::support
