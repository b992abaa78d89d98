#pragma once

#include <cstddef>
#include <vector>

#include "dgf/grid.hpp"
#include "dgf/kernel.hpp"

namespace dgf {

/// Fragmentation operator on test functions:  G[f](x) = -f(x) + 2 sum_q w_q f(alpha_q x).
template <class F>
double fragment_dual(F&& f, const FragmentationKernel& kernel, double x) {
  return -f(x) + 2.0 * kernel.integrate([&](double a) { return f(a * x); });
}

/// Fragmentation operator on densities:  G+[g](x) = -g(x) + sum_q w_q (2/alpha_q) g(x/alpha_q).
///
/// The gain term is computed cellwise as the exact average of the piecewise-constant
/// reconstruction over [x_j / alpha, x_{j+1} / alpha], so the total mass of the output equals
/// the mass of g up to rounding. Reads beyond x_max see zero.
inline GridFunction fragment_primal(const GridFunction& g, const FragmentationKernel& kernel) {
  const std::size_t n = g.size();
  const double h = g.dx();
  const std::vector<double> prefix = g.prefix_masses();
  auto cum = [&](double y) {
    const double pos = y / h;
    if (pos >= static_cast<double>(n)) return prefix[n];
    const auto j = static_cast<std::size_t>(pos);
    return prefix[j] + g.values[j] * (y - static_cast<double>(j) * h);
  };

  GridFunction out(g.x_max, n);
  const auto& nodes = kernel.nodes();
  const auto& weights = kernel.weights();
  std::vector<double> lower(nodes.size(), 0.0);  // cumulative mass at the left edge of the current cell
  for (std::size_t j = 0; j < n; ++j) {
    const double right = static_cast<double>(j + 1) * h;
    double gain = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      const double upper = cum(right / nodes[q]);
      gain += weights[q] * (upper - lower[q]);
      lower[q] = upper;
    }
    out.values[j] = -g.values[j] + 2.0 * gain / h;
  }
  return out;
}

}  // namespace dgf
