#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dgf/errors.hpp"
#include "dgf/random.hpp"

namespace dgf {

/// Symmetric probability measure M(d alpha) on (0, 1) with a reflection-closed quadrature.
///
/// Nodes are stored as reflection pairs (a, 1 - a) with a in [1/2, 1). For a >= 1/2 the
/// subtraction 1 - a is exact in binary floating point, and so is 1 - (1 - a), so the node
/// set maps onto itself bit-for-bit under alpha -> 1 - alpha and every quadrature sum is
/// exactly reflection invariant.
class FragmentationKernel {
 public:
  enum class Variant { DiracHalf, Uniform01, SymmetricBeta, DiscreteSymmetric };

  struct Pair {
    double upper;   // in [1/2, 1)
    double weight;  // weight carried by each of the two nodes (the whole weight if upper == 1/2)
  };

  static FragmentationKernel dirac_half() {
    FragmentationKernel k(Variant::DiracHalf);
    k.pairs_.push_back({0.5, 1.0});
    k.finish();
    return k;
  }

  static FragmentationKernel uniform(int n_quad = 32) {
    FragmentationKernel k(Variant::Uniform01);
    k.shape_ = 1.0;
    k.build_gauss_jacobi(n_quad);
    return k;
  }

  /// Beta(a, a) on (0, 1); quadrature is Gauss-Jacobi with weight alpha^(a-1) (1-alpha)^(a-1).
  static FragmentationKernel symmetric_beta(double a, int n_quad = 32) {
    if (!(a > 0.0)) throw ParamOutOfRange("symmetric_beta: shape must be positive");
    FragmentationKernel k(Variant::SymmetricBeta);
    k.shape_ = a;
    k.build_gauss_jacobi(n_quad);
    return k;
  }

  /// Atoms (alpha_j, weight_j). Each atom is split evenly between alpha_j and 1 - alpha_j, so
  /// the result is symmetric; an already symmetric list is reproduced unchanged.
  static FragmentationKernel discrete(const std::vector<std::pair<double, double>>& atoms) {
    FragmentationKernel k(Variant::DiscreteSymmetric);
    double total = 0.0;
    for (auto [a, w] : atoms) {
      if (!(a > 0.0 && a < 1.0)) throw ParamOutOfRange("discrete kernel: atoms must lie strictly inside (0,1)");
      if (!(w > 0.0)) throw ParamOutOfRange("discrete kernel: weights must be positive");
      total += w;
    }
    if (atoms.empty()) throw ParamOutOfRange("discrete kernel: no atoms");
    for (auto [a, w] : atoms) {
      const double up = a >= 0.5 ? a : 1.0 - a;
      // An atom at 1/2 is its own reflection and keeps its full weight on one node.
      k.pairs_.push_back({up, up == 0.5 ? w / total : 0.5 * w / total});
    }
    std::sort(k.pairs_.begin(), k.pairs_.end(), [](const Pair& p, const Pair& q) { return p.upper < q.upper; });
    std::vector<Pair> merged;
    for (const auto& p : k.pairs_) {
      if (!merged.empty() && merged.back().upper == p.upper)
        merged.back().weight += p.weight;
      else
        merged.push_back(p);
    }
    k.pairs_ = std::move(merged);
    k.finish();
    return k;
  }

  Variant variant() const { return variant_; }
  double shape() const { return shape_; }
  const std::vector<Pair>& pairs() const { return pairs_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t n_quad() const { return nodes_.size(); }

  /// sum_q w_q g(alpha_q), accumulated pairwise.
  template <class G>
  double integrate(G&& g) const {
    double s = 0.0;
    for (const auto& p : pairs_) {
      if (p.upper == 0.5)
        s += p.weight * g(0.5);
      else
        s += p.weight * (g(p.upper) + g(1.0 - p.upper));
    }
    return s;
  }

  /// Draws alpha from M itself (not from the quadrature), strictly inside (0, 1).
  double sample(Engine& eng) const {
    switch (variant_) {
      case Variant::DiracHalf:
        return 0.5;
      case Variant::Uniform01:
        return uniform_open(eng);
      case Variant::SymmetricBeta: {
        std::gamma_distribution<double> g(shape_, 1.0);
        for (;;) {
          const double x = g(eng), y = g(eng);
          const double a = x / (x + y);
          if (a > 0.0 && a < 1.0) return a;
        }
      }
      case Variant::DiscreteSymmetric: {
        std::discrete_distribution<std::size_t> pick(weights_.begin(), weights_.end());
        return nodes_[pick(eng)];
      }
    }
    return 0.5;
  }

  std::string name() const {
    switch (variant_) {
      case Variant::DiracHalf:
        return "dirac_half";
      case Variant::Uniform01:
        return "uniform";
      case Variant::SymmetricBeta:
        return "beta";
      case Variant::DiscreteSymmetric:
        return "discrete";
    }
    return "?";
  }

 private:
  explicit FragmentationKernel(Variant v) : variant_(v) {}

  // Golub-Welsch for the symmetric Jacobi weight (1 - xi)^g (1 + xi)^g on [-1, 1], g = a - 1.
  void build_gauss_jacobi(int n) {
    if (n < 1) throw ParamOutOfRange("kernel quadrature needs at least one node");
    const double g = shape_ - 1.0;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
      const double k = i;
      const double den_a = 2.0 * k + 2.0 * g + 1.0;
      const double den_b = 2.0 * k + 2.0 * g - 1.0;
      double beta;
      if (std::abs(den_b) < 1e-12)
        beta = 0.5;  // Chebyshev limit at k = 1, g = -1/2
      else
        beta = k * (k + 2.0 * g) / (den_a * den_b);
      J(i, i - 1) = J(i - 1, i) = std::sqrt(beta);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    std::vector<std::pair<double, double>> nw(n);
    for (int i = 0; i < n; ++i) {
      const double v0 = es.eigenvectors()(0, i);
      nw[i] = {0.5 * (1.0 + es.eigenvalues()(i)), v0 * v0};
    }
    std::sort(nw.begin(), nw.end());
    double total = 0.0;
    for (auto& p : nw) total += p.second;
    // Symmetrize: average each node with the reflection of its mirror partner.
    for (int i = n - 1; i >= n / 2; --i) {
      const int j = n - 1 - i;
      if (i == j) {
        pairs_.push_back({0.5, nw[i].second / total});
      } else {
        const double up = 0.5 * (nw[i].first + (1.0 - nw[j].first));
        const double w = 0.5 * (nw[i].second + nw[j].second) / total;
        pairs_.push_back({std::max(up, 0.5), w});
      }
    }
    std::sort(pairs_.begin(), pairs_.end(), [](const Pair& p, const Pair& q) { return p.upper < q.upper; });
    finish();
  }

  void finish() {
    nodes_.clear();
    weights_.clear();
    double total = 0.0;
    for (const auto& p : pairs_) total += p.upper == 0.5 ? p.weight : 2.0 * p.weight;
    for (auto& p : pairs_) p.weight /= total;
    for (const auto& p : pairs_) {
      if (p.upper == 0.5) {
        nodes_.push_back(0.5);
        weights_.push_back(p.weight);
      } else {
        nodes_.push_back(1.0 - p.upper);
        weights_.push_back(p.weight);
        nodes_.push_back(p.upper);
        weights_.push_back(p.weight);
      }
    }
  }

  Variant variant_;
  double shape_ = 1.0;
  std::vector<Pair> pairs_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace dgf
