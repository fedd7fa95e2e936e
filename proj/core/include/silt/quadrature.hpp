#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace silt {

/// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

struct AdaptiveOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  /// Sub-intervals narrower than this are accepted as they are.
  double min_width = 1e-14;
  int max_intervals = 20000;
};

struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     const AdaptiveOptions& opts = {});

/// A positive-weight quadrature rule on the ordered simplex
/// Delta_k = {0 < t_1 < ... < t_k < 1}. Weights sum to 1/k!.
class SimplexQuadrature {
 public:
  SimplexQuadrature() = default;
  explicit SimplexQuadrature(int dim) : dim_(dim) {}

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> node(std::size_t i) const {
    return {nodes_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }
  double total_weight() const;

  void add(std::span<const double> point, double weight);

  /// For dim 2: sum_i w_i f(s_i, t_i).
  template <class F>
  double integrate2(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      acc += weights_[i] * f(nodes_[2 * i], nodes_[2 * i + 1]);
    }
    return acc;
  }

  /// Tensor Gauss rule mapped onto Delta_k through the collapsed coordinates
  /// t_1 = a_1, t_{j+1} = t_j + a_{j+1} (1 - t_j). For k = 2 this is
  /// s = a, t = a + b (1 - a) with Jacobian (1 - a) folded into the weights.
  static SimplexQuadrature tensor_gauss(int dim, int nodes_per_axis);

  /// Delta_2 rule in the coordinates (tau = t - s, s): tau is covered by
  /// dyadic panels [2^{-j-1}, 2^{-j}], j < levels, plus [0, 2^{-levels}],
  /// each with `tau_nodes` Gauss points; s in (0, 1 - tau) uses `s_nodes`.
  /// Resolves integrands concentrated at tau ~ |u|^2 for tiny |u|.
  static SimplexQuadrature graded(int levels, int tau_nodes, int s_nodes);

  /// Delta_2 rule split along a time grid: every off-diagonal cell pair is a
  /// square carrying a tensor rule refined toward its corners, and every
  /// diagonal cell is a triangle in (tau, s) coordinates graded toward
  /// tau = 0. Integrands with kinks on grid lines are smooth on each piece.
  static SimplexQuadrature grid_aligned(std::span<const double> breakpoints, int gauss_nodes = 4,
                                        int tau_levels = 12, int s_nodes = 8);

 private:
  int dim_ = 2;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace silt
