#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "silt/quadrature.hpp"
#include "silt/time_grid.hpp"

namespace silt {

/// Projection of W(t) - W(s) onto the span of the grid increments:
/// alpha_j = |[s,t] cap [t_{j-1}, t_j]| and residual variance
/// sigma2 = (t - s) - sum_j alpha_j^2 / (t_j - t_{j-1}).
struct OverlapDecomposition {
  std::vector<double> alpha;
  double sigma2 = 0.0;
  double s = 0.0;
  double t = 0.0;
};

OverlapDecomposition overlap_decomposition(double s, double t, const TimeGrid& grid);

/// n points x_1..x_n in R^d (x_0 = 0 implicit), stored row-major.
class MarginalPoint {
 public:
  MarginalPoint(std::size_t n, int d) : n_(n), d_(d), x_(n * static_cast<std::size_t>(d), 0.0) {}
  MarginalPoint(std::size_t n, int d, std::vector<double> flat);

  std::size_t cells() const noexcept { return n_; }
  int dim() const noexcept { return d_; }
  /// x_j for j = 1..n.
  std::span<double> operator[](std::size_t j) {
    return {x_.data() + (j - 1) * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  std::span<const double> operator[](std::size_t j) const {
    return {x_.data() + (j - 1) * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  /// x_j for j = 0..n, returning the origin for j = 0.
  double coord(std::size_t j, std::size_t i) const {
    return j == 0 ? 0.0 : x_[(j - 1) * static_cast<std::size_t>(d_) + i];
  }
  std::span<const double> flat() const noexcept { return x_; }

  bool operator==(const MarginalPoint&) const = default;

 private:
  std::size_t n_;
  int d_;
  std::vector<double> x_;
};

/// E[p^d_eps(W(t) - W(s) - u) | W(t_1) = x_1, ..., W(t_n) = x_n]
/// = p^d_{eps + sigma2}(sum_j alpha_j / (t_j - t_{j-1}) (x_j - x_{j-1}) - u).
/// Zero total variance returns 0 off the centre and throws DegenerateKernel on it.
double conditional_kernel(double s, double t, const TimeGrid& grid, double eps, std::span<const double> u,
                          const MarginalPoint& x);

/// Quadrature of (s,t) -> p^d_{sigma2}(n sum_j alpha_j (x_j - x_{j-1}) - u)
/// over any Delta_2 rule on a uniform grid. Nodes with sigma2 < 1e-12
/// contribute 0 unless the kernel argument is below 1e-6 in norm, in which
/// case they are split into four sub-nodes.
double marginal_density_q(std::span<const double> u, const TimeGrid& grid, const MarginalPoint& x,
                          const SimplexQuadrature& quad);

struct MarginalDensityOptions {
  int gauss_nodes = 3;
  int tau_levels = 12;
  int s_nodes = 6;
};

/// q_{u,n} on a fixed uniform grid with the grid-aligned Delta_2 rule. The
/// per-node projection data are tabulated once, after which each
/// evaluation costs O(d) per node.
class MarginalDensity {
 public:
  MarginalDensity(std::size_t n, int d, const MarginalDensityOptions& opts = {});

  double operator()(std::span<const double> u, const MarginalPoint& x) const;

  /// sum_i w_i p^d_{t_i - s_i}(u): the exact mean of operator() under mu_n.
  double expected_value(double u_norm) const;

  std::size_t cells() const noexcept { return n_; }
  int dim() const noexcept { return d_; }
  std::size_t nodes() const noexcept { return table_.size(); }

 private:
  struct Node {
    double weight;
    double sigma2;
    double tau;
    double c_first;
    double c_last;
    std::uint32_t first;
    std::uint32_t last;
  };
  std::size_t n_;
  int d_;
  std::vector<Node> table_;
};

/// count i.i.d. draws of (W(1/n), ..., W(1)); draw i uses Philox stream i.
std::vector<MarginalPoint> sample_mu_n(std::size_t n, int d, std::uint64_t seed, std::size_t count);

/// CSV with header x1_1,...,x1_d,x2_1,...; one row per point.
void write_marginal_csv(std::ostream& os, std::span<const MarginalPoint> points);
std::vector<MarginalPoint> read_marginal_csv(std::istream& is, std::size_t n, int d);

}  // namespace silt
