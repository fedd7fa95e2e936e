#pragma once

#include <span>
#include <vector>

#include "silt/path.hpp"
#include "silt/quadrature.hpp"

namespace silt {

/// max(0, min(t1, t2) - max(s1, s2)).
double interval_overlap(double s1, double t1, double s2, double t2);

struct SobolevSpec {
  /// Sobolev index; must satisfy gamma < (4 - d) / 2.
  double gamma = -0.5;
  /// Truncation order; the hard cap when `adaptive_k` is set.
  int K = 64;
  bool adaptive_k = true;
  /// Adaptive K stops at the first k with (k+1)^gamma T_k / sum_{j<=k} below this.
  double tail_tol = 1e-3;
  std::vector<double> u;

  int dim() const noexcept { return static_cast<int>(u.size()); }
};

enum class SobolevScheme {
  /// Positional integral over (s_1, s_2) done exactly for every (tau_1,
  /// tau_2); the remaining 2-D integral uses log-graded panels.
  Reduced,
  /// Literal tensor product of two Delta_2 rules.
  Tensor,
};

struct SobolevOptions {
  SobolevScheme scheme = SobolevScheme::Reduced;
  /// Reduced scheme: tau_1 in dyadic panels down to 2^{-tau_levels}, each
  /// split into `panel_splits` pieces with `gauss_nodes` points; v =
  /// log(tau_1/tau_2) in panels graded toward 0.
  int tau_levels = 40;
  int panel_splits = 2;
  int gauss_nodes = 8;
  /// Tensor scheme: Gauss points per axis of each Delta_2 rule.
  int tensor_nodes = 24;
  int workers = 0;
};

/// T_k = \int_{Delta_2 x Delta_2} rho^k S_k(tau_1, tau_2) p^d_{tau_1}(u) p^d_{tau_2}(u),
/// rho = overlap / sqrt(tau_1 tau_2), S_k the order-k multi-index sum of
/// products of normalized Hermite factors, for k = 0..k_max.
std::vector<double> sobolev_terms(std::span<const double> u, int k_max, const SobolevOptions& opts = {});

struct SobolevNorm {
  double value = 0.0;
  int k_used = 0;
  double tail_ratio = 0.0;
  /// Unweighted T_k, k = 0..k_used.
  std::vector<double> terms;
};

/// sum_{k<=K} (k+1)^gamma T_k.
SobolevNorm sobolev_norm_sq_truncated(const SobolevSpec& spec, const SobolevOptions& opts = {});

struct CapacityBound {
  double value = 0.0;
  double m = 0.0;
  SobolevNorm norm;
};

/// m(u,d)^2 / |rho_2(u)|^2_{2,gamma}.
CapacityBound capacity_lower_bound(const SobolevSpec& spec, const SobolevOptions& opts = {});

/// min over grid pairs k < l of |w(t_l) - w(t_k) - u|.
double support_distance(const Path& path, std::span<const double> u);

}  // namespace silt
