#pragma once

#include <span>
#include <vector>

#include "silt/numeric.hpp"
#include "silt/path.hpp"
#include "silt/quadrature.hpp"

namespace silt {

/// (n_1, ..., n_d) naming one chaos term of order k = sum n_j.
struct MultiIndex {
  std::vector<int> n;

  int dim() const noexcept { return static_cast<int>(n.size()); }
  int order() const noexcept;
};

/// How the factorials enter a chaos term.
enum class ChaosNormalization {
  /// Each of the two Hermite factors of coordinate j carries 1/sqrt(n_j!),
  /// i.e. 1/n_j! per coordinate. Matches the Sobolev norm identity.
  PerFactor,
  /// A single 1/sqrt(n_j!) per coordinate, shared by both factors.
  Shared,
};

/// \int_{Delta_2} prod_j h_{n_j}((w_j(t)-w_j(s))/sqrt(t-s)) h_{n_j}(u_j/sqrt(t-s)) p^d_{t-s}(u)
/// with h_n = He_n / sqrt(n!) under PerFactor. Each node is evaluated in
/// sign/log form and the nodes are summed with rescaling.
SignedLog chaos_term_log(const Path& path, const MultiIndex& idx, std::span<const double> u,
                         const SimplexQuadrature& quad, ChaosNormalization norm = ChaosNormalization::PerFactor);
double chaos_term(const Path& path, const MultiIndex& idx, std::span<const double> u, const SimplexQuadrature& quad,
                  ChaosNormalization norm = ChaosNormalization::PerFactor);

/// Sum of chaos_term over all multi-indices of order k (PerFactor), by a
/// per-node generating-polynomial product over coordinates.
double chaos_order_sum(const Path& path, int k, std::span<const double> u, const SimplexQuadrature& quad);

/// Constants entering the almost-sure bound.
struct ChaosBoundConstants {
  /// Szego constant at alpha = 1/4: |h_n(x)| e^{-x^2/4} <= c (n v 1)^{-1/12}.
  double szego_c = 0.0;
  /// m(u, 2) <= c0 log(1/|u|) for 0 < |u| <= log_branch_max_u.
  double c0 = 0.0;
  double log_branch_max_u = 0.5;
};

struct ChaosCalibration {
  int n_max = 200;
  double x_step = 1e-3;
  double margin = 0.01;
  double log_branch_max_u = 0.5;
  double log_branch_min_u = 1e-12;
};

ChaosBoundConstants calibrate_chaos_constants(const ChaosCalibration& cal = {});

/// log C(n_1..n_d) for the power branch. The chain is: Cauchy bound on the
/// path factor (|w_j(t)-w_j(s)| <= 2 Z_j), Szego bound at alpha = 1/4 on the
/// u factor, then \int_0^inf tau^{-(k+d)/2} e^{-|u|^2/4tau} dtau. Requires
/// k + d >= 3.
double log_chaos_constant(const MultiIndex& idx, const ChaosBoundConstants& c,
                          ChaosNormalization norm = ChaosNormalization::PerFactor);

/// log of C(n) exp(2 sum Z_i) / |u|^{k+d-2} with Z_i = max |w_i|, or of
/// c0 log(1/|u|) when d = 2 and k = 0.
double chaos_term_bound(const Path& path, const MultiIndex& idx, std::span<const double> u,
                        const ChaosBoundConstants& c, ChaosNormalization norm = ChaosNormalization::PerFactor);

}  // namespace silt
