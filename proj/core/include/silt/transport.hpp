#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "silt/marginals.hpp"
#include "silt/numeric.hpp"
#include "silt/sinkhorn.hpp"

namespace silt {

/// Eigenvalues of the tridiagonal matrix A (diagonal 2n, last entry n,
/// off-diagonal -n): 2n (1 - cos((2j+1) pi / (2n+1))), ascending.
std::vector<double> hessian_eigenvalues(std::size_t n);

/// Smallest Hessian eigenvalue 2n (1 - cos(pi / (2n+1))).
double kappa(std::size_t n);

enum class LogSigmaScheme {
  /// Composite Gauss rules graded dyadically toward the grid lines, refined
  /// until successive levels agree.
  Dyadic,
  /// Nested adaptive Gauss-Kronrod on every grid piece.
  Adaptive,
};

struct EntropyOptions {
  LogSigmaScheme scheme = LogSigmaScheme::Dyadic;
  int gauss_nodes = 6;
  int initial_levels = 8;
  int max_levels = 48;
  /// Relative change between refinement levels that stops the dyadic scheme.
  double refine_tol = 1e-7;
  /// Relative tolerance of the adaptive scheme.
  double adaptive_tol = 1e-10;
};

struct LogSigmaIntegral {
  double value = 0.0;
  /// Dyadic scheme: relative change at the last refinement; adaptive
  /// scheme: estimated relative error.
  double relative_change = 0.0;
  int levels = 0;
};

/// \int_{Delta_2} log(sigma2(s,t)) p^d_{t-s}(u) ds dt on the uniform grid of
/// size n. The integrand has integrable log singularities on the grid
/// corners and along the diagonal cells.
LogSigmaIntegral log_sigma_integral(double u_norm, int d, std::size_t n, const EntropyOptions& opts = {});

struct EntropyBound {
  double value = 0.0;
  double m = 0.0;
  double log_sigma_integral = 0.0;
  /// The bound majorizes a relative entropy, so it is informative only when
  /// non-negative.
  bool vacuous = false;
};

/// -log(2 m (2 pi)^{d/2}) - d / (2 m) \int log(sigma2) p^d_{t-s}(u) ds dt.
EntropyBound entropy_bound(double u_norm, int d, std::size_t n, const EntropyOptions& opts = {});

struct TalagrandBound {
  /// 2 entropy / kappa_n, reported raw even when vacuous.
  double value = 0.0;
  double entropy = 0.0;
  double kappa = 0.0;
  bool vacuous = false;
};

TalagrandBound talagrand_bound(double u_norm, int d, std::size_t n, const EntropyOptions& opts = {});

struct WeightedBatch {
  std::vector<MarginalPoint> points;
  /// Self-normalized weights, summing to 1.
  std::vector<double> weights;
  /// Unnormalized density ratios q_{u,n}(x) / m(u,d).
  std::vector<double> ratios;
  double ess = 0.0;
};

/// Draws x ~ mu_n and weights each by q_{u,n}(x) / m(u,d). Throws
/// DegenerateProposal if every weight vanishes.
WeightedBatch weighted_theta_samples(std::span<const double> u, std::size_t n, std::uint64_t seed,
                                     std::size_t count, const MarginalDensity& density, int workers = 0);

/// 1 / sum w_i^2 for normalized weights.
double effective_sample_size(std::span<const double> weights);

/// Systematic resampling: count indices with one uniform offset from the
/// Philox stream (seed, stream).
std::vector<std::size_t> systematic_resample(std::span<const double> weights, std::size_t count,
                                             std::uint64_t seed, std::uint64_t stream = 0);

/// Monte Carlo estimate of E_{mu_n}[r log r], r = q_{u,n} / m(u,d).
MeanEstimate empirical_relative_entropy(std::span<const double> u, std::size_t n, std::uint64_t seed,
                                        std::size_t count, const MarginalDensity& density, int workers = 0);

/// Same estimator from precomputed ratios.
MeanEstimate relative_entropy_from_ratios(std::span<const double> ratios);

struct W2Estimate {
  /// Richardson-extrapolated W2^2, floored at 0.
  double value = 0.0;
  /// |C(eps/2) - C(eps)|, the size of the extrapolation step.
  double error = 0.0;
  double raw = 0.0;
  double cost_eps = 0.0;
  double cost_half_eps = 0.0;
  int iterations = 0;
};

/// W2^2 between two unweighted batches by entropic transport at eps and
/// eps/2 with linear extrapolation 2 C(eps/2) - C(eps).
W2Estimate debiased_w2(std::span<const double> x, std::span<const double> y, std::size_t dim,
                       const TransportPlanSpec& plan);

/// W2^2(theta~_{u,n}, mu_n): resampled weighted batch against an
/// independent mu_n batch. Requires count <= 5000 and d n <= 16.
W2Estimate empirical_w2(std::span<const double> u, std::size_t n, std::uint64_t seed, std::size_t count,
                        const MarginalDensity& density, const TransportPlanSpec& plan, int workers = 0);

/// splitmix64 of seed ^ tag, for deriving independent master seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace silt
