#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace silt {

/// Entropic optimal transport parameters; regularization is in cost units.
struct TransportPlanSpec {
  double regularization = 0.05;
  int max_iterations = 20000;
  /// L1 violation of the first marginal.
  double tolerance = 1e-4;
};

struct SinkhornResult {
  /// <P, C> for the converged plan.
  double cost = 0.0;
  int iterations = 0;
  double violation = 0.0;
};

/// Log-domain Sinkhorn between uniform empirical measures on the rows of x
/// (count_x by dim) and y (count_y by dim) with squared-Euclidean cost.
/// The regularization is reached by halving from the largest cost entry,
/// warm-starting the dual potentials at every level. Throws
/// ConvergenceError with the last violation if max_iterations is exhausted.
SinkhornResult sinkhorn_squared_euclidean(std::span<const double> x, std::span<const double> y, std::size_t dim,
                                          const TransportPlanSpec& spec);

}  // namespace silt
