#pragma once

#include <span>

#include "silt/path.hpp"
#include "silt/quadrature.hpp"

namespace silt {

/// sum_i w_i p^d_eps(w(t_i) - w(s_i) - u) over a Delta_2 rule.
double silt_epsilon(const Path& path, double eps, std::span<const double> u, const SimplexQuadrature& quad);

/// \int_{Delta_2} p^2_{t-s+eps}(0) ds dt = ((1+eps) log((1+eps)/eps) - 1) / (2 pi).
double centering_2d(double eps);

/// silt_epsilon(path, eps, 0) - centering_2d(eps); requires d = 2.
double silt_centered_2d(const Path& path, double eps, const SimplexQuadrature& quad);

/// silt_epsilon(path, eps, u) - log(1/|u|) / pi; requires d = 2, u != 0.
double renormalized_2d(const Path& path, double eps, std::span<const double> u, const SimplexQuadrature& quad);

/// (log 1/|u|)^{-1/2} (silt_epsilon(path, eps, u) - 1/(2 pi |u|)); requires
/// d = 3 and 0 < |u| < 1.
double renormalized_3d(const Path& path, double eps, std::span<const double> u, const SimplexQuadrature& quad);

/// E silt_epsilon = \int_0^1 (1 - tau) p^d_{tau+eps}(u) dtau, by adaptive
/// quadrature.
double expected_silt_epsilon(int d, double eps, double u_norm);

}  // namespace silt
