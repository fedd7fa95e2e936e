#pragma once

#include <span>
#include <vector>

#include "silt/numeric.hpp"

/// Scalar special functions and closed-form simplex integrals.
///
/// All routines are pure. Quantities involving factorials are exposed in log
/// form so chaos orders in the hundreds do not overflow.
namespace silt::specfun {

/// Offset u in R^d and variance t of a Gaussian heat kernel.
struct KernelPoint {
  std::vector<double> u;
  double t = 1.0;

  int dim() const noexcept { return static_cast<int>(u.size()); }
};

/// Parameters of I(alpha, d, u) = \int_{0<s<t<1} (t-s)^{-alpha} p^d_{t-s}(u) ds dt.
struct SimplexIntegralSpec {
  double alpha = 0.0;
  int d = 2;
  std::vector<double> u;

  double u_norm() const;
};

/// (2 pi t)^{-d/2} exp(-|u|^2 / 2t). Throws DomainError for t <= 0.
double heat_kernel(std::span<const double> u, double t);
double heat_kernel(const KernelPoint& p);
double log_heat_kernel(std::span<const double> u, double t);
double log_heat_kernel(const KernelPoint& p);

/// Radial forms taking |u|^2 and the dimension directly.
double log_heat_kernel_radial(double norm_sq, int d, double t);
double heat_kernel_radial(double norm_sq, int d, double t);

/// Gamma(s, a) = \int_a^inf z^{s-1} e^{-z} dz for any real s and a > 0.
double upper_incomplete_gamma(double s, double a);

/// E_1(a) = Gamma(0, a).
double exponential_integral_e1(double a);

/// Exact value of the simplex moment integral through the incomplete gamma
/// reduction z = |u|^2 / 2x.
double simplex_moment_integral(const SimplexIntegralSpec& spec);
double simplex_moment_integral(double alpha, int d, double u_norm);

/// Leading small-|u| behaviour of simplex_moment_integral. Power law for
/// alpha > 1 - d/2, logarithmic at alpha = 1 - d/2; UnsupportedRegime below.
double simplex_moment_asymptotic(const SimplexIntegralSpec& spec);
double simplex_moment_asymptotic(double alpha, int d, double u_norm);

/// m(u, d) = \int_{Delta_2} p^d_{t-s}(u) ds dt, the total mass of the
/// self-intersection measure at level u.
inline double simplex_mass(int d, double u_norm) { return simplex_moment_integral(0.0, d, u_norm); }

double log_factorial(int n);

/// Probabilists' Hermite polynomial He_n(x) by three-term recurrence.
double hermite_eval(int n, double x);

/// log|He_n(x)| and its sign, robust for large n and |x|.
SignedLog hermite_log_abs(int n, double x);

/// Fills out[k] = He_k(x) / sqrt(k!) * exp(-weight * x^2) for k = 0..out.size()-1.
/// The normalised recurrence is run with dynamic rescaling, so the result is
/// accurate wherever it is representable.
void hermite_normalized_weighted(double x, double weight, std::span<double> out);

/// Same sequence in sign/log-magnitude form (weight 0).
void hermite_normalized_log(double x, std::span<SignedLog> out);

/// log of n! sqrt(e) dt^{-n/2} exp(|increment|), the Cauchy-integral bound on
/// |He_n(increment / sqrt(dt))| valid for 0 < dt <= 1.
double cauchy_hermite_bound(int n, double increment, double dt);

/// log of c sqrt(n!) (n v 1)^{-(8 alpha - 1)/12} exp(alpha x^2).
double szego_bound(int n, double x, double alpha, double c);

struct SzegoCalibration {
  double alpha = 0.5;
  int n_max = 200;
  double x_step = 1e-3;
  /// Relative head-room added on top of the grid supremum.
  double margin = 0.01;
};

/// Smallest c, up to the margin, such that |He_n(x)| e^{-alpha x^2} <=
/// c sqrt(n!) (n v 1)^{-(8 alpha-1)/12} on the grid n <= n_max,
/// |x| <= 2 sqrt(n_max) + 12.
double calibrate_szego_constant(const SzegoCalibration& cal);

}  // namespace silt::specfun
