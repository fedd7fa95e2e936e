#include "silt/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "silt/errors.hpp"

namespace silt::specfun {

namespace {

double norm_squared(std::span<const double> u) {
  double s = 0.0;
  for (double x : u) s += x * x;
  return s;
}

void check_simplex_args(double alpha, int d, double u_norm) {
  if (d < 1) throw DomainError("simplex moment: dimension must be >= 1");
  if (!(alpha >= 0.0)) throw DomainError("simplex moment: alpha must be >= 0");
  if (!(u_norm > 0.0)) throw DomainError("simplex moment: u must be non-zero");
}

bool is_log_regime(double alpha, int d) { return std::abs(alpha - (1.0 - 0.5 * d)) < 1e-12; }

}  // namespace

double SimplexIntegralSpec::u_norm() const { return std::sqrt(norm_squared(u)); }

double log_heat_kernel_radial(double norm_sq, int d, double t) {
  if (!(t > 0.0)) throw DomainError("heat_kernel: variance must be positive, got " + std::to_string(t));
  if (d < 1) throw DomainError("heat_kernel: dimension must be >= 1");
  return -0.5 * d * std::log(2.0 * std::numbers::pi * t) - norm_sq / (2.0 * t);
}

double heat_kernel_radial(double norm_sq, int d, double t) {
  return std::exp(log_heat_kernel_radial(norm_sq, d, t));
}

double log_heat_kernel(std::span<const double> u, double t) {
  return log_heat_kernel_radial(norm_squared(u), static_cast<int>(u.size()), t);
}

double heat_kernel(std::span<const double> u, double t) { return std::exp(log_heat_kernel(u, t)); }

double heat_kernel(const KernelPoint& p) { return heat_kernel(p.u, p.t); }
double log_heat_kernel(const KernelPoint& p) { return log_heat_kernel(p.u, p.t); }

double simplex_moment_integral(double alpha, int d, double u_norm) {
  check_simplex_args(alpha, d, u_norm);
  const double a = 0.5 * u_norm * u_norm;
  const double r = alpha + 0.5 * d - 2.0;
  const double bracket = upper_incomplete_gamma(r + 1.0, a) - a * upper_incomplete_gamma(r, a);
  const double log_prefactor = (alpha - 1.0) * std::numbers::ln2 -
                               0.5 * d * std::log(std::numbers::pi) -
                               (2.0 * alpha + d - 2.0) * std::log(u_norm);
  return std::exp(log_prefactor) * bracket;
}

double simplex_moment_integral(const SimplexIntegralSpec& spec) {
  if (static_cast<int>(spec.u.size()) != spec.d) {
    throw DomainError("simplex moment: u must have d coordinates");
  }
  return simplex_moment_integral(spec.alpha, spec.d, spec.u_norm());
}

double simplex_moment_asymptotic(double alpha, int d, double u_norm) {
  check_simplex_args(alpha, d, u_norm);
  if (is_log_regime(alpha, d)) {
    return std::pow(2.0, alpha) / std::pow(std::numbers::pi, 0.5 * d) * std::log(1.0 / u_norm);
  }
  if (alpha < 1.0 - 0.5 * d) {
    throw UnsupportedRegime("simplex_moment_asymptotic: alpha < 1 - d/2 has no asymptotic form");
  }
  const double log_value = (alpha - 1.0) * std::numbers::ln2 + std::lgamma(alpha + 0.5 * d - 1.0) -
                           0.5 * d * std::log(std::numbers::pi) -
                           (2.0 * alpha + d - 2.0) * std::log(u_norm);
  return std::exp(log_value);
}

double simplex_moment_asymptotic(const SimplexIntegralSpec& spec) {
  if (static_cast<int>(spec.u.size()) != spec.d) {
    throw DomainError("simplex moment: u must have d coordinates");
  }
  return simplex_moment_asymptotic(spec.alpha, spec.d, spec.u_norm());
}

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: negative argument");
  return std::lgamma(n + 1.0);
}

double cauchy_hermite_bound(int n, double increment, double dt) {
  if (n < 0) throw DomainError("cauchy_hermite_bound: n must be >= 0");
  if (!(dt > 0.0)) throw DomainError("cauchy_hermite_bound: dt must be positive");
  return log_factorial(n) + 0.5 - 0.5 * n * std::log(dt) + std::abs(increment);
}

double szego_bound(int n, double x, double alpha, double c) {
  if (n < 0) throw DomainError("szego_bound: n must be >= 0");
  if (!(alpha >= 0.25 && alpha <= 0.5)) throw DomainError("szego_bound: alpha must lie in [1/4, 1/2]");
  if (!(c > 0.0)) throw DomainError("szego_bound: c must be positive");
  const double decay = (8.0 * alpha - 1.0) / 12.0;
  return std::log(c) + 0.5 * log_factorial(n) - decay * std::log(std::max(n, 1)) + alpha * x * x;
}

double calibrate_szego_constant(const SzegoCalibration& cal) {
  if (!(cal.alpha >= 0.25 && cal.alpha <= 0.5)) {
    throw DomainError("calibrate_szego_constant: alpha must lie in [1/4, 1/2]");
  }
  if (cal.n_max < 0 || !(cal.x_step > 0.0)) throw DomainError("calibrate_szego_constant: bad grid");
  const double decay = (8.0 * cal.alpha - 1.0) / 12.0;
  const double x_max = 2.0 * std::sqrt(static_cast<double>(cal.n_max)) + 12.0;
  const auto steps = static_cast<long>(std::ceil(x_max / cal.x_step));
  std::vector<double> scaled(static_cast<std::size_t>(cal.n_max) + 1);
  std::vector<double> envelope(scaled.size());
  for (std::size_t n = 0; n < envelope.size(); ++n) {
    envelope[n] = std::pow(std::max<double>(static_cast<double>(n), 1.0), decay);
  }
  double sup = 0.0;
  // He_n(-x) = (-1)^n He_n(x): the half line suffices.
  for (long i = 0; i <= steps; ++i) {
    const double x = i * cal.x_step;
    hermite_normalized_weighted(x, cal.alpha, scaled);
    for (std::size_t n = 0; n < scaled.size(); ++n) {
      sup = std::max(sup, std::abs(scaled[n]) * envelope[n]);
    }
  }
  return sup * (1.0 + cal.margin);
}

}  // namespace silt::specfun
