#include <cmath>
#include <limits>
#include <string>

#include "silt/errors.hpp"
#include "silt/numeric.hpp"
#include "silt/specfun.hpp"

namespace silt::specfun {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 100000;

// Modified Lentz evaluation of the continued fraction
// Gamma(s,a) = a^s e^{-a} / (a+1-s - 1(1-s)/(a+3-s - 2(2-s)/(a+5-s - ...))).
double upper_gamma_continued_fraction(double s, double a) {
  double b = a + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      return std::exp(s * std::log(a) - a) * h;
    }
  }
  throw ConvergenceError("upper_incomplete_gamma: continued fraction did not converge", h);
}

// gamma(s, a) = a^s e^{-a} sum_n a^n / (s (s+1) ... (s+n)), s > 0.
double lower_gamma_series(double s, double a) {
  double term = 1.0 / s;
  CompensatedSum sum;
  sum.add(term);
  for (int n = 1; n <= kMaxIterations; ++n) {
    term *= a / (s + n);
    sum.add(term);
    if (std::abs(term) < kEps * std::abs(sum.value())) {
      return std::exp(s * std::log(a) - a) * sum.value();
    }
  }
  throw ConvergenceError("upper_incomplete_gamma: series did not converge", term);
}

// \int_a^1 z^{s-1} e^{-z} dz for 0 < a < 1 via termwise integration of the
// exponential series. Each term (1 - a^{s+k})/(s+k) is formed with expm1 so
// that s + k near zero degrades gracefully to -log(a).
double truncated_gamma_series(double s, double a) {
  const double log_a = std::log(a);
  CompensatedSum sum;
  double inv_factorial = 1.0;
  for (int k = 0; k <= kMaxIterations; ++k) {
    if (k > 0) inv_factorial /= k;
    const double p = s + k;
    const double power_integral =
        (std::abs(p) < 1e-300) ? -log_a : -std::expm1(p * log_a) / p;
    const double term = ((k % 2 == 0) ? 1.0 : -1.0) * inv_factorial * power_integral;
    sum.add(term);
    if (k > 2 && p > 1.0 && std::abs(term) < kEps * std::abs(sum.value())) {
      return sum.value();
    }
  }
  throw ConvergenceError("upper_incomplete_gamma: truncated series did not converge", 0.0);
}

}  // namespace

double upper_incomplete_gamma(double s, double a) {
  if (!(a > 0.0)) {
    throw DomainError("upper_incomplete_gamma: a must be positive, got " + std::to_string(a));
  }
  if (!std::isfinite(s)) throw DomainError("upper_incomplete_gamma: s must be finite");

  if (s >= 0.5 && a < s + 1.0) {
    return std::tgamma(s) - lower_gamma_series(s, a);
  }
  if (a >= 1.0) {
    return upper_gamma_continued_fraction(s, a);
  }
  return upper_gamma_continued_fraction(s, 1.0) + truncated_gamma_series(s, a);
}

double exponential_integral_e1(double a) { return upper_incomplete_gamma(0.0, a); }

}  // namespace silt::specfun
