#include <cmath>
#include <limits>

#include "silt/errors.hpp"
#include "silt/specfun.hpp"

namespace silt::specfun {

namespace {

constexpr double kRescaleThreshold = 1e150;
constexpr double kLogRescale = 345.38776394910684;  // log(1e150)

// Runs h_{k+1} = (x h_k - sqrt(k) h_{k-1}) / sqrt(k+1) with h_0 = 1 and hands
// each (mantissa, log scale) pair to `emit`.
template <class Emit>
void normalized_recurrence(double x, std::size_t count, Emit&& emit) {
  if (count == 0) return;
  double prev = 0.0;
  double curr = 1.0;
  double log_scale = 0.0;
  emit(0, curr, log_scale);
  for (std::size_t k = 0; k + 1 < count; ++k) {
    const double next = (x * curr - std::sqrt(static_cast<double>(k)) * prev) /
                        std::sqrt(static_cast<double>(k + 1));
    prev = curr;
    curr = next;
    if (std::abs(curr) > kRescaleThreshold) {
      curr /= kRescaleThreshold;
      prev /= kRescaleThreshold;
      log_scale += kLogRescale;
    }
    emit(k + 1, curr, log_scale);
  }
}

}  // namespace

double hermite_eval(int n, double x) {
  if (n < 0) throw DomainError("hermite_eval: n must be >= 0");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double curr = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * curr - k * prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

void hermite_normalized_weighted(double x, double weight, std::span<double> out) {
  const double log_weight = -weight * x * x;
  normalized_recurrence(x, out.size(), [&](std::size_t k, double mantissa, double log_scale) {
    if (mantissa == 0.0) {
      out[k] = 0.0;
      return;
    }
    const double log_abs = std::log(std::abs(mantissa)) + log_scale + log_weight;
    out[k] = std::copysign(std::exp(log_abs), mantissa);
  });
}

void hermite_normalized_log(double x, std::span<SignedLog> out) {
  normalized_recurrence(x, out.size(), [&](std::size_t k, double mantissa, double log_scale) {
    if (mantissa == 0.0) {
      out[k] = SignedLog{};
      return;
    }
    out[k] = SignedLog{std::log(std::abs(mantissa)) + log_scale, mantissa > 0 ? 1 : -1};
  });
}

SignedLog hermite_log_abs(int n, double x) {
  if (n < 0) throw DomainError("hermite_log_abs: n must be >= 0");
  std::vector<SignedLog> seq(static_cast<std::size_t>(n) + 1);
  hermite_normalized_log(x, seq);
  SignedLog h = seq.back();
  if (h.sign != 0) h.log_abs += 0.5 * log_factorial(n);
  return h;
}

}  // namespace silt::specfun
