#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace silt {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// A real number held as sign and log-magnitude; sign 0 means exactly zero.
struct SignedLog {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;

  double value() const noexcept { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
  static SignedLog from(double x) noexcept {
    if (x == 0.0) return {};
    return {std::log(std::abs(x)), x > 0 ? 1 : -1};
  }
};

/// Sum of terms given in sign/log-magnitude form. Terms are rescaled by the
/// largest magnitude before a compensated sum, so summands spanning hundreds
/// of orders of magnitude with alternating signs are handled.
class SignedLogAccumulator {
 public:
  void add(SignedLog term) {
    if (term.sign == 0 || !std::isfinite(term.log_abs)) return;
    terms_.push_back(term);
    if (term.log_abs > max_log_) max_log_ = term.log_abs;
  }
  void add(double log_abs, int sign) { add(SignedLog{log_abs, sign}); }

  SignedLog result() const {
    if (terms_.empty()) return {};
    CompensatedSum sum;
    for (const auto& t : terms_) sum.add(t.sign * std::exp(t.log_abs - max_log_));
    const double scaled = sum.value();
    if (scaled == 0.0) return {};
    return {max_log_ + std::log(std::abs(scaled)), scaled > 0 ? 1 : -1};
  }

 private:
  std::vector<SignedLog> terms_;
  double max_log_ = -std::numeric_limits<double>::infinity();
};

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  double variance = 0.0;
  std::size_t count = 0;
};

/// Sample mean, unbiased variance and standard error, accumulated in index
/// order.
inline MeanEstimate estimate_mean(std::span<const double> xs) {
  MeanEstimate est;
  est.count = xs.size();
  if (xs.empty()) return est;
  CompensatedSum sum;
  for (double x : xs) sum.add(x);
  est.mean = sum.value() / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    CompensatedSum sq;
    for (double x : xs) sq.add((x - est.mean) * (x - est.mean));
    est.variance = sq.value() / static_cast<double>(xs.size() - 1);
    est.standard_error = std::sqrt(est.variance / static_cast<double>(xs.size()));
  }
  return est;
}

/// Least-squares slope of y against x.
inline double fit_slope(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace silt
