#include "silt/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "silt/errors.hpp"
#include "silt/specfun.hpp"

namespace silt {

int MultiIndex::order() const noexcept {
  int k = 0;
  for (int v : n) k += v;
  return k;
}

namespace {

double norm_sq(std::span<const double> u) {
  double s = 0.0;
  for (double x : u) s += x * x;
  return s;
}

void check_args(const Path& path, const MultiIndex& idx, std::span<const double> u) {
  if (static_cast<int>(u.size()) != path.dim()) throw DomainError("chaos: u has the wrong dimension");
  if (idx.dim() != path.dim()) throw DomainError("chaos: multi-index has the wrong dimension");
  for (int v : idx.n) {
    if (v < 0) throw DomainError("chaos: multi-index entries must be non-negative");
  }
  if (norm_sq(u) == 0.0) throw DomainError("chaos: u must be non-zero");
}

}  // namespace

SignedLog chaos_term_log(const Path& path, const MultiIndex& idx, std::span<const double> u,
                         const SimplexQuadrature& quad, ChaosNormalization norm) {
  check_args(path, idx, u);
  if (quad.dim() != 2) throw DomainError("chaos_term: need a Delta_2 rule");
  const int d = path.dim();
  const double r2 = norm_sq(u);
  const int n_max = *std::max_element(idx.n.begin(), idx.n.end());
  std::vector<SignedLog> hx(static_cast<std::size_t>(n_max) + 1), hu(hx.size());
  std::vector<double> inc(static_cast<std::size_t>(d));
  double shared_shift = 0.0;
  if (norm == ChaosNormalization::Shared) {
    for (int v : idx.n) shared_shift += 0.5 * specfun::log_factorial(v);
  }
  SignedLogAccumulator acc;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const auto node = quad.node(i);
    const double tau = node[1] - node[0];
    if (!(tau > 0.0)) continue;
    path.increment(node[0], node[1], inc);
    const double root = std::sqrt(tau);
    double log_abs = std::log(quad.weight(i)) + specfun::log_heat_kernel_radial(r2, d, tau) + shared_shift;
    int sign = 1;
    for (int j = 0; j < d; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      const auto n = static_cast<std::size_t>(idx.n[jj]);
      if (n == 0) continue;
      specfun::hermite_normalized_log(inc[jj] / root, std::span<SignedLog>(hx.data(), n + 1));
      specfun::hermite_normalized_log(u[jj] / root, std::span<SignedLog>(hu.data(), n + 1));
      sign *= hx[n].sign * hu[n].sign;
      if (sign == 0) break;
      log_abs += hx[n].log_abs + hu[n].log_abs;
    }
    if (sign != 0) acc.add(log_abs, sign);
  }
  return acc.result();
}

double chaos_term(const Path& path, const MultiIndex& idx, std::span<const double> u, const SimplexQuadrature& quad,
                  ChaosNormalization norm) {
  return chaos_term_log(path, idx, u, quad, norm).value();
}

double chaos_order_sum(const Path& path, int k, std::span<const double> u, const SimplexQuadrature& quad) {
  if (k < 0) throw DomainError("chaos_order_sum: k must be non-negative");
  MultiIndex zero{std::vector<int>(static_cast<std::size_t>(path.dim()), 0)};
  check_args(path, zero, u);
  const int d = path.dim();
  const double r2 = norm_sq(u);
  const auto len = static_cast<std::size_t>(k) + 1;
  std::vector<double> hx(len), hu(len), poly(len), next(len);
  std::vector<double> inc(static_cast<std::size_t>(d));
  CompensatedSum acc;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const auto node = quad.node(i);
    const double tau = node[1] - node[0];
    if (!(tau > 0.0)) continue;
    path.increment(node[0], node[1], inc);
    const double root = std::sqrt(tau);
    std::fill(poly.begin(), poly.end(), 0.0);
    poly[0] = 1.0;
    for (int j = 0; j < d; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      specfun::hermite_normalized_weighted(inc[jj] / root, 0.0, hx);
      // e^{-x^2/4} per u factor; restored below through the kernel.
      specfun::hermite_normalized_weighted(u[jj] / root, 0.25, hu);
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t a = 0; a < len; ++a) {
        if (poly[a] == 0.0) continue;
        for (std::size_t b = 0; a + b < len; ++b) next[a + b] += poly[a] * hx[b] * hu[b];
      }
      poly.swap(next);
    }
    // p_tau(u) e^{|u|^2/4tau} = (2 pi tau)^{-d/2} e^{-|u|^2/4tau}
    const double kernel = specfun::heat_kernel_radial(0.5 * r2, d, tau);
    acc.add(quad.weight(i) * poly[static_cast<std::size_t>(k)] * kernel);
  }
  return acc.value();
}

ChaosBoundConstants calibrate_chaos_constants(const ChaosCalibration& cal) {
  ChaosBoundConstants c;
  specfun::SzegoCalibration sz;
  sz.alpha = 0.25;
  sz.n_max = cal.n_max;
  sz.x_step = cal.x_step;
  sz.margin = cal.margin;
  c.szego_c = specfun::calibrate_szego_constant(sz);
  // sup of m(u,2)/log(1/|u|) on a log grid; the ratio is monotone between
  // grid points up to O(step) relative changes, covered by the margin.
  const double lo = std::log(cal.log_branch_min_u), hi = std::log(cal.log_branch_max_u);
  const int points = 2000;
  double sup = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double r = std::exp(lo + (hi - lo) * i / points);
    sup = std::max(sup, specfun::simplex_mass(2, r) / std::log(1.0 / r));
  }
  // The ratio rises toward its u -> 0 limit 1/pi, which the grid never reaches.
  c.c0 = std::max(sup, 1.0 / std::numbers::pi) * (1.0 + cal.margin);
  c.log_branch_max_u = cal.log_branch_max_u;
  return c;
}

double log_chaos_constant(const MultiIndex& idx, const ChaosBoundConstants& c, ChaosNormalization norm) {
  const int d = idx.dim();
  const int k = idx.order();
  if (k + d < 3) throw UnsupportedRegime("log_chaos_constant: power branch needs k + d >= 3");
  if (!(c.szego_c > 0.0)) throw DomainError("log_chaos_constant: Szego constant must be positive");
  double log_c = d * std::log(c.szego_c) + 0.5 * d;
  for (int v : idx.n) {
    log_c += -std::log(static_cast<double>(std::max(v, 1))) / 12.0 + 0.5 * specfun::log_factorial(v);
    if (norm == ChaosNormalization::Shared) log_c += 0.5 * specfun::log_factorial(v);
  }
  log_c += -0.5 * d * std::log(2.0 * std::numbers::pi) + (k + d - 2) * std::log(2.0) +
           std::lgamma(0.5 * (k + d) - 1.0);
  return log_c;
}

double chaos_term_bound(const Path& path, const MultiIndex& idx, std::span<const double> u,
                        const ChaosBoundConstants& c, ChaosNormalization norm) {
  check_args(path, idx, u);
  const double r = std::sqrt(norm_sq(u));
  const int d = path.dim();
  const int k = idx.order();
  if (d == 2 && k == 0) {
    if (r > c.log_branch_max_u) throw UnsupportedRegime("chaos_term_bound: log branch needs |u| <= calibrated range");
    if (!(c.c0 > 0.0)) throw DomainError("chaos_term_bound: c0 must be positive");
    return std::log(c.c0) + std::log(std::log(1.0 / r));
  }
  double z = 0.0;
  for (double v : path.coordinate_max_abs()) z += v;
  return log_chaos_constant(idx, c, norm) + 2.0 * z - (k + d - 2) * std::log(r);
}

}  // namespace silt
