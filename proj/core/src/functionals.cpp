#include "silt/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "silt/errors.hpp"
#include "silt/numeric.hpp"
#include "silt/specfun.hpp"

namespace silt {

namespace {

double norm_of(std::span<const double> u) {
  double s = 0.0;
  for (double x : u) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double silt_epsilon(const Path& path, double eps, std::span<const double> u, const SimplexQuadrature& quad) {
  if (!(eps > 0.0)) throw DomainError("silt_epsilon: eps must be positive");
  if (static_cast<int>(u.size()) != path.dim()) throw DomainError("silt_epsilon: u has the wrong dimension");
  if (quad.dim() != 2) throw DomainError("silt_epsilon: need a Delta_2 rule");
  const int d = path.dim();
  std::vector<double> inc(static_cast<std::size_t>(d));
  CompensatedSum acc;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const auto node = quad.node(i);
    path.increment(node[0], node[1], inc);
    double r2 = 0.0;
    for (std::size_t j = 0; j < inc.size(); ++j) {
      const double z = inc[j] - u[j];
      r2 += z * z;
    }
    acc.add(quad.weight(i) * specfun::heat_kernel_radial(r2, d, eps));
  }
  return acc.value();
}

double centering_2d(double eps) {
  if (!(eps > 0.0)) throw DomainError("centering_2d: eps must be positive");
  return ((1.0 + eps) * std::log1p(1.0 / eps) - 1.0) / (2.0 * std::numbers::pi);
}

double silt_centered_2d(const Path& path, double eps, const SimplexQuadrature& quad) {
  if (path.dim() != 2) throw DomainError("silt_centered_2d: requires d = 2");
  const double zero[2] = {0.0, 0.0};
  return silt_epsilon(path, eps, zero, quad) - centering_2d(eps);
}

double renormalized_2d(const Path& path, double eps, std::span<const double> u, const SimplexQuadrature& quad) {
  if (path.dim() != 2) throw DomainError("renormalized_2d: requires d = 2");
  const double r = norm_of(u);
  if (r == 0.0) throw DomainError("renormalized_2d: u must be non-zero");
  return silt_epsilon(path, eps, u, quad) - std::log(1.0 / r) / std::numbers::pi;
}

double renormalized_3d(const Path& path, double eps, std::span<const double> u, const SimplexQuadrature& quad) {
  if (path.dim() != 3) throw DomainError("renormalized_3d: requires d = 3");
  const double r = norm_of(u);
  if (r == 0.0) throw DomainError("renormalized_3d: u must be non-zero");
  if (r >= 1.0) throw DomainError("renormalized_3d: log(1/|u|) must be positive");
  const double compensator = 1.0 / (2.0 * std::numbers::pi * r);
  return (silt_epsilon(path, eps, u, quad) - compensator) / std::sqrt(std::log(1.0 / r));
}

double expected_silt_epsilon(int d, double eps, double u_norm) {
  if (!(eps > 0.0)) throw DomainError("expected_silt_epsilon: eps must be positive");
  const double r2 = u_norm * u_norm;
  auto f = [&](double tau) { return (1.0 - tau) * specfun::heat_kernel_radial(r2, d, tau + eps); };
  AdaptiveOptions opts;
  opts.rel_tol = 1e-12;
  // Split where the integrand peaks so the first estimate sees the bump.
  const double peak = std::clamp(r2 / d - eps, 0.0, 1.0);
  double total = 0.0;
  if (peak > 0.0) total += integrate_adaptive(f, 0.0, peak, opts).value;
  total += integrate_adaptive(f, peak, 1.0, opts).value;
  return total;
}

}  // namespace silt
