#include "silt/transport.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "silt/errors.hpp"
#include "silt/parallel.hpp"
#include "silt/quadrature.hpp"
#include "silt/rng.hpp"
#include "silt/specfun.hpp"

namespace silt {

std::vector<double> hessian_eigenvalues(std::size_t n) {
  if (n == 0) throw DomainError("hessian_eigenvalues: n must be >= 1");
  const double nn = static_cast<double>(n);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double angle = (2.0 * static_cast<double>(j) + 1.0) * std::numbers::pi / (2.0 * nn + 1.0);
    // 1 - cos x = 2 sin^2(x/2) avoids cancellation for small angles.
    const double half = std::sin(0.5 * angle);
    out[j] = 4.0 * nn * half * half;
  }
  return out;
}

double kappa(std::size_t n) {
  if (n == 0) throw DomainError("kappa: n must be >= 1");
  const double nn = static_cast<double>(n);
  const double half = std::sin(0.5 * std::numbers::pi / (2.0 * nn + 1.0));
  return 4.0 * nn * half * half;
}

namespace {

// Composite Gauss rule on [0, 1] with dyadic panels toward both ends.
GaussRule two_sided_graded(int levels, int gauss_nodes) {
  const GaussRule g = gauss_legendre(gauss_nodes);
  GaussRule out;
  auto panel = [&](double lo, double hi) {
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      out.nodes.push_back(lo + (hi - lo) * g.nodes[i]);
      out.weights.push_back((hi - lo) * g.weights[i]);
    }
  };
  std::vector<double> cuts{0.0};
  for (int l = levels; l >= 1; --l) cuts.push_back(std::ldexp(1.0, -l));
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    panel(cuts[i], cuts[i + 1]);
    panel(1.0 - cuts[i + 1], 1.0 - cuts[i]);
  }
  return out;
}

// Integrand pieces, in units where the cell width is h.
struct Pieces {
  double r2;
  int d;
  double h;

  // \int_0^1 (1 - x) log(h x (1 - x)) p_{h x}(u) dx; the diagonal triangle
  // equals h^2 times this.
  double diagonal(double x) const {
    if (!(x > 0.0 && x < 1.0)) return 0.0;
    return (1.0 - x) * std::log(h * x * (1.0 - x)) * specfun::heat_kernel_radial(r2, d, h * x);
  }

  // Square for the cell pair at gap g (number of whole cells in between).
  double square(double a, double b, int gap) const {
    const double sigma2 = h * (a * (1.0 - a) + b * (1.0 - b));
    if (!(sigma2 > 0.0)) return 0.0;
    return std::log(sigma2) * specfun::heat_kernel_radial(r2, d, h * (gap + a + b));
  }
};

double integrate_two_sided(const std::function<double(double)>& f, const AdaptiveOptions& opts, double& err) {
  static constexpr double kCuts[] = {0.0, 1.0 / 4096, 1.0 / 256, 1.0 / 16, 0.5, 15.0 / 16, 255.0 / 256,
                                     4095.0 / 4096, 1.0};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < std::size(kCuts); ++i) {
    const auto r = integrate_adaptive(f, kCuts[i], kCuts[i + 1], opts);
    total += r.value;
    err += r.error;
  }
  return total;
}

double dyadic_log_sigma(const Pieces& pc, std::size_t n, int levels, int gauss_nodes) {
  const GaussRule rule = two_sided_graded(levels, gauss_nodes);
  CompensatedSum diag;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) diag.add(rule.weights[i] * pc.diagonal(rule.nodes[i]));
  CompensatedSum total;
  total.add(static_cast<double>(n) * pc.h * pc.h * diag.value());
  for (std::size_t gap = 0; gap + 1 < n; ++gap) {
    CompensatedSum sq;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        sq.add(rule.weights[i] * rule.weights[j] *
               pc.square(rule.nodes[i], rule.nodes[j], static_cast<int>(gap)));
      }
    }
    total.add(static_cast<double>(n - 1 - gap) * pc.h * pc.h * sq.value());
  }
  return total.value();
}

}  // namespace

LogSigmaIntegral log_sigma_integral(double u_norm, int d, std::size_t n, const EntropyOptions& opts) {
  if (!(u_norm > 0.0)) throw DomainError("log_sigma_integral: u must be non-zero");
  if (n == 0) throw DomainError("log_sigma_integral: n must be >= 1");
  if (d < 1) throw DomainError("log_sigma_integral: d must be >= 1");
  const Pieces pc{u_norm * u_norm, d, 1.0 / static_cast<double>(n)};
  LogSigmaIntegral out;
  if (opts.scheme == LogSigmaScheme::Dyadic) {
    int levels = opts.initial_levels;
    double prev = dyadic_log_sigma(pc, n, levels, opts.gauss_nodes);
    for (;;) {
      if (levels + 4 > opts.max_levels) {
        throw ConvergenceError("log_sigma_integral: dyadic refinement did not settle", out.relative_change);
      }
      levels += 4;
      const double next = dyadic_log_sigma(pc, n, levels, opts.gauss_nodes);
      out.relative_change = std::abs(next - prev) / std::max(std::abs(next), 1e-300);
      prev = next;
      if (out.relative_change < opts.refine_tol) break;
    }
    out.value = prev;
    out.levels = levels;
    return out;
  }
  AdaptiveOptions inner;
  inner.rel_tol = 0.1 * opts.adaptive_tol;
  AdaptiveOptions outer;
  outer.rel_tol = opts.adaptive_tol;
  double err = 0.0;
  CompensatedSum total;
  const double diag = integrate_two_sided([&](double x) { return pc.diagonal(x); }, outer, err);
  total.add(static_cast<double>(n) * pc.h * pc.h * diag);
  double total_err = static_cast<double>(n) * pc.h * pc.h * err;
  for (std::size_t gap = 0; gap + 1 < n; ++gap) {
    double outer_err = 0.0;
    const double sq = integrate_two_sided(
        [&](double a) {
          double e = 0.0;
          return integrate_two_sided([&](double b) { return pc.square(a, b, static_cast<int>(gap)); }, inner, e);
        },
        outer, outer_err);
    const double factor = static_cast<double>(n - 1 - gap) * pc.h * pc.h;
    total.add(factor * sq);
    total_err += factor * outer_err;
  }
  out.value = total.value();
  out.relative_change = total_err / std::max(std::abs(out.value), 1e-300);
  return out;
}

EntropyBound entropy_bound(double u_norm, int d, std::size_t n, const EntropyOptions& opts) {
  if (!(u_norm > 0.0)) throw DomainError("entropy_bound: u must be non-zero");
  EntropyBound out;
  out.m = specfun::simplex_mass(d, u_norm);
  out.log_sigma_integral = log_sigma_integral(u_norm, d, n, opts).value;
  out.value = -std::log(2.0 * out.m) - 0.5 * d * std::log(2.0 * std::numbers::pi) -
              d / (2.0 * out.m) * out.log_sigma_integral;
  out.vacuous = out.value < 0.0;
  return out;
}

TalagrandBound talagrand_bound(double u_norm, int d, std::size_t n, const EntropyOptions& opts) {
  TalagrandBound out;
  out.entropy = entropy_bound(u_norm, d, n, opts).value;
  out.kappa = kappa(n);
  out.value = 2.0 * out.entropy / out.kappa;
  out.vacuous = out.entropy < 0.0;
  return out;
}

double effective_sample_size(std::span<const double> weights) {
  double s = 0.0;
  for (double w : weights) s += w * w;
  return s > 0.0 ? 1.0 / s : 0.0;
}

namespace {

double norm_of(std::span<const double> u) {
  double s = 0.0;
  for (double x : u) s += x * x;
  return std::sqrt(s);
}

std::vector<double> density_ratios(std::span<const double> u, std::span<const MarginalPoint> points,
                                   const MarginalDensity& density, int workers) {
  const double r = norm_of(u);
  if (r == 0.0) throw DomainError("transport: u must be non-zero");
  const double m = specfun::simplex_mass(density.dim(), r);
  return parallel_map<double>(points.size(), workers, [&](std::size_t i) { return density(u, points[i]) / m; });
}

}  // namespace

WeightedBatch weighted_theta_samples(std::span<const double> u, std::size_t n, std::uint64_t seed,
                                     std::size_t count, const MarginalDensity& density, int workers) {
  if (density.cells() != n) throw DomainError("weighted_theta_samples: density built for another grid");
  WeightedBatch batch;
  batch.points = sample_mu_n(n, density.dim(), seed, count);
  batch.ratios = density_ratios(u, batch.points, density, workers);
  CompensatedSum total;
  for (double r : batch.ratios) total.add(r);
  const double z = total.value();
  if (!(z > 0.0) || !std::isfinite(z)) throw DegenerateProposal("weighted_theta_samples: all weights vanish");
  batch.weights.resize(count);
  for (std::size_t i = 0; i < count; ++i) batch.weights[i] = batch.ratios[i] / z;
  batch.ess = effective_sample_size(batch.weights);
  return batch;
}

std::vector<std::size_t> systematic_resample(std::span<const double> weights, std::size_t count,
                                             std::uint64_t seed, std::uint64_t stream) {
  if (weights.empty()) throw DomainError("systematic_resample: no weights");
  CompensatedSum total;
  for (double w : weights) total.add(w);
  const double z = total.value();
  if (!(z > 0.0)) throw DegenerateProposal("systematic_resample: weights sum to zero");
  Philox rng(seed, stream);
  const double offset = rng.uniform();
  std::vector<std::size_t> out;
  out.reserve(count);
  double cumulative = weights[0] / z;
  std::size_t i = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double target = (static_cast<double>(k) + offset) / static_cast<double>(count);
    while (cumulative < target && i + 1 < weights.size()) {
      ++i;
      cumulative += weights[i] / z;
    }
    out.push_back(i);
  }
  return out;
}

MeanEstimate relative_entropy_from_ratios(std::span<const double> ratios) {
  std::vector<double> terms(ratios.size());
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double r = ratios[i];
    terms[i] = r > 0.0 ? r * std::log(r) : 0.0;
  }
  return estimate_mean(terms);
}

MeanEstimate empirical_relative_entropy(std::span<const double> u, std::size_t n, std::uint64_t seed,
                                        std::size_t count, const MarginalDensity& density, int workers) {
  if (density.cells() != n) throw DomainError("empirical_relative_entropy: density built for another grid");
  const auto points = sample_mu_n(n, density.dim(), seed, count);
  return relative_entropy_from_ratios(density_ratios(u, points, density, workers));
}

W2Estimate debiased_w2(std::span<const double> x, std::span<const double> y, std::size_t dim,
                       const TransportPlanSpec& plan) {
  W2Estimate out;
  const auto coarse = sinkhorn_squared_euclidean(x, y, dim, plan);
  TransportPlanSpec fine_plan = plan;
  fine_plan.regularization = 0.5 * plan.regularization;
  const auto fine = sinkhorn_squared_euclidean(x, y, dim, fine_plan);
  out.cost_eps = coarse.cost;
  out.cost_half_eps = fine.cost;
  out.raw = 2.0 * fine.cost - coarse.cost;
  out.value = std::max(0.0, out.raw);
  out.error = std::abs(fine.cost - coarse.cost);
  out.iterations = coarse.iterations + fine.iterations;
  return out;
}

W2Estimate empirical_w2(std::span<const double> u, std::size_t n, std::uint64_t seed, std::size_t count,
                        const MarginalDensity& density, const TransportPlanSpec& plan, int workers) {
  const int d = density.dim();
  if (count > 5000) throw DomainError("empirical_w2: count is capped at 5000");
  if (static_cast<std::size_t>(d) * n > 16) throw DomainError("empirical_w2: d * n is capped at 16");
  if (count == 0) throw DomainError("empirical_w2: count must be positive");
  const auto batch = weighted_theta_samples(u, n, seed, count, density, workers);
  const auto picks = systematic_resample(batch.weights, count, derive_seed(seed, 1));
  const std::size_t dim = n * static_cast<std::size_t>(d);
  std::vector<double> x;
  x.reserve(count * dim);
  for (std::size_t i : picks) {
    const auto flat = batch.points[i].flat();
    x.insert(x.end(), flat.begin(), flat.end());
  }
  const auto reference = sample_mu_n(n, d, derive_seed(seed, 2), count);
  std::vector<double> y;
  y.reserve(count * dim);
  for (const auto& p : reference) y.insert(y.end(), p.flat().begin(), p.flat().end());
  return debiased_w2(x, y, dim, plan);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed ^ (tag * 0x9e3779b97f4a7c15ull);
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace silt
