#include "silt/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "silt/errors.hpp"
#include "silt/numeric.hpp"
#include "silt/parallel.hpp"
#include "silt/specfun.hpp"

namespace silt {

double interval_overlap(double s1, double t1, double s2, double t2) {
  return std::max(0.0, std::min(t1, t2) - std::max(s1, s2));
}

namespace {

double norm_sq(std::span<const double> u) {
  double s = 0.0;
  for (double x : u) s += x * x;
  return s;
}

// Per-tau data: hat h_n(u_i / sqrt(tau)) = h_n e^{-x^2/4} for every
// coordinate, and (2 pi tau)^{-d/2} e^{-|u|^2/4tau}.
struct TauData {
  std::vector<double> hermite;  // d rows of k_max + 1
  double kernel = 0.0;
};

TauData tau_data(std::span<const double> u, double tau, int k_max) {
  const auto len = static_cast<std::size_t>(k_max) + 1;
  TauData td;
  td.hermite.resize(u.size() * len);
  const double root = std::sqrt(tau);
  for (std::size_t i = 0; i < u.size(); ++i) {
    specfun::hermite_normalized_weighted(u[i] / root, 0.25, std::span<double>(td.hermite.data() + i * len, len));
  }
  td.kernel = specfun::heat_kernel_radial(0.5 * norm_sq(u), static_cast<int>(u.size()), tau);
  return td;
}

// S_k for k = 0..k_max by multiplying the per-coordinate generating
// polynomials sum_n a_i[n] z^n, a_i[n] = hat h_n(x_i) hat h_n(y_i).
void multi_index_sums(const TauData& a, const TauData& b, std::size_t dims, std::size_t len, std::vector<double>& poly,
                      std::vector<double>& next) {
  poly.assign(len, 0.0);
  poly[0] = 1.0;
  for (std::size_t i = 0; i < dims; ++i) {
    const double* ha = a.hermite.data() + i * len;
    const double* hb = b.hermite.data() + i * len;
    next.assign(len, 0.0);
    for (std::size_t p = 0; p < len; ++p) {
      const double c = poly[p];
      if (c == 0.0) continue;
      for (std::size_t q = 0; p + q < len; ++q) next[p + q] += c * ha[q] * hb[q];
    }
    poly.swap(next);
  }
}

// M_k(tau1, tau2) = \int\int rho^k ds1 ds2 over s1 in (0, 1-tau1),
// s2 in (0, 1-tau2), as a function of delta = s2 - s1. Both the overlap and
// the delta-density are piecewise linear, so Gauss-Legendre with enough
// points per linear piece is exact.
void positional_moments(double tau1, double tau2, const GaussRule& g, std::vector<double>& out) {
  const std::size_t len = out.size();
  std::fill(out.begin(), out.end(), 0.0);
  // rho^0 = 1 also where the intervals are disjoint.
  out[0] = (1.0 - tau1) * (1.0 - tau2);
  const double lo = std::max(-tau2, -(1.0 - tau1));
  const double hi = std::min(tau1, 1.0 - tau2);
  if (!(hi > lo)) return;
  double cuts[8] = {lo, hi, 0.0, tau1 - tau2, -tau2, tau1, -(1.0 - tau1), 1.0 - tau2};
  std::sort(cuts, cuts + 8);
  const double inv = 1.0 / std::sqrt(tau1 * tau2);
  for (int c = 0; c + 1 < 8; ++c) {
    const double a = std::max(cuts[c], lo), b = std::min(cuts[c + 1], hi);
    if (!(b > a)) continue;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double delta = a + (b - a) * g.nodes[i];
      const double lambda = interval_overlap(0.0, tau1, delta, delta + tau2);
      const double density = std::min(1.0 - tau1, 1.0 - tau2 - delta) - std::max(0.0, -delta);
      if (!(lambda > 0.0) || !(density > 0.0)) continue;
      const double rho = lambda * inv;
      double w = (b - a) * g.weights[i] * density * rho;
      for (std::size_t k = 1; k < len; ++k) {
        out[k] += w;
        w *= rho;
      }
    }
  }
}

std::vector<double> reduced_terms(std::span<const double> u, int k_max, const SobolevOptions& opts) {
  const auto len = static_cast<std::size_t>(k_max) + 1;
  const auto dims = u.size();
  const GaussRule g = gauss_legendre(opts.gauss_nodes);
  const GaussRule gd = gauss_legendre(std::max(2, (k_max + 3) / 2 + 1));

  // tau_1 panels: [2^{-j-1}, 2^{-j}] split evenly, plus [0, 2^{-levels}].
  std::vector<std::pair<double, double>> tau_nodes;
  auto add_panel = [&](std::vector<std::pair<double, double>>& out, double lo, double hi) {
    const double step = (hi - lo) / opts.panel_splits;
    for (int p = 0; p < opts.panel_splits; ++p) {
      const double a = lo + p * step;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) out.emplace_back(a + step * g.nodes[i], step * g.weights[i]);
    }
  };
  double hi = 1.0;
  for (int j = 0; j < opts.tau_levels; ++j) {
    add_panel(tau_nodes, 0.5 * hi, hi);
    hi *= 0.5;
  }
  add_panel(tau_nodes, 0.0, hi);

  // v = log(tau_1 / tau_2) in (0, 64]: [0, 2^-8], then doubling panels.
  std::vector<std::pair<double, double>> v_nodes;
  add_panel(v_nodes, 0.0, std::ldexp(1.0, -8));
  for (int e = -8; e < 6; ++e) add_panel(v_nodes, std::ldexp(1.0, e), std::ldexp(1.0, e + 1));

  const auto partial = parallel_map<std::vector<double>>(tau_nodes.size(), opts.workers, [&](std::size_t ti) {
    std::vector<double> acc(len, 0.0), mk(len), poly, next;
    const auto [tau1, w1] = tau_nodes[ti];
    if (!(tau1 > 0.0)) return acc;
    const TauData a = tau_data(u, tau1, k_max);
    if (a.kernel == 0.0) return acc;
    for (const auto& [v, wv] : v_nodes) {
      const double ratio = std::exp(-v);
      const double tau2 = tau1 * ratio;
      if (!(tau2 > 0.0)) continue;
      const TauData b = tau_data(u, tau2, k_max);
      if (b.kernel == 0.0) continue;
      positional_moments(tau1, tau2, gd, mk);
      multi_index_sums(a, b, dims, len, poly, next);
      // Factor 2 for the mirrored half tau_2 > tau_1; Jacobian tau_1 e^{-v}.
      const double w = 2.0 * w1 * wv * tau1 * ratio * a.kernel * b.kernel;
      for (std::size_t k = 0; k < len; ++k) acc[k] += w * mk[k] * poly[k];
    }
    return acc;
  });
  std::vector<double> terms(len, 0.0);
  for (std::size_t k = 0; k < len; ++k) {
    CompensatedSum s;
    for (const auto& p : partial) s.add(p[k]);
    terms[k] = s.value();
  }
  return terms;
}

std::vector<double> tensor_terms(std::span<const double> u, int k_max, const SobolevOptions& opts) {
  const auto len = static_cast<std::size_t>(k_max) + 1;
  const auto dims = u.size();
  const auto rule = SimplexQuadrature::tensor_gauss(2, opts.tensor_nodes);
  std::vector<TauData> data(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto node = rule.node(i);
    data[i] = tau_data(u, node[1] - node[0], k_max);
  }
  const auto partial = parallel_map<std::vector<double>>(rule.size(), opts.workers, [&](std::size_t i) {
    std::vector<double> acc(len, 0.0), poly, next;
    const auto ni = rule.node(i);
    const double tau1 = ni[1] - ni[0];
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const auto nj = rule.node(j);
      const double tau2 = nj[1] - nj[0];
      const double lambda = interval_overlap(ni[0], ni[1], nj[0], nj[1]);
      const double w = rule.weight(i) * rule.weight(j) * data[i].kernel * data[j].kernel;
      if (w == 0.0) continue;
      multi_index_sums(data[i], data[j], dims, len, poly, next);
      const double rho = lambda / std::sqrt(tau1 * tau2);
      double power = 1.0;
      for (std::size_t k = 0; k < len; ++k) {
        acc[k] += w * power * poly[k];
        power *= rho;
      }
    }
    return acc;
  });
  std::vector<double> terms(len, 0.0);
  for (std::size_t k = 0; k < len; ++k) {
    CompensatedSum s;
    for (const auto& p : partial) s.add(p[k]);
    terms[k] = s.value();
  }
  return terms;
}

void check_spec(const SobolevSpec& spec) {
  const int d = spec.dim();
  if (d < 4) throw DomainError("sobolev: d must be >= 4");
  if (!(spec.gamma < (4.0 - d) / 2.0)) throw DomainError("sobolev: gamma must be below (4 - d) / 2");
  if (spec.K < 0) throw DomainError("sobolev: K must be non-negative");
  if (norm_sq(spec.u) == 0.0) throw DomainError("sobolev: u must be non-zero");
}

}  // namespace

std::vector<double> sobolev_terms(std::span<const double> u, int k_max, const SobolevOptions& opts) {
  if (k_max < 0) throw DomainError("sobolev_terms: k_max must be non-negative");
  if (u.empty() || norm_sq(u) == 0.0) throw DomainError("sobolev_terms: u must be non-zero");
  return opts.scheme == SobolevScheme::Reduced ? reduced_terms(u, k_max, opts) : tensor_terms(u, k_max, opts);
}

SobolevNorm sobolev_norm_sq_truncated(const SobolevSpec& spec, const SobolevOptions& opts) {
  check_spec(spec);
  const auto terms = sobolev_terms(spec.u, spec.K, opts);
  SobolevNorm out;
  CompensatedSum sum;
  for (int k = 0; k <= spec.K; ++k) {
    const double term = std::pow(k + 1.0, spec.gamma) * terms[static_cast<std::size_t>(k)];
    sum.add(term);
    out.k_used = k;
    out.tail_ratio = std::abs(term) / sum.value();
    if (spec.adaptive_k && k > 0 && out.tail_ratio < spec.tail_tol) break;
  }
  out.value = sum.value();
  out.terms.assign(terms.begin(), terms.begin() + out.k_used + 1);
  return out;
}

CapacityBound capacity_lower_bound(const SobolevSpec& spec, const SobolevOptions& opts) {
  CapacityBound out;
  out.norm = sobolev_norm_sq_truncated(spec, opts);
  out.m = specfun::simplex_mass(spec.dim(), std::sqrt(norm_sq(spec.u)));
  out.value = out.m * out.m / out.norm.value;
  return out;
}

double support_distance(const Path& path, std::span<const double> u) {
  if (static_cast<int>(u.size()) != path.dim()) throw DomainError("support_distance: u has the wrong dimension");
  const auto d = static_cast<std::size_t>(path.dim());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < path.steps(); ++k) {
    const auto a = path.node(k);
    for (std::size_t l = k + 1; l <= path.steps(); ++l) {
      const auto b = path.node(l);
      double s = 0.0;
      for (std::size_t i = 0; i < d && s < best; ++i) {
        const double z = b[i] - a[i] - u[i];
        s += z * z;
      }
      best = std::min(best, s);
    }
  }
  return std::sqrt(best);
}

}  // namespace silt
