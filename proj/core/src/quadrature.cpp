#include "silt/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>

#include "silt/errors.hpp"
#include "silt/numeric.hpp"

namespace silt {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = 0.5 * (1.0 - x);
    rule.nodes[hi] = 0.5 * (1.0 + x);
    rule.weights[lo] = 0.5 * w;
    rule.weights[hi] = 0.5 * w;
  }
  return rule;
}

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[static_cast<std::size_t>(j)];
    const double sum = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[static_cast<std::size_t>(j)] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[static_cast<std::size_t>(j / 2)] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     const AdaptiveOptions& opts) {
  if (a == b) return {};
  if (a > b) {
    auto r = integrate_adaptive(f, b, a, opts);
    r.value = -r.value;
    return r;
  }
  std::priority_queue<Segment> heap;
  std::vector<Segment> frozen;
  Segment first = kronrod15(f, a, b);
  double total = first.value;
  double total_error = first.error;
  heap.push(first);
  int intervals = 1;
  while (!heap.empty()) {
    if (total_error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) break;
    if (intervals >= opts.max_intervals) break;
    Segment worst = heap.top();
    heap.pop();
    if (worst.b - worst.a < opts.min_width) {
      frozen.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = kronrod15(f, worst.a, mid);
    const Segment right = kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum from the final partition to shed accumulated update round-off.
  CompensatedSum value, error;
  for (const auto& s : frozen) {
    value.add(s.value);
    error.add(s.error);
  }
  while (!heap.empty()) {
    value.add(heap.top().value);
    error.add(heap.top().error);
    heap.pop();
  }
  return {value.value(), error.value(), intervals};
}

double SimplexQuadrature::total_weight() const {
  CompensatedSum sum;
  for (double w : weights_) sum.add(w);
  return sum.value();
}

void SimplexQuadrature::add(std::span<const double> point, double weight) {
  if (static_cast<int>(point.size()) != dim_) throw DomainError("SimplexQuadrature: node dimension mismatch");
  nodes_.insert(nodes_.end(), point.begin(), point.end());
  weights_.push_back(weight);
}

SimplexQuadrature SimplexQuadrature::tensor_gauss(int dim, int nodes_per_axis) {
  if (dim < 1) throw DomainError("tensor_gauss: dimension must be >= 1");
  const GaussRule g = gauss_legendre(nodes_per_axis);
  SimplexQuadrature q(dim);
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
  std::vector<double> point(static_cast<std::size_t>(dim));
  const std::size_t n = g.nodes.size();
  for (;;) {
    double weight = 1.0;
    double prev = 0.0;
    for (int j = 0; j < dim; ++j) {
      const double a = g.nodes[idx[static_cast<std::size_t>(j)]];
      const double tj = prev + a * (1.0 - prev);
      weight *= g.weights[idx[static_cast<std::size_t>(j)]] * (1.0 - prev);
      point[static_cast<std::size_t>(j)] = tj;
      prev = tj;
    }
    q.add(point, weight);
    int j = dim - 1;
    while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == n) {
      idx[static_cast<std::size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
  }
  return q;
}

SimplexQuadrature SimplexQuadrature::graded(int levels, int tau_nodes, int s_nodes) {
  if (levels < 0) throw DomainError("graded: levels must be >= 0");
  const GaussRule gt = gauss_legendre(tau_nodes);
  const GaussRule gs = gauss_legendre(s_nodes);
  SimplexQuadrature q(2);
  auto add_panel = [&](double lo, double hi) {
    for (std::size_t i = 0; i < gt.nodes.size(); ++i) {
      const double tau = lo + (hi - lo) * gt.nodes[i];
      const double wt = (hi - lo) * gt.weights[i];
      const double span = 1.0 - tau;
      for (std::size_t j = 0; j < gs.nodes.size(); ++j) {
        const double s = span * gs.nodes[j];
        const double point[2] = {s, s + tau};
        q.add(point, wt * span * gs.weights[j]);
      }
    }
  };
  double hi = 1.0;
  for (int level = 0; level < levels; ++level) {
    add_panel(0.5 * hi, hi);
    hi *= 0.5;
  }
  add_panel(0.0, hi);
  return q;
}

namespace {

// 1-D composite rule on [0, 1] with panels crowding both endpoints.
GaussRule corner_refined_rule(int gauss_nodes) {
  static constexpr std::array<double, 9> kBreaks = {0.0,    1.0 / 64, 1.0 / 16, 0.25, 0.5,
                                                    0.75, 15.0 / 16, 63.0 / 64, 1.0};
  const GaussRule g = gauss_legendre(gauss_nodes);
  GaussRule out;
  for (std::size_t p = 0; p + 1 < kBreaks.size(); ++p) {
    const double lo = kBreaks[p], hi = kBreaks[p + 1];
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      out.nodes.push_back(lo + (hi - lo) * g.nodes[i]);
      out.weights.push_back((hi - lo) * g.weights[i]);
    }
  }
  return out;
}

}  // namespace

SimplexQuadrature SimplexQuadrature::grid_aligned(std::span<const double> breakpoints, int gauss_nodes,
                                                  int tau_levels, int s_nodes) {
  std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
  if (cuts.empty() || cuts.front() != 0.0) cuts.insert(cuts.begin(), 0.0);
  if (cuts.back() < 1.0) cuts.push_back(1.0);
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (!(cuts[i] > cuts[i - 1])) throw DomainError("grid_aligned: breakpoints must increase");
  }
  if (cuts.back() > 1.0) throw DomainError("grid_aligned: breakpoints must lie in [0, 1]");

  const GaussRule side = corner_refined_rule(gauss_nodes);
  const GaussRule gt = gauss_legendre(gauss_nodes);
  const GaussRule gs = gauss_legendre(s_nodes);
  SimplexQuadrature q(2);
  const std::size_t cells = cuts.size() - 1;
  for (std::size_t i = 0; i < cells; ++i) {
    const double lo_i = cuts[i], h_i = cuts[i + 1] - cuts[i];
    // Diagonal triangle lo_i < s < t < lo_i + h_i in (tau, s) coordinates.
    auto add_panel = [&](double a, double b) {
      for (std::size_t m = 0; m < gt.nodes.size(); ++m) {
        const double tau = a + (b - a) * gt.nodes[m];
        const double wt = (b - a) * gt.weights[m];
        const double span = h_i - tau;
        for (std::size_t j = 0; j < gs.nodes.size(); ++j) {
          const double s = lo_i + span * gs.nodes[j];
          const double point[2] = {s, s + tau};
          q.add(point, wt * span * gs.weights[j]);
        }
      }
    };
    // graded toward tau = 0 and tau = h_i, where the residual variance vanishes
    double w = 0.5 * h_i;
    for (int level = 0; level < tau_levels; ++level) {
      add_panel(0.5 * w, w);
      add_panel(h_i - w, h_i - 0.5 * w);
      w *= 0.5;
    }
    add_panel(0.0, w);
    add_panel(h_i - w, h_i);
    // Off-diagonal squares (cell i) x (cell j), j > i.
    for (std::size_t j = i + 1; j < cells; ++j) {
      const double lo_j = cuts[j], h_j = cuts[j + 1] - cuts[j];
      for (std::size_t a = 0; a < side.nodes.size(); ++a) {
        for (std::size_t b = 0; b < side.nodes.size(); ++b) {
          const double point[2] = {lo_i + h_i * side.nodes[a], lo_j + h_j * side.nodes[b]};
          q.add(point, h_i * h_j * side.weights[a] * side.weights[b]);
        }
      }
    }
  }
  return q;
}

}  // namespace silt
