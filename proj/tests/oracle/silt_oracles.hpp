#pragma once

// Reference computations for the test suites. Everything here is written
// against Boost.Math, Eigen or plain long double arithmetic and never calls
// into silt::core, so that a shared bug cannot hide in both routes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

inline long double heat_kernel(long double r2, int d, long double t) {
  return std::pow(2.0L * std::numbers::pi_v<long double> * t, -0.5L * d) * std::exp(-r2 / (2.0L * t));
}

/// Gamma(s, a) = a^s \int_0^inf e^{s y - a e^y} dy.
inline double upper_gamma(double s, double a) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double y) { return std::exp(s * y - a * std::exp(y)); };
  double err = 0.0;
  const double v = integrator.integrate(f, 1e-15, &err);
  return std::pow(a, s) * v;
}

/// Globally adaptive Gauss-Kronrod (31-point Boost panels) on [a, b] split at
/// the given interior points: the panel with the largest error estimate is
/// bisected until the summed estimate drops below tol * |integral|.
template <class F>
double gk(F&& f, std::vector<double> cuts, double tol = 1e-13, std::size_t max_panels = 4000) {
  using rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  auto eval = [&](double a, double b) {
    double err = 0.0;
    const double v = rule::integrate(f, a, b, 0, 0.0, &err);
    return Panel{a, b, v, err};
  };
  std::sort(cuts.begin(), cuts.end());
  std::priority_queue<Panel> queue;
  double total = 0.0, error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    const Panel p = eval(cuts[i], cuts[i + 1]);
    total += p.value;
    error += p.error;
    queue.push(p);
  }
  while (!queue.empty() && error > tol * std::abs(total) && queue.size() < max_panels) {
    const Panel p = queue.top();
    queue.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) break;
    const Panel l = eval(p.a, mid), r = eval(mid, p.b);
    total += l.value + r.value - p.value;
    error += l.error + r.error - p.error;
    queue.push(l);
    queue.push(r);
  }
  // re-sum to drop the drift of the running updates
  total = 0.0;
  while (!queue.empty()) {
    total += queue.top().value;
    queue.pop();
  }
  return total;
}

/// \int_0^1 dt \int_0^t ds (t-s)^{-alpha} p^d_{t-s}(u) as a genuine nested
/// 2-D adaptive integral.
inline double simplex_raw(double alpha, int d, double r) {
  const double peak = r * r / (d + 2.0 * alpha);
  const double half_r2 = 0.5 * r * r;
  const double log_norm = -0.5 * d * std::log(2.0 * std::numbers::pi);
  // tau^{-alpha} p^d_tau(u) in double, from logs
  auto kernel = [=](double tau) { return std::exp(log_norm - (alpha + 0.5 * d) * std::log(tau) - half_r2 / tau); };
  auto inner = [&](double t) {
    auto g = [&](double s) {
      const double tau = t - s;
      return tau > 0.0 ? kernel(tau) : 0.0;
    };
    std::vector<double> cuts{0.0, t};
    for (double m : {0.1, 1.0, 10.0}) {
      if (m * peak < t) cuts.push_back(t - m * peak);
    }
    return gk(g, cuts, 1e-10);
  };
  std::vector<double> cuts{0.0, 1.0};
  for (double m : {0.1, 1.0, 10.0}) {
    if (m * peak < 1.0) cuts.push_back(m * peak);
  }
  return gk(inner, cuts, 1e-9);
}

/// He_n(x) from its explicit expansion n! sum_m (-1)^m x^{n-2m} / (m! (n-2m)! 2^m),
/// exact in integer arithmetic.
inline long long hermite_explicit(int n, long long x) {
  auto fact = [](int k) {
    long long f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  long long total = 0;
  for (int m = 0; 2 * m <= n; ++m) {
    long long xp = 1;
    for (int i = 0; i < n - 2 * m; ++i) xp *= x;
    const long long coef = fact(n) / (fact(m) * fact(n - 2 * m) * (1LL << m));
    total += (m % 2 == 0 ? 1 : -1) * coef * xp;
  }
  return total;
}

inline long double hermite(int n, long double x) {
  if (n == 0) return 1.0L;
  long double h0 = 1.0L, h1 = x;
  for (int k = 1; k < n; ++k) {
    const long double h2 = x * h1 - k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

/// sup over n <= n_max and x = 0, step, 2 step, ... <= 2 sqrt(n_max) + 12
/// of |He_n(x)| e^{-alpha x^2} (n v 1)^{(8 alpha - 1)/12} / sqrt(n!), long double.
inline double szego_sup(double alpha, int n_max, double step) {
  const double x_max = 2.0 * std::sqrt(static_cast<double>(n_max)) + 12.0;
  long double best = 0.0L;
  const auto steps = static_cast<long>(std::floor(x_max / step));
  for (long i = 0; i <= steps; ++i) {
    const long double x = static_cast<long double>(i) * step;
    long double h0 = 1.0L, h1 = x;
    long double log_fact = 0.0L;
    const long double damp = std::exp(-static_cast<long double>(alpha) * x * x);
    for (int n = 0; n <= n_max; ++n) {
      long double h;
      if (n == 0) {
        h = h0;
      } else if (n == 1) {
        h = h1;
      } else {
        const long double h2 = x * h1 - (n - 1) * h0;
        h0 = h1;
        h1 = h2;
        h = h2;
      }
      if (n > 0) log_fact += std::log(static_cast<long double>(n));
      const long double scale = std::pow(static_cast<long double>(std::max(n, 1)), (8.0L * alpha - 1.0L) / 12.0L);
      const long double v = std::fabs(h) * damp * scale * std::exp(-0.5L * log_fact);
      best = std::max(best, v);
    }
  }
  return static_cast<double>(best);
}

/// Asymptotic Kolmogorov tail P(sqrt(n) D > x).
inline double kolmogorov_pvalue(double d_stat, std::size_t n) {
  const double x = std::sqrt(static_cast<double>(n)) * d_stat;
  double p = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double term = 2.0 * std::exp(-2.0 * k * k * x * x) * (k % 2 == 1 ? 1.0 : -1.0);
    p += term;
    if (std::abs(term) < 1e-18) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

inline double ks_statistic_normal(std::vector<double> xs, double sd) {
  std::sort(xs.begin(), xs.end());
  boost::math::normal_distribution<double> nd(0.0, sd);
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = boost::math::cdf(nd, xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

/// Squared L^2 distance from 1_[s,t] to the span of the cell indicators,
/// integrating the piecewise-constant residual exactly segment by segment.
inline double projection_residual(double s, double t, const std::vector<double>& grid) {
  std::vector<double> cuts(grid.begin(), grid.end());
  cuts.push_back(s);
  cuts.push_back(t);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  auto coeff = [&](std::size_t j) {
    const double lo = grid[j - 1], hi = grid[j];
    return std::max(0.0, std::min(t, hi) - std::max(s, lo)) / (hi - lo);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) continue;
    const double mid = 0.5 * (a + b);
    double proj = 0.0;
    for (std::size_t j = 1; j < grid.size(); ++j) {
      if (mid > grid[j - 1] && mid < grid[j]) proj = coeff(j);
    }
    const double ind = (mid > s && mid < t) ? 1.0 : 0.0;
    total += (ind - proj) * (ind - proj) * (b - a);
  }
  return total;
}

/// Samples (W(s), W(t)) in one coordinate given W on the grid, by Brownian
/// bridges between the pinned values; beyond the last node W runs free.
class BridgeSampler {
 public:
  BridgeSampler(std::vector<double> grid, std::vector<double> values, std::uint64_t seed)
      : grid_(std::move(grid)), values_(std::move(values)), rng_(seed) {}

  std::pair<double, double> sample(double s, double t) {
    const double ws = at(s, -1.0, 0.0);
    const double wt = at(t, s, ws);
    return {ws, wt};
  }

 private:
  // W(x) given the grid and, optionally, an extra pinned point (p, wp) with p < x.
  double at(double x, double p, double wp) {
    const double t_last = grid_.back();
    double left_t, left_w;
    if (x >= t_last) {
      left_t = t_last;
      left_w = values_.back();
      if (p > left_t) {
        left_t = p;
        left_w = wp;
      }
      return left_w + std::sqrt(x - left_t) * normal_(rng_);
    }
    std::size_t j = 1;
    while (grid_[j] < x) ++j;
    left_t = grid_[j - 1];
    left_w = values_[j - 1];
    if (p > left_t && p <= x) {
      left_t = p;
      left_w = wp;
    }
    const double right_t = grid_[j], right_w = values_[j];
    const double span = right_t - left_t;
    if (span <= 0.0) return right_w;
    const double mean = left_w + (x - left_t) / span * (right_w - left_w);
    const double var = (x - left_t) * (right_t - x) / span;
    return mean + std::sqrt(std::max(var, 0.0)) * normal_(rng_);
  }

  std::vector<double> grid_;
  std::vector<double> values_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal 2n (last
/// entry n) and off-diagonal -n, ascending.
inline std::vector<double> tridiagonal_hessian_eigenvalues(int n) {
  Eigen::VectorXd diag = Eigen::VectorXd::Constant(n, 2.0 * n);
  diag(n - 1) = n;
  Eigen::VectorXd sub = Eigen::VectorXd::Constant(std::max(n - 1, 0), -1.0 * n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  return out;
}

inline Eigen::MatrixXd hessian_matrix(int n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = (i == n - 1) ? n : 2.0 * n;
    if (i + 1 < n) {
      a(i, i + 1) = -n;
      a(i + 1, i) = -n;
    }
  }
  return a;
}

}  // namespace oracle
