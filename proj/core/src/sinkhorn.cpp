#include "silt/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "silt/errors.hpp"
#include "silt/numeric.hpp"

namespace silt {

namespace {

struct Problem {
  std::size_t nx, ny;
  std::vector<double> cost;  // row-major nx by ny
  double log_a, log_b;
};

// f_i = -eps log sum_j b_j exp((g_j - C_ij) / eps)
void update_rows(const Problem& p, double eps, std::span<const double> g, std::span<double> f) {
  for (std::size_t i = 0; i < p.nx; ++i) {
    const double* c = p.cost.data() + i * p.ny;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < p.ny; ++j) mx = std::max(mx, (g[j] - c[j]) / eps);
    double s = 0.0;
    for (std::size_t j = 0; j < p.ny; ++j) s += std::exp((g[j] - c[j]) / eps - mx);
    f[i] = -eps * (p.log_b + mx + std::log(s));
  }
}

void update_cols(const Problem& p, double eps, std::span<const double> f, std::span<double> g,
                 std::vector<double>& mx, std::vector<double>& acc) {
  std::fill(mx.begin(), mx.end(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < p.nx; ++i) {
    const double* c = p.cost.data() + i * p.ny;
    for (std::size_t j = 0; j < p.ny; ++j) mx[j] = std::max(mx[j], (f[i] - c[j]) / eps);
  }
  std::fill(acc.begin(), acc.end(), 0.0);
  for (std::size_t i = 0; i < p.nx; ++i) {
    const double* c = p.cost.data() + i * p.ny;
    for (std::size_t j = 0; j < p.ny; ++j) acc[j] += std::exp((f[i] - c[j]) / eps - mx[j]);
  }
  for (std::size_t j = 0; j < p.ny; ++j) g[j] = -eps * (p.log_a + mx[j] + std::log(acc[j]));
}

// Scaling form around absorbed potentials (f, g):
// P_ij = a_i K_ij b_j / nx with K_ij = exp((f_i + g_j - C_ij) / eps) / ny.
// Scalings that drift beyond kAbsorb in log are folded back into (f, g).
class ScaledKernel {
 public:
  ScaledKernel(const Problem& p, double eps, std::vector<double>& f, std::vector<double>& g)
      : p_(p), eps_(eps), f_(f), g_(g), k_(p.nx * p.ny), a_(p.nx, 1.0), b_(p.ny, 1.0), kb_(p.nx), kta_(p.ny) {
    rebuild();
  }

  // One row then one column scaling. A scaling that leaves the representable
  // range triggers a log-domain step instead.
  void iterate(std::vector<double>& mx, std::vector<double>& acc) {
    multiply(b_, kb_);
    bool ok = true;
    for (std::size_t i = 0; i < p_.nx; ++i) {
      a_[i] = 1.0 / kb_[i];
      ok = ok && std::isfinite(a_[i]) && a_[i] > 0.0;
    }
    if (ok) {
      multiply_transposed(a_, kta_);
      for (std::size_t j = 0; j < p_.ny; ++j) {
        b_[j] = 1.0 / kta_[j];
        ok = ok && std::isfinite(b_[j]) && b_[j] > 0.0;
      }
    }
    if (!ok) {
      std::fill(a_.begin(), a_.end(), 1.0);
      std::fill(b_.begin(), b_.end(), 1.0);
      update_rows(p_, eps_, g_, f_);
      update_cols(p_, eps_, f_, g_, mx, acc);
      rebuild();
      return;
    }
    double worst = 0.0;
    for (double v : a_) worst = std::max(worst, std::abs(std::log(v)));
    for (double v : b_) worst = std::max(worst, std::abs(std::log(v)));
    if (worst > kAbsorb) absorb();
  }

  // L1 violation of the first marginal (the second is exact after a column step).
  double row_violation() {
    multiply(b_, kb_);
    double total = 0.0;
    const double a = std::exp(p_.log_a);
    for (std::size_t i = 0; i < p_.nx; ++i) total += std::abs(a_[i] * kb_[i] * a - a);
    return total;
  }

  double plan_cost() const {
    CompensatedSum total;
    const double scale = std::exp(p_.log_a);
    for (std::size_t i = 0; i < p_.nx; ++i) {
      const double* c = p_.cost.data() + i * p_.ny;
      const double* k = k_.data() + i * p_.ny;
      double s = 0.0;
      for (std::size_t j = 0; j < p_.ny; ++j) s += c[j] * k[j] * b_[j];
      total.add(a_[i] * s * scale);
    }
    return total.value();
  }

  void absorb() {
    for (std::size_t i = 0; i < p_.nx; ++i) f_[i] += eps_ * std::log(a_[i]);
    for (std::size_t j = 0; j < p_.ny; ++j) g_[j] += eps_ * std::log(b_[j]);
    std::fill(a_.begin(), a_.end(), 1.0);
    std::fill(b_.begin(), b_.end(), 1.0);
    rebuild();
  }

 private:
  static constexpr double kAbsorb = 30.0;

  void rebuild() {
    for (std::size_t i = 0; i < p_.nx; ++i) {
      const double* c = p_.cost.data() + i * p_.ny;
      double* k = k_.data() + i * p_.ny;
      for (std::size_t j = 0; j < p_.ny; ++j) k[j] = std::exp((f_[i] + g_[j] - c[j]) / eps_ + p_.log_b);
    }
  }

  void multiply(const std::vector<double>& v, std::vector<double>& out) const {
    for (std::size_t i = 0; i < p_.nx; ++i) {
      const double* k = k_.data() + i * p_.ny;
      double s = 0.0;
      for (std::size_t j = 0; j < p_.ny; ++j) s += k[j] * v[j];
      out[i] = s;
    }
  }

  void multiply_transposed(const std::vector<double>& v, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    const double ratio = std::exp(p_.log_a - p_.log_b);
    for (std::size_t i = 0; i < p_.nx; ++i) {
      const double* k = k_.data() + i * p_.ny;
      const double w = v[i] * ratio;
      for (std::size_t j = 0; j < p_.ny; ++j) out[j] += k[j] * w;
    }
  }

  const Problem& p_;
  double eps_;
  std::vector<double>& f_;
  std::vector<double>& g_;
  std::vector<double> k_, a_, b_, kb_, kta_;
};

}  // namespace

SinkhornResult sinkhorn_squared_euclidean(std::span<const double> x, std::span<const double> y, std::size_t dim,
                                          const TransportPlanSpec& spec) {
  if (!(spec.regularization > 0.0)) throw DomainError("sinkhorn: regularization must be positive");
  if (!(spec.tolerance > 0.0)) throw DomainError("sinkhorn: tolerance must be positive");
  if (dim == 0 || x.size() % dim != 0 || y.size() % dim != 0) throw DomainError("sinkhorn: bad shape");
  Problem p;
  p.nx = x.size() / dim;
  p.ny = y.size() / dim;
  if (p.nx == 0 || p.ny == 0) throw DomainError("sinkhorn: empty batch");
  p.log_a = -std::log(static_cast<double>(p.nx));
  p.log_b = -std::log(static_cast<double>(p.ny));
  p.cost.resize(p.nx * p.ny);
  double c_max = 0.0;
  for (std::size_t i = 0; i < p.nx; ++i) {
    for (std::size_t j = 0; j < p.ny; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double z = x[i * dim + k] - y[j * dim + k];
        s += z * z;
      }
      p.cost[i * p.ny + j] = s;
      c_max = std::max(c_max, s);
    }
  }

  std::vector<double> f(p.nx, 0.0), g(p.ny, 0.0), mx(p.ny), acc(p.ny);
  SinkhornResult res;
  const double target = spec.regularization;
  double eps = std::max(target, c_max);
  constexpr int kWarmIterations = 8;
  for (;;) {
    const bool final_level = eps <= target;
    if (final_level) eps = target;
    ScaledKernel kernel(p, eps, f, g);
    int level_iterations = 0;
    for (;;) {
      kernel.iterate(mx, acc);
      ++res.iterations;
      ++level_iterations;
      if (!final_level && level_iterations >= kWarmIterations) break;
      if (final_level && level_iterations % 10 == 0) {
        res.violation = kernel.row_violation();
        if (res.violation < spec.tolerance) break;
      }
      if (res.iterations >= spec.max_iterations) {
        res.violation = kernel.row_violation();
        throw ConvergenceError("sinkhorn: iteration cap reached", res.violation);
      }
    }
    if (final_level) {
      res.cost = kernel.plan_cost();
      break;
    }
    kernel.absorb();
    eps *= 0.5;
  }
  return res;
}

}  // namespace silt
