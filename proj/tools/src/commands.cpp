#include "commands.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "options.hpp"
#include "silt/chaos.hpp"
#include "silt/dynkin.hpp"
#include "silt/errors.hpp"
#include "silt/functionals.hpp"
#include "silt/marginals.hpp"
#include "silt/numeric.hpp"
#include "silt/parallel.hpp"
#include "silt/path.hpp"
#include "silt/sobolev.hpp"
#include "silt/specfun.hpp"
#include "silt/transport.hpp"

namespace silt::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> unit_direction(int d, const std::string& spec) {
  std::vector<double> dir;
  if (spec.empty()) {
    dir.assign(static_cast<std::size_t>(d), 1.0);
  } else {
    dir = parse_sweep(spec);
    if (static_cast<int>(dir.size()) != d) throw UsageError("direction must have " + std::to_string(d) + " components");
  }
  double norm = 0.0;
  for (double v : dir) norm += v * v;
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) throw UsageError("direction must be non-zero");
  for (double& v : dir) v /= norm;
  return dir;
}

std::vector<double> scaled(const std::vector<double>& dir, double r) {
  std::vector<double> u(dir);
  for (double& v : u) v *= r;
  return u;
}

void require_positive(const std::vector<double>& xs, const char* what) {
  for (double x : xs) {
    if (!(x > 0.0)) throw UsageError(std::string(what) + " must be positive");
  }
}

std::string format_index(const MultiIndex& idx) {
  std::string s;
  for (int v : idx.n) s += (s.empty() ? "" : " ") + std::to_string(v);
  return s;
}

// Least-squares slope of log y against log x, NaN with fewer than 3 points.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 3) return kNaN;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_slope(lx, ly);
}

void all_indices(int d, int k, std::vector<int>& cur, int pos, std::vector<MultiIndex>& out) {
  if (pos == d - 1) {
    cur[static_cast<std::size_t>(pos)] = k;
    out.push_back(MultiIndex{cur});
    return;
  }
  for (int v = k; v >= 0; --v) {
    cur[static_cast<std::size_t>(pos)] = v;
    all_indices(d, k - v, cur, pos + 1, out);
  }
}

class KernelCommand final : public Command {
 public:
  std::string name() const override { return "kernel"; }
  std::string description() const override { return "Simplex moment integral: exact value, asymptotic form and ratio"; }
  void add_options(CLI::App& app) override {
    app.add_option("--alpha", alpha_, "Comma list of exponents alpha");
    app.add_option("--dim", dims_, "Comma list of dimensions");
    app.add_option("--u-norms", norms_, "Sweep of |u|: list or B^E1..B^E2");
  }
  void run(const Context&, CsvWriter& csv) override {
    const auto alphas = parse_sweep(alpha_);
    const auto dims = parse_int_list(dims_);
    const auto norms = parse_sweep(norms_);
    require_positive(norms, "u-norms");
    for (int d : dims) {
      if (d < 1) throw UsageError("dim must be >= 1");
    }
    csv.header({"alpha", "d", "u_norm", "exact", "asymptotic", "ratio"});
    for (double a : alphas) {
      for (int d : dims) {
        for (double r : norms) {
          const double exact = specfun::simplex_moment_integral(a, d, r);
          double asym = kNaN;
          try {
            asym = specfun::simplex_moment_asymptotic(a, d, r);
          } catch (const UnsupportedRegime&) {
          }
          csv.cell(a).cell(d).cell(r).cell(exact).cell(asym).cell(exact / asym);
          csv.end_row();
        }
      }
    }
  }

 private:
  std::string alpha_ = "0";
  std::string dims_ = "4";
  std::string norms_ = "2^-2..2^-10";
};

class HermiteCommand final : public Command {
 public:
  std::string name() const override { return "hermite"; }
  std::string description() const override { return "Hermite values against the calibrated Szego bound"; }
  void add_options(CLI::App& app) override {
    app.add_option("--n-max", n_max_, "Largest order");
    app.add_option("--x", xs_, "Comma list of arguments");
    app.add_option("--alpha", alpha_, "Szego exponent in [1/4, 1/2]");
  }
  void run(const Context&, CsvWriter& csv) override {
    if (n_max_ < 0) throw UsageError("n-max must be >= 0");
    const auto xs = parse_sweep(xs_);
    specfun::SzegoCalibration cal;
    cal.alpha = alpha_;
    cal.n_max = std::max(200, n_max_);
    const double c = specfun::calibrate_szego_constant(cal);
    // validates alpha before any row is written
    specfun::szego_bound(0, 0.0, alpha_, c);
    csv.comment("szego_c=" + format_double(c));
    csv.header({"n", "x", "log_abs", "sign", "normalized", "log_szego_bound", "slack"});
    int violations = 0;
    for (int n = 0; n <= n_max_; ++n) {
      for (double x : xs) {
        const auto h = specfun::hermite_log_abs(n, x);
        const double scaled_log = h.log_abs - 0.5 * specfun::log_factorial(n) - alpha_ * x * x;
        const double normalized = h.sign == 0 ? 0.0 : h.sign * std::exp(scaled_log);
        const double bound = specfun::szego_bound(n, x, alpha_, c);
        const double slack = h.sign == 0 ? kInf : bound - h.log_abs;
        violations += slack < 0.0;
        csv.cell(n).cell(x).cell(h.log_abs).cell(h.sign).cell(normalized).cell(bound).cell(slack);
        csv.end_row();
      }
    }
    csv.comment("violations=" + std::to_string(violations));
  }

 private:
  int n_max_ = 20;
  std::string xs_ = "-3,-1,0,0.5,2,5";
  double alpha_ = 0.25;
};

class SiltCommand final : public Command {
 public:
  std::string name() const override { return "silt"; }
  std::string description() const override { return "Mollified SILT over an eps ladder with L2 increments between rungs"; }
  void add_options(CLI::App& app) override {
    app.add_option("--dim", dim_, "Dimension");
    app.add_option("--m", m_, "Path grid steps");
    app.add_option("--paths", paths_, "Number of paths");
    app.add_option("--eps", eps_, "Sweep of eps (kernel variance)");
    app.add_option("--u", u_, "Comma list for the offset u (empty: origin)");
    app.add_option("--levels", levels_, "Dyadic tau levels of the Delta_2 rule");
  }
  void run(const Context& ctx, CsvWriter& csv) override {
    if (dim_ < 1 || m_ < 1 || paths_ < 1 || levels_ < 1) throw UsageError("dim, m, paths and levels must be >= 1");
    const auto eps = parse_sweep(eps_);
    require_positive(eps, "eps");
    std::vector<double> u = parse_sweep(u_);
    if (u.empty()) u.assign(static_cast<std::size_t>(dim_), 0.0);
    if (static_cast<int>(u.size()) != dim_) throw UsageError("u must have dim components");
    double r = 0.0;
    for (double v : u) r += v * v;
    r = std::sqrt(r);
    std::string functional = "silt_epsilon";
    if (dim_ == 2 && r == 0.0) functional = "silt_centered_2d";
    if (dim_ == 2 && r > 0.0) functional = "renormalized_2d";
    if (dim_ == 3 && r > 0.0) {
      if (!(r < 1.0)) throw UsageError("renormalized_3d needs |u| < 1");
      functional = "renormalized_3d";
    }
    const auto quad = SimplexQuadrature::graded(levels_, 8, 6);
    const auto values = parallel_map<std::vector<double>>(static_cast<std::size_t>(paths_), ctx.workers, [&](std::size_t i) {
      const auto path = sample_path(static_cast<std::size_t>(m_), dim_, ctx.seed, i);
      std::vector<double> out;
      for (double e : eps) {
        if (functional == "silt_centered_2d") {
          out.push_back(silt_centered_2d(path, e, quad));
        } else if (functional == "renormalized_2d") {
          out.push_back(renormalized_2d(path, e, u, quad));
        } else if (functional == "renormalized_3d") {
          out.push_back(renormalized_3d(path, e, u, quad));
        } else {
          out.push_back(silt_epsilon(path, e, u, quad));
        }
      }
      return out;
    });
    csv.comment("functional=" + functional);
    csv.header({"eps", "mean", "se", "l2_increment"});
    std::vector<double> inc_eps, inc_val;
    for (std::size_t k = 0; k < eps.size(); ++k) {
      std::vector<double> col, diff;
      for (const auto& v : values) {
        col.push_back(v[k]);
        if (k > 0) diff.push_back((v[k] - v[k - 1]) * (v[k] - v[k - 1]));
      }
      const auto est = estimate_mean(col);
      double l2 = kNaN;
      if (k > 0) {
        l2 = std::sqrt(estimate_mean(diff).mean);
        if (l2 > 0.0) {
          inc_eps.push_back(eps[k]);
          inc_val.push_back(l2);
        }
      }
      csv.cell(eps[k]).cell(est.mean).cell(est.standard_error).cell(l2);
      csv.end_row();
    }
    const double slope = log_log_slope(inc_eps, inc_val);
    if (std::isfinite(slope)) csv.comment("rate_slope=" + format_double(slope));
  }

 private:
  int dim_ = 2;
  int m_ = 2048;
  int paths_ = 32;
  std::string eps_ = "2^-2..2^-8";
  std::string u_;
  int levels_ = 24;
};

class ChaosCommand final : public Command {
 public:
  std::string name() const override { return "chaos"; }
  std::string description() const override { return "Chaos terms against their almost-sure bound"; }
  void add_options(CLI::App& app) override {
    app.add_option("--dim", dim_, "Dimension");
    app.add_option("--m", m_, "Path grid steps");
    app.add_option("--paths", paths_, "Number of paths");
    app.add_option("--multi-index", indices_, "Multi-index n_1,...,n_d; repeat or separate with ';'")->delimiter(';');
    app.add_option("--max-order", max_order_, "Orders enumerated when no multi-index is given");
    app.add_option("--u-norms", norms_, "Sweep of |u|");
    app.add_option("--direction", direction_, "Comma list direction of u (default: diagonal)");
    app.add_option("--normalization", normalization_, "per-factor or shared")
        ->check(CLI::IsMember({"per-factor", "shared"}));
    app.add_option("--levels", levels_, "Dyadic tau levels of the Delta_2 rule");
    app.add_option("--s-nodes", s_nodes_, "Gauss points in s per tau node");
  }
  void run(const Context& ctx, CsvWriter& csv) override {
    if (dim_ < 2) throw UsageError("dim must be >= 2");
    if (m_ < 1 || paths_ < 1 || levels_ < 1 || s_nodes_ < 1) {
      throw UsageError("m, paths, levels and s-nodes must be >= 1");
    }
    std::vector<MultiIndex> indices;
    for (const auto& s : indices_) {
      MultiIndex idx{parse_int_list(s)};
      if (idx.dim() != dim_) throw UsageError("multi-index '" + s + "' must have dim entries");
      for (int v : idx.n) {
        if (v < 0) throw UsageError("multi-index entries must be >= 0");
      }
      indices.push_back(idx);
    }
    if (indices.empty()) {
      if (max_order_ < 0) throw UsageError("max-order must be >= 0");
      std::vector<int> cur(static_cast<std::size_t>(dim_));
      for (int k = 0; k <= max_order_; ++k) all_indices(dim_, k, cur, 0, indices);
    }
    const auto norms = parse_sweep(norms_);
    require_positive(norms, "u-norms");
    const auto dir = unit_direction(dim_, direction_);
    const auto norm = normalization_ == "shared" ? ChaosNormalization::Shared : ChaosNormalization::PerFactor;
    const auto constants = calibrate_chaos_constants();
    for (const auto& idx : indices) {
      if (dim_ == 2 && idx.order() == 0) {
        for (double r : norms) {
          if (r > constants.log_branch_max_u) throw UsageError("log branch needs |u| <= 0.5");
        }
      }
    }
    const auto quad = SimplexQuadrature::graded(levels_, 8, s_nodes_);
    struct Row {
      SignedLog term;
      double bound;
    };
    const std::size_t per_path = indices.size() * norms.size();
    const auto rows = parallel_map<std::vector<Row>>(static_cast<std::size_t>(paths_), ctx.workers, [&](std::size_t p) {
      const auto path = sample_path(static_cast<std::size_t>(m_), dim_, ctx.seed, p);
      std::vector<Row> out;
      out.reserve(per_path);
      for (const auto& idx : indices) {
        for (double r : norms) {
          const auto u = scaled(dir, r);
          out.push_back({chaos_term_log(path, idx, u, quad, norm), chaos_term_bound(path, idx, u, constants, norm)});
        }
      }
      return out;
    });
    csv.comment("szego_c=" + format_double(constants.szego_c) + " c0=" + format_double(constants.c0));
    csv.header({"path", "multi_index", "k", "u_norm", "m", "term", "log_abs_term", "sign", "log_bound", "branch", "slack"});
    int violations = 0;
    std::vector<std::string> slopes;
    for (std::size_t p = 0; p < rows.size(); ++p) {
      std::size_t at = 0;
      for (const auto& idx : indices) {
        const int k = idx.order();
        const bool log_branch = dim_ == 2 && k == 0;
        std::vector<double> xs, ys;
        for (double r : norms) {
          const Row& row = rows[p][at++];
          const double slack = row.term.sign == 0 ? kInf : row.bound - row.term.log_abs;
          violations += slack < 0.0;
          if (row.term.sign != 0) {
            xs.push_back(r);
            ys.push_back(std::abs(row.term.value()) > 0.0 ? std::abs(row.term.value()) : std::exp(row.term.log_abs));
          }
          csv.cell(p).cell(format_index(idx)).cell(k).cell(r).cell(specfun::simplex_mass(dim_, r));
          csv.cell(row.term.value()).cell(row.term.log_abs).cell(row.term.sign).cell(row.bound);
          csv.cell(log_branch ? "log" : "power").cell(slack);
          csv.end_row();
        }
        // the log branch grows like log(1/|u|); power slopes are fitted on the power branch only
        if (!log_branch && xs.size() == norms.size()) {
          const double slope = log_log_slope(xs, ys);
          if (std::isfinite(slope)) {
            slopes.push_back("slope path=" + std::to_string(p) + " multi_index=" + format_index(idx) +
                             " value=" + format_double(slope) + " floor=" + format_double(-(k + dim_ - 2) - 0.1));
          }
        }
      }
    }
    for (const auto& s : slopes) csv.comment(s);
    csv.comment("violations=" + std::to_string(violations));
  }

 private:
  int dim_ = 4;
  int m_ = 1024;
  int paths_ = 2;
  std::vector<std::string> indices_;
  int max_order_ = 2;
  std::string norms_ = "2^-3..2^-10";
  std::string direction_;
  std::string normalization_ = "per-factor";
  int levels_ = 40;
  int s_nodes_ = 6;
};

class DynkinCommand final : public Command {
 public:
  std::string name() const override { return "dynkin"; }
  std::string description() const override { return "Dynkin functionals and their renormalized sum over an eps ladder"; }
  void add_options(CLI::App& app) override {
    app.add_option("--k", k_, "Order (2 or 3)");
    app.add_option("--m", m_, "Path grid steps");
    app.add_option("--paths", paths_, "Number of paths");
    app.add_option("--eps", eps_, "Sweep of eps (mollifier scale)");
    app.add_option("--nodes", nodes_, "Gauss points per axis of the Delta_3 rule");
  }
  void run(const Context& ctx, CsvWriter& csv) override {
    if (k_ < 2 || k_ > 3) throw UsageError("k must be 2 or 3");
    if (m_ < 1 || paths_ < 1 || nodes_ < 1) throw UsageError("m, paths and nodes must be >= 1");
    const auto eps = parse_sweep(eps_);
    require_positive(eps, "eps");
    const auto q1 = SimplexQuadrature::tensor_gauss(1, 32);
    const auto q2 = SimplexQuadrature::graded(16, 8, 8);
    const auto q3 = SimplexQuadrature::tensor_gauss(3, nodes_);
    auto rule = [&](int l) -> const SimplexQuadrature& { return l == 1 ? q1 : (l == 2 ? q2 : q3); };
    const SimplexFunction one = [](std::span<const double>) { return 1.0; };
    const auto values = parallel_map<std::vector<double>>(static_cast<std::size_t>(paths_), ctx.workers, [&](std::size_t i) {
      const auto path = sample_path(static_cast<std::size_t>(m_), 2, ctx.seed, i);
      std::vector<double> out;
      for (double e : eps) {
        out.push_back(dynkin_T(path, k_, e, one, gaussian_mollifier, rule(k_)));
        out.push_back(dynkin_renormalized(path, k_, e, one, gaussian_mollifier, rule));
      }
      return out;
    });
    csv.header({"eps", "k", "T_mean", "T_se", "renormalized_mean", "renormalized_se"});
    for (std::size_t j = 0; j < eps.size(); ++j) {
      std::vector<double> t, r;
      for (const auto& v : values) {
        t.push_back(v[2 * j]);
        r.push_back(v[2 * j + 1]);
      }
      const auto et = estimate_mean(t), er = estimate_mean(r);
      csv.cell(eps[j]).cell(k_).cell(et.mean).cell(et.standard_error).cell(er.mean).cell(er.standard_error);
      csv.end_row();
    }
  }

 private:
  int k_ = 3;
  int m_ = 1024;
  int paths_ = 8;
  std::string eps_ = "2^-1..2^-4";
  int nodes_ = 24;
};

class MarginalCommand final : public Command {
 public:
  std::string name() const override { return "marginal"; }
  std::string description() const override { return "Samples of mu_n with their density ratios q/m"; }
  void add_options(CLI::App& app) override {
    app.add_option("--dim", dim_, "Dimension");
    app.add_option("--n", n_, "Grid cells");
    app.add_option("--u-norm", u_norm_, "|u|");
    app.add_option("--direction", direction_, "Comma list direction of u (default: first axis)");
    app.add_option("--count", count_, "Number of samples");
  }
  void run(const Context& ctx, CsvWriter& csv) override {
    if (dim_ < 1 || n_ < 1 || count_ < 1) throw UsageError("dim, n and count must be >= 1");
    if (!(u_norm_ > 0.0)) throw UsageError("u-norm must be positive");
    std::string dir_spec = direction_;
    if (dir_spec.empty()) {
      dir_spec = "1";
      for (int i = 1; i < dim_; ++i) dir_spec += ",0";
    }
    const auto u = scaled(unit_direction(dim_, dir_spec), u_norm_);
    const MarginalDensity density(static_cast<std::size_t>(n_), dim_);
    const auto batch = weighted_theta_samples(u, static_cast<std::size_t>(n_), ctx.seed,
                                              static_cast<std::size_t>(count_), density, ctx.workers);
    std::vector<std::string> cols;
    for (int j = 1; j <= n_; ++j) {
      for (int i = 1; i <= dim_; ++i) cols.push_back("x" + std::to_string(j) + "_" + std::to_string(i));
    }
    cols.push_back("q");
    cols.push_back("ratio");
    csv.header(cols);
    const double m = specfun::simplex_mass(dim_, u_norm_);
    for (std::size_t s = 0; s < batch.points.size(); ++s) {
      for (double v : batch.points[s].flat()) csv.cell(v);
      csv.cell(batch.ratios[s] * m).cell(batch.ratios[s]);
      csv.end_row();
    }
    const auto est = estimate_mean(batch.ratios);
    csv.comment("m=" + format_double(m) + " ratio_mean=" + format_double(est.mean) +
                " ratio_se=" + format_double(est.standard_error) + " ess=" + format_double(batch.ess));
  }

 private:
  int dim_ = 4;
  int n_ = 2;
  double u_norm_ = 0.5;
  std::string direction_;
  int count_ = 1000;
};

class TransportCommand final : public Command {
 public:
  std::string name() const override { return "transport"; }
  std::string description() const override { return "Entropy and Talagrand bounds against Monte Carlo H and W2"; }
  void add_options(CLI::App& app) override {
    app.add_option("--dim", dims_, "Comma list of dimensions");
    app.add_option("--n", ns_, "Comma list of grid sizes");
    app.add_option("--u-norms", norms_, "Sweep of |u|");
    app.add_option("--count", count_, "Sample count for W2 (<= 5000)");
    app.add_option("--entropy-count", entropy_count_, "Sample count for H (0: same as count)");
    app.add_option("--regularization", plan_.regularization, "Entropic regularization");
    app.add_option("--max-iterations", plan_.max_iterations, "Sinkhorn iteration cap");
    app.add_option("--tolerance", plan_.tolerance, "Sinkhorn marginal tolerance");
  }
  void run(const Context& ctx, CsvWriter& csv) override {
    const auto dims = parse_int_list(dims_);
    const auto ns = parse_int_list(ns_);
    const auto norms = parse_sweep(norms_);
    require_positive(norms, "u-norms");
    if (count_ < 1 || count_ > 5000) throw UsageError("count must lie in 1..5000");
    if (entropy_count_ < 0) throw UsageError("entropy-count must be >= 0");
    if (!(plan_.regularization > 0.0) || !(plan_.tolerance > 0.0) || plan_.max_iterations < 1) {
      throw UsageError("regularization, tolerance and max-iterations must be positive");
    }
    for (int d : dims) {
      for (int n : ns) {
        if (d < 1 || n < 1) throw UsageError("dim and n must be >= 1");
        if (d * n > 16) throw UsageError("d * n must not exceed 16");
      }
    }
    csv.header({"d", "n", "u_norm", "m", "kappa", "entropy_bound", "talagrand_bound", "H_mc", "H_se", "w2_mc",
                "w2_se", "ess", "vacuous_flag"});
    std::uint64_t row = 0;
    for (int d : dims) {
      for (int n : ns) {
        const MarginalDensity density(static_cast<std::size_t>(n), d);
        for (double r : norms) {
          const std::uint64_t row_seed = derive_seed(ctx.seed, row++);
          std::vector<double> u(static_cast<std::size_t>(d), 0.0);
          u[0] = r;
          const auto nn = static_cast<std::size_t>(n);
          const auto tal = talagrand_bound(r, d, nn);
          const auto ent_count = static_cast<std::size_t>(entropy_count_ > 0 ? entropy_count_ : count_);
          const auto h = empirical_relative_entropy(u, nn, derive_seed(row_seed, 10), ent_count, density, ctx.workers);
          const auto batch = weighted_theta_samples(u, nn, row_seed, static_cast<std::size_t>(count_), density, ctx.workers);
          const auto w2 = empirical_w2(u, nn, row_seed, static_cast<std::size_t>(count_), density, plan_, ctx.workers);
          csv.cell(d).cell(n).cell(r).cell(specfun::simplex_mass(d, r)).cell(tal.kappa).cell(tal.entropy);
          csv.cell(tal.value).cell(h.mean).cell(h.standard_error).cell(w2.value).cell(w2.error).cell(batch.ess);
          csv.cell(tal.vacuous ? 1 : 0);
          csv.end_row();
        }
      }
    }
  }

 private:
  std::string dims_ = "4";
  std::string ns_ = "2";
  std::string norms_ = "0.3";
  int count_ = 2000;
  int entropy_count_ = 0;
  TransportPlanSpec plan_;
};

class CapacityCommand final : public Command {
 public:
  std::string name() const override { return "capacity"; }
  std::string description() const override { return "Capacity lower bound m^2 / |rho_2(u)|^2 over a sweep of |u|"; }
  void add_options(CLI::App& app) override {
    app.add_option("--dim", dim_, "Dimension (>= 4)");
    app.add_option("--gamma", gamma_, "Sobolev index, below (4 - d) / 2");
    app.add_option("--K", k_, "Truncation order (cap when adaptive)");
    app.add_option("--tail-tol", tail_tol_, "Adaptive truncation threshold");
    app.add_flag("--fixed-k", fixed_k_, "Sum exactly K + 1 terms");
    app.add_option("--u-norms", norms_, "Sweep of |u|");
    app.add_option("--scheme", scheme_, "reduced or tensor")->check(CLI::IsMember({"reduced", "tensor"}));
    app.add_option("--tensor-nodes", tensor_nodes_, "Gauss points per axis for the tensor scheme");
  }
  void run(const Context& ctx, CsvWriter& csv) override {
    const auto norms = parse_sweep(norms_);
    require_positive(norms, "u-norms");
    if (dim_ < 4) throw UsageError("dim must be >= 4");
    if (!(gamma_ < (4.0 - dim_) / 2.0)) throw UsageError("gamma must be below (4 - d) / 2");
    if (k_ < 0) throw UsageError("K must be >= 0");
    if (!(tail_tol_ > 0.0)) throw UsageError("tail-tol must be positive");
    SobolevOptions opts;
    opts.scheme = scheme_ == "tensor" ? SobolevScheme::Tensor : SobolevScheme::Reduced;
    opts.tensor_nodes = tensor_nodes_;
    opts.workers = ctx.workers;
    csv.header({"d", "gamma", "u_norm", "K_used", "m", "norm_sq", "capacity_lb", "tail_ratio"});
    std::vector<double> xs, ys;
    for (double r : norms) {
      SobolevSpec spec;
      spec.gamma = gamma_;
      spec.K = k_;
      spec.adaptive_k = !fixed_k_;
      spec.tail_tol = tail_tol_;
      spec.u.assign(static_cast<std::size_t>(dim_), 0.0);
      spec.u[0] = r;
      const auto cap = capacity_lower_bound(spec, opts);
      csv.cell(dim_).cell(gamma_).cell(r).cell(cap.norm.k_used).cell(cap.m).cell(cap.norm.value);
      csv.cell(cap.value).cell(cap.norm.tail_ratio);
      csv.end_row();
      xs.push_back(r);
      ys.push_back(cap.value);
    }
    if (xs.size() >= 3) csv.comment("slope=" + format_double(log_log_slope(xs, ys)));
  }

 private:
  int dim_ = 4;
  double gamma_ = -0.5;
  int k_ = 64;
  double tail_tol_ = 1e-3;
  bool fixed_k_ = false;
  std::string norms_ = "2^-2..2^-7";
  std::string scheme_ = "reduced";
  int tensor_nodes_ = 24;
};

}  // namespace

std::vector<std::unique_ptr<Command>> make_commands() {
  std::vector<std::unique_ptr<Command>> out;
  out.push_back(std::make_unique<KernelCommand>());
  out.push_back(std::make_unique<HermiteCommand>());
  out.push_back(std::make_unique<SiltCommand>());
  out.push_back(std::make_unique<ChaosCommand>());
  out.push_back(std::make_unique<DynkinCommand>());
  out.push_back(std::make_unique<MarginalCommand>());
  out.push_back(std::make_unique<TransportCommand>());
  out.push_back(std::make_unique<CapacityCommand>());
  return out;
}

}  // namespace silt::cli
