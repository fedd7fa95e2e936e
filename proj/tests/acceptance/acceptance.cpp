// Acceptance suite. One PASS/FAIL line per criterion; `--criterion N` runs a
// single one, no argument runs all. Exit status is non-zero if any selected
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "CLI11.hpp"
#include "silt/chaos.hpp"
#include "silt/dynkin.hpp"
#include "silt/marginals.hpp"
#include "silt/numeric.hpp"
#include "silt/path.hpp"
#include "silt/quadrature.hpp"
#include "silt/rng.hpp"
#include "silt/sobolev.hpp"
#include "silt/specfun.hpp"
#include "silt/transport.hpp"
#include "silt_oracles.hpp"

namespace sf = silt::specfun;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return silt::fit_slope(lx, ly);
}

Outcome closed_form_vs_quadrature() {
  double worst = 0.0;
  int points = 0;
  for (double a : {0.0, 0.5, 1.0, 2.0}) {
    for (int d : {2, 3, 4, 5}) {
      for (double r : {0.05, 0.2, 1.0}) {
        const double exact = sf::simplex_moment_integral(a, d, r);
        const double ref = oracle::simplex_raw(a, d, r);
        worst = std::max(worst, std::abs(exact - ref) / std::abs(ref));
        ++points;
      }
    }
  }
  return {points == 48 && worst <= 1e-8, std::to_string(points) + " points, max rel err " + fmt(worst)};
}

Outcome asymptotic_regime() {
  double worst = 0.0;
  int cases = 0;
  for (double a : {0.0, 0.5, 1.0, 2.0}) {
    for (int d : {2, 3, 4, 5}) {
      if (!(a > 1.0 - d / 2.0)) continue;
      const double ratio = sf::simplex_moment_integral(a, d, 1e-3) / sf::simplex_moment_asymptotic(a, d, 1e-3);
      worst = std::max(worst, std::abs(ratio - 1.0));
      ++cases;
    }
  }
  const double log_ratio = sf::simplex_moment_integral(0.0, 2, 1e-4) / sf::simplex_moment_asymptotic(0.0, 2, 1e-4);
  const bool ok = worst <= 0.02 && std::abs(log_ratio - 1.0) <= 0.05;
  return {ok, std::to_string(cases) + " power cases, max |ratio-1| " + fmt(worst) + "; d=2 log case ratio " +
                  fmt(log_ratio)};
}

Outcome hermite_suite() {
  int exact_fail = 0;
  for (int n = 0; n <= 10; ++n) {
    for (long long x = -6; x <= 6; ++x) {
      exact_fail += sf::hermite_eval(n, static_cast<double>(x)) != static_cast<double>(oracle::hermite_explicit(n, x));
    }
  }
  double deriv = 0.0;
  const double h = 1e-5;
  for (int n = 1; n <= 20; ++n) {
    for (double x : {-3.3, -1.1, 0.4, 0.9, 2.7, 4.1}) {
      const double fd = (sf::hermite_eval(n, x + h) - sf::hermite_eval(n, x - h)) / (2.0 * h);
      const double exact = n * sf::hermite_eval(n - 1, x);
      deriv = std::max(deriv, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
    }
  }
  double gen = 0.0;
  for (double x : {-2.0, -0.5, 0.0, 0.3, 1.7}) {
    for (double t : {-0.6, 0.25, 0.5}) {
      double partial = 0.0, tn = 1.0;
      for (int n = 0; n <= 60; ++n) {
        partial += sf::hermite_eval(n, x) * tn;
        tn *= t / (n + 1);
      }
      const double exact = std::exp(x * t - 0.5 * t * t);
      gen = std::max(gen, std::abs(partial - exact) / exact);
    }
  }
  return {exact_fail == 0 && deriv <= 1e-6 && gen <= 1e-10,
          "explicit mismatches " + std::to_string(exact_fail) + ", derivative rel err " + fmt(deriv) +
              ", generating fn rel err " + fmt(gen)};
}

Outcome cauchy_bound() {
  silt::Philox rng(20240601, 0);
  int violations = 0;
  double min_slack = HUGE_VAL;
  for (int i = 0; i < 10000; ++i) {
    // dt log-uniform over [1e-6, 1], increment a Brownian increment over dt
    const double dt = std::exp(std::log(1e-6) * rng.uniform());
    const double inc = std::sqrt(dt) * rng.normal();
    for (int n = 1; n <= 30; ++n) {
      const auto h = sf::hermite_log_abs(n, inc / std::sqrt(dt));
      if (h.sign == 0) continue;
      const double slack = sf::cauchy_hermite_bound(n, inc, dt) - h.log_abs;
      min_slack = std::min(min_slack, slack);
      violations += slack < 0.0;
    }
  }
  return {violations == 0, "300000 comparisons, violations " + std::to_string(violations) + ", min log slack " +
                               fmt(min_slack)};
}

std::vector<silt::MultiIndex> chaos_indices(int d) {
  std::vector<silt::MultiIndex> out;
  for (int k = 0; k <= 6; ++k) {
    std::vector<int> a(static_cast<std::size_t>(d), 0);
    a[0] = k;
    out.push_back({a});
    if (k >= 2) {
      std::vector<int> b(static_cast<std::size_t>(d), 0);
      b[0] = k / 2;
      b[static_cast<std::size_t>(d - 1)] = k - k / 2;
      out.push_back({b});
    }
  }
  return out;
}

Outcome chaos_bound() {
  const auto constants = silt::calibrate_chaos_constants();
  const auto quad = silt::SimplexQuadrature::graded(40, 8, 6);
  std::vector<double> norms;
  for (int e = 1; e <= 10; ++e) norms.push_back(std::ldexp(1.0, -e));
  int triples = 0, violations = 0, fits = 0, slope_fail = 0;
  double worst_margin = HUGE_VAL;
  for (int d : {2, 3, 4}) {
    const auto indices = chaos_indices(d);
    for (std::uint64_t p = 0; p < 3; ++p) {
      const auto path = silt::sample_path(1024, d, 515, p);
      for (const auto& idx : indices) {
        std::vector<double> xs, ys;
        for (double r : norms) {
          std::vector<double> u(static_cast<std::size_t>(d), r / std::sqrt(static_cast<double>(d)));
          const auto term = silt::chaos_term_log(path, idx, u, quad);
          const double bound = silt::chaos_term_bound(path, idx, u, constants);
          ++triples;
          if (term.sign == 0) continue;
          violations += term.log_abs > bound;
          // slopes are regressed over the u -> 0 grid 2^-3..2^-10 only
          if (r > 0.125) continue;
          xs.push_back(r);
          ys.push_back(std::exp(term.log_abs));
        }
        const int k = idx.order();
        if (d == 2 && k == 0) continue;
        if (xs.size() != norms.size() - 2) continue;
        const double floor = -(k + d - 2) - 0.1;
        const double slope = log_log_slope(xs, ys);
        ++fits;
        worst_margin = std::min(worst_margin, slope - floor);
        slope_fail += slope < floor;
      }
    }
  }
  return {triples >= 1000 && violations == 0 && fits > 0 && slope_fail == 0,
          std::to_string(triples) + " triples, violations " + std::to_string(violations) + "; " +
              std::to_string(fits) + " slope fits, below floor " + std::to_string(slope_fail) +
              ", min slope-floor " + fmt(worst_margin)};
}

Outcome chaos_orthogonality() {
  const std::vector<double> u{0.4, 0.3};
  const auto q = silt::SimplexQuadrature::graded(12, 6, 6);
  const std::vector<silt::MultiIndex> idx{{{1, 0}}, {{0, 1}}, {{2, 0}}, {{1, 1}}};
  std::vector<std::vector<double>> terms(idx.size());
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto path = silt::sample_path(256, 2, 606, i);
    for (std::size_t j = 0; j < idx.size(); ++j) terms[j].push_back(silt::chaos_term(path, idx[j], u, q));
  }
  int pairs = 0, outside = 0;
  double worst = 0.0;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const auto ea = silt::estimate_mean(terms[a]), eb = silt::estimate_mean(terms[b]);
      std::vector<double> prod;
      for (std::size_t i = 0; i < terms[a].size(); ++i) prod.push_back((terms[a][i] - ea.mean) * (terms[b][i] - eb.mean));
      const auto cov = silt::estimate_mean(prod);
      const double z = std::abs(cov.mean) / cov.standard_error;
      worst = std::max(worst, z);
      outside += z > 3.0;
      ++pairs;
    }
  }
  return {outside == 0, std::to_string(pairs) + " pairs over 1000 paths, max |cov|/se " + fmt(worst)};
}

long long brute_surjections(int k, int l) {
  // all non-decreasing maps {1..k} -> {1..l} hitting every value
  long long count = 0;
  std::vector<int> f(static_cast<std::size_t>(k), 1);
  std::function<void(int, int)> rec = [&](int pos, int lo) {
    if (pos == k) {
      std::vector<bool> hit(static_cast<std::size_t>(l) + 1, false);
      for (int v : f) hit[static_cast<std::size_t>(v)] = true;
      count += std::all_of(hit.begin() + 1, hit.end(), [](bool b) { return b; });
      return;
    }
    for (int v = lo; v <= l; ++v) {
      f[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, v);
    }
  };
  rec(0, 1);
  return count;
}

Outcome dynkin_combinatorics() {
  const silt::SimplexFunction one = [](std::span<const double>) { return 1.0; };
  int cases = 0, wrong = 0;
  for (int k = 2; k <= 8; ++k) {
    for (int l = 2; l <= k; ++l) {
      std::vector<double> s(static_cast<std::size_t>(l));
      for (int i = 0; i < l; ++i) s[static_cast<std::size_t>(i)] = (i + 1.0) / (l + 1.0);
      const double value = silt::dynkin_B(k, l, one)(s);
      const long long brute = brute_surjections(k, l);
      wrong += value != static_cast<double>(brute);
      wrong += silt::monotone_surjection_count(k, l) != brute;
      ++cases;
    }
  }
  return {wrong == 0, std::to_string(cases) + " (k,l) pairs, mismatches " + std::to_string(wrong)};
}

Outcome projection_lemma() {
  std::mt19937_64 rng(8080);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int triples = 0;
  double worst = 0.0;
  while (triples < 1000) {
    const int n = 1 + static_cast<int>(rng() % 8);
    std::vector<double> cuts(static_cast<std::size_t>(n));
    for (double& c : cuts) c = unif(rng);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> nodes{0.0};
    for (double c : cuts) {
      if (c > nodes.back() + 1e-6) nodes.push_back(c);
    }
    if (unif(rng) < 0.5) nodes.back() = 1.0;
    double s = unif(rng), t = unif(rng);
    if (s > t) std::swap(s, t);
    if (!(t - s > 1e-9)) continue;
    const auto ov = silt::overlap_decomposition(s, t, silt::TimeGrid(nodes));
    worst = std::max(worst, std::abs(ov.sigma2 - oracle::projection_residual(s, t, nodes)));
    ++triples;
  }

  int configs = 0, outside = 0;
  double worst_z = 0.0;
  while (configs < 20) {
    const int n = 1 + static_cast<int>(rng() % 5);
    std::vector<double> nodes{0.0};
    for (int j = 1; j <= n; ++j) nodes.push_back(nodes.back() + 0.2 + unif(rng));
    const double scale = (unif(rng) < 0.5 ? 1.0 : 0.9) / nodes.back();
    for (double& v : nodes) v *= scale;
    std::vector<double> values{0.0};
    for (int j = 1; j <= n; ++j) values.push_back(values.back() + 0.5 * (unif(rng) - 0.5));
    double s = unif(rng), t = unif(rng);
    if (s > t) std::swap(s, t);
    if (t - s < 0.05) continue;
    const double eps = 0.01 + 0.09 * unif(rng);
    const std::vector<double> u{0.5 * (unif(rng) - 0.5)};
    const silt::TimeGrid grid(nodes);
    const silt::MarginalPoint x(static_cast<std::size_t>(n), 1, std::vector<double>(values.begin() + 1, values.end()));
    const double exact = silt::conditional_kernel(s, t, grid, eps, u, x);
    oracle::BridgeSampler sampler(nodes, values, 9000 + static_cast<std::uint64_t>(configs));
    std::vector<double> xs;
    for (int i = 0; i < 20000; ++i) {
      const auto [ws, wt] = sampler.sample(s, t);
      const double z = wt - ws - u[0];
      xs.push_back(std::exp(-z * z / (2.0 * eps)) / std::sqrt(2.0 * std::numbers::pi * eps));
    }
    const auto est = silt::estimate_mean(xs);
    const double z = std::abs(est.mean - exact) / est.standard_error;
    worst_z = std::max(worst_z, z);
    outside += z > 3.0;
    ++configs;
  }
  return {worst <= 1e-10 && outside == 0, std::to_string(triples) + " triples, max |sigma2 - residual| " + fmt(worst) +
                                              "; " + std::to_string(configs) + " kernel configs, max z " + fmt(worst_z)};
}

Outcome marginal_tower() {
  int configs = 0, outside = 0;
  double worst_z = 0.0;
  for (int d : {4, 5}) {
    for (std::size_t n = 1; n <= 4; ++n) {
      const silt::MarginalDensity density(n, d);
      const auto points = silt::sample_mu_n(n, d, 1000 + 10 * static_cast<std::uint64_t>(d) + n, 10000);
      for (double r : {0.2, 0.5}) {
        std::vector<double> u(static_cast<std::size_t>(d), 0.0);
        u[0] = r;
        std::vector<double> qs;
        qs.reserve(points.size());
        for (const auto& x : points) qs.push_back(density(u, x));
        const auto est = silt::estimate_mean(qs);
        const double m = sf::simplex_mass(d, r);
        const double z = std::abs(est.mean - m) / est.standard_error;
        worst_z = std::max(worst_z, z);
        outside += z > 3.0;
        ++configs;
      }
    }
  }
  return {outside == 0, std::to_string(configs) + " configs x 10000 samples, max |mean - m|/se " + fmt(worst_z)};
}

Outcome eigenvalue_lemma() {
  double worst = 0.0;
  for (int n = 1; n <= 256; ++n) {
    const auto ours = silt::hessian_eigenvalues(static_cast<std::size_t>(n));
    const auto ref = oracle::tridiagonal_hessian_eigenvalues(n);
    for (std::size_t j = 0; j < ref.size(); ++j) worst = std::max(worst, std::abs(ours[j] - ref[j]) / std::max(1.0, ref[j]));
  }
  const int n = 3, d = 2;
  const Eigen::MatrixXd full = Eigen::kroneckerProduct(oracle::hessian_matrix(n), Eigen::MatrixXd::Identity(d, d));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(full);
  const auto ours = silt::hessian_eigenvalues(n);
  double kron = 0.0;
  for (int i = 0; i < n * d; ++i) {
    kron = std::max(kron, std::abs(solver.eigenvalues()(i) - ours[static_cast<std::size_t>(i / d)]));
  }
  return {worst <= 1e-10 && kron <= 1e-10, "n <= 256 max rel err " + fmt(worst) + ", Kronecker (3,2) err " + fmt(kron)};
}

Outcome entropy_chain() {
  bool ok = true;
  std::string detail;
  for (std::size_t n : {1u, 2u}) {
    const silt::MarginalDensity density(n, 4);
    for (double r : {0.2, 0.5}) {
      const std::vector<double> u{r, 0.0, 0.0, 0.0};
      const auto h = silt::empirical_relative_entropy(u, n, 77 + n, 20000, density);
      const auto bound = silt::entropy_bound(r, 4, n);
      const bool lower = h.mean >= -3.0 * h.standard_error;
      const bool upper = bound.vacuous || h.mean <= bound.value + 3.0 * h.standard_error;
      ok = ok && lower && upper;
      detail += "(n=" + std::to_string(n) + ",|u|=" + fmt(r) + ") H=" + fmt(h.mean) + "+-" + fmt(h.standard_error) +
                " bound=" + fmt(bound.value) + (bound.vacuous ? " vacuous" : "") + "; ";
    }
  }
  return {ok, detail};
}

Outcome final_proposition() {
  silt::Philox rx(4242, 0), ry(4242, 1);
  const std::size_t count = 2000, dim = 2;
  std::vector<double> x(count * dim), y(count * dim);
  for (std::size_t i = 0; i < count * dim; ++i) {
    x[i] = rx.normal();
    y[i] = ry.normal() + (i % dim == 0 ? 2.0 : 0.0);
  }
  const auto calib = silt::debiased_w2(x, y, dim, {});
  const bool calibrated = std::abs(calib.value - 4.0) <= 0.4;
  std::string detail = "gaussian shift W2^2=" + fmt(calib.value) + " (target 4)";
  if (!calibrated) return {false, detail + "; calibration failed"};

  const std::vector<double> u{0.3, 0.0, 0.0, 0.0};
  const silt::MarginalDensity density(2, 4);
  const auto w2 = silt::empirical_w2(u, 2, 1, count, density, {});
  const auto tal = silt::talagrand_bound(0.3, 4, 2);
  const bool ok = tal.vacuous || w2.value <= tal.value;
  return {ok, detail + "; W2^2=" + fmt(w2.value) + "+-" + fmt(w2.error) + " talagrand=" + fmt(tal.value) +
                  (tal.vacuous ? " (vacuous_flag set)" : "")};
}

Outcome capacity_shape() {
  std::vector<double> xs, ys;
  double worst_tail = 0.0;
  for (int e = 2; e <= 7; ++e) {
    silt::SobolevSpec spec;
    spec.gamma = -0.5;
    spec.u = {std::ldexp(1.0, -e), 0.0, 0.0, 0.0};
    const auto cap = silt::capacity_lower_bound(spec);
    xs.push_back(spec.u[0]);
    ys.push_back(cap.value);
    worst_tail = std::max(worst_tail, cap.norm.tail_ratio);
  }
  const double slope = log_log_slope(xs, ys);
  return {slope >= 3.8 && worst_tail < 1e-3,
          "slope " + fmt(slope) + " (need >= 3.8), capacity at 2^-2 " + fmt(ys.front()) + ", at 2^-7 " +
              fmt(ys.back()) + ", max tail ratio " + fmt(worst_tail)};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

Outcome reproducibility() {
#ifndef SILT_CLI_PATH
  return {false, "built without the silt CLI"};
#else
  struct Run {
    std::string command, args;
  };
  const std::vector<Run> runs{
      {"kernel", "--alpha 0,1 --dim 2,4 --u-norms 2^-2..2^-8"},
      {"hermite", "--n-max 30"},
      {"silt", "--m 256 --paths 6 --eps 2^-2..2^-5 --levels 12"},
      {"chaos", "--m 256 --paths 3 --max-order 3"},
      {"dynkin", "--m 128 --paths 3 --k 3 --eps 2^-1..2^-2 --nodes 10"},
      {"marginal", "--count 300"},
      {"transport", "--n 1 --count 300"},
      {"capacity", "--u-norms 2^-2..2^-4"},
  };
  const auto root = std::filesystem::temp_directory_path() / ("silt_acceptance_" + std::to_string(::getpid()));
  std::filesystem::remove_all(root);
  int identical = 0;
  std::string failures;
  for (const auto& run : runs) {
    std::vector<std::string> outputs;
    for (const char* tag : {"w1a", "w1b", "w3"}) {
      const auto dir = root / (run.command + "_" + tag);
      const std::string workers = std::string(tag) == "w3" ? "3" : "1";
      const std::string cmd = std::string(SILT_CLI_PATH) + " " + run.command + " " + run.args + " --seed 11 --workers " +
                              workers + " --out " + dir.string() + " > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        failures += run.command + " exited non-zero; ";
        break;
      }
      outputs.push_back(read_file(dir / (run.command + ".csv")));
    }
    if (outputs.size() == 3 && !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2]) {
      ++identical;
    } else if (outputs.size() == 3) {
      failures += run.command + " differs; ";
    }
  }
  std::filesystem::remove_all(root);
  return {identical == static_cast<int>(runs.size()),
          std::to_string(identical) + "/" + std::to_string(runs.size()) +
              " commands byte-identical across re-run and workers 1 vs 3" + (failures.empty() ? "" : "; " + failures)};
#endif
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, <= 0 means none
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "closed form vs quadrature", 10, closed_form_vs_quadrature},
      {2, "asymptotic regime", 5, asymptotic_regime},
      {3, "hermite suite", 5, hermite_suite},
      {4, "cauchy bound", 30, cauchy_bound},
      {5, "chaos a.s. bound", 300, chaos_bound},
      {6, "chaos orthogonality", 120, chaos_orthogonality},
      {7, "dynkin combinatorics", 1, dynkin_combinatorics},
      {8, "projection lemma", 120, projection_lemma},
      {9, "marginal density tower", 300, marginal_tower},
      {10, "eigenvalue lemma", 5, eigenvalue_lemma},
      {11, "entropy chain", 600, entropy_chain},
      {12, "final proposition end-to-end", 600, final_proposition},
      {13, "capacity shape", 900, capacity_shape},
      {14, "reproducibility", 0, reproducibility},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"silt acceptance suite"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-14)")->check(CLI::Range(1, 14));
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  for (const auto& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.time_limit <= 0 || secs < c.time_limit;
    const bool pass = out.pass && in_time;
    all_pass = all_pass && pass;
    std::printf("criterion %2d %s: %s | %s | %.2fs%s\n", c.id, pass ? "PASS" : "FAIL", c.name, out.detail.c_str(), secs,
                in_time ? "" : " (over time limit)");
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
