#include "silt/marginals.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "silt/csv.hpp"
#include "silt/errors.hpp"
#include "silt/numeric.hpp"
#include "silt/rng.hpp"
#include "silt/specfun.hpp"

namespace silt {

namespace {

constexpr double kSigmaFloor = 1e-12;
constexpr double kCentreRadius = 1e-6;
constexpr int kMaxSplitDepth = 8;

}  // namespace

OverlapDecomposition overlap_decomposition(double s, double t, const TimeGrid& grid) {
  if (!(s < t)) throw DomainError("overlap_decomposition: need s < t");
  if (s < 0.0 || t > 1.0) throw DomainError("overlap_decomposition: need 0 <= s < t <= 1");
  OverlapDecomposition out;
  out.s = s;
  out.t = t;
  const std::size_t n = grid.cells();
  out.alpha.assign(n, 0.0);
  double projected = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const double a = std::max(0.0, std::min(t, grid[j]) - std::max(s, grid[j - 1]));
    out.alpha[j - 1] = a;
    projected += a * a / grid.width(j);
  }
  out.sigma2 = std::clamp((t - s) - projected, 0.0, t - s);
  return out;
}

MarginalPoint::MarginalPoint(std::size_t n, int d, std::vector<double> flat) : n_(n), d_(d), x_(std::move(flat)) {
  if (x_.size() != n_ * static_cast<std::size_t>(d_)) throw DomainError("MarginalPoint: size mismatch");
}

namespace {

void projected_argument(const OverlapDecomposition& ov, const TimeGrid& grid, std::span<const double> u,
                        const MarginalPoint& x, std::span<double> out) {
  const auto d = static_cast<std::size_t>(x.dim());
  for (std::size_t i = 0; i < d; ++i) out[i] = -u[i];
  for (std::size_t j = 1; j <= grid.cells(); ++j) {
    const double a = ov.alpha[j - 1];
    if (a == 0.0) continue;
    const double c = a / grid.width(j);
    for (std::size_t i = 0; i < d; ++i) out[i] += c * (x.coord(j, i) - x.coord(j - 1, i));
  }
}

void check_point(const TimeGrid& grid, std::span<const double> u, const MarginalPoint& x) {
  if (x.cells() != grid.cells()) throw DomainError("marginals: point does not match the grid");
  if (static_cast<int>(u.size()) != x.dim()) throw DomainError("marginals: u has the wrong dimension");
}

}  // namespace

double conditional_kernel(double s, double t, const TimeGrid& grid, double eps, std::span<const double> u,
                          const MarginalPoint& x) {
  check_point(grid, u, x);
  if (eps < 0.0) throw DomainError("conditional_kernel: eps must be non-negative");
  const auto ov = overlap_decomposition(s, t, grid);
  std::vector<double> arg(u.size());
  projected_argument(ov, grid, u, x, arg);
  double r2 = 0.0;
  for (double v : arg) r2 += v * v;
  const double var = eps + ov.sigma2;
  if (var == 0.0) {
    if (r2 == 0.0) throw DegenerateKernel("conditional_kernel: zero variance at the kernel centre");
    return 0.0;
  }
  return specfun::heat_kernel_radial(r2, x.dim(), var);
}

double marginal_density_q(std::span<const double> u, const TimeGrid& grid, const MarginalPoint& x,
                          const SimplexQuadrature& quad) {
  check_point(grid, u, x);
  if (!grid.is_uniform()) throw DomainError("marginal_density_q: uniform grid required");
  double u2 = 0.0;
  for (double v : u) u2 += v * v;
  if (u2 == 0.0) throw DomainError("marginal_density_q: u must be non-zero");
  if (quad.dim() != 2) throw DomainError("marginal_density_q: need a Delta_2 rule");
  std::vector<double> arg(u.size());
  const int d = x.dim();

  std::function<double(double, double, double, int)> eval = [&](double s, double t, double w, int depth) -> double {
    s = std::max(s, 0.0);
    t = std::min(t, 1.0);
    if (!(s < t)) return 0.0;
    const auto ov = overlap_decomposition(s, t, grid);
    projected_argument(ov, grid, u, x, arg);
    double r2 = 0.0;
    for (double v : arg) r2 += v * v;
    if (ov.sigma2 >= kSigmaFloor) return w * specfun::heat_kernel_radial(r2, d, ov.sigma2);
    if (std::sqrt(r2) >= kCentreRadius || depth >= kMaxSplitDepth) return 0.0;
    const double h = 0.25 * std::sqrt(w);
    double sum = 0.0;
    for (int a = -1; a <= 1; a += 2) {
      for (int b = -1; b <= 1; b += 2) sum += eval(s + a * h, t + b * h, 0.25 * w, depth + 1);
    }
    return sum;
  };

  CompensatedSum acc;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const auto node = quad.node(i);
    acc.add(eval(node[0], node[1], quad.weight(i), 0));
  }
  return acc.value();
}

MarginalDensity::MarginalDensity(std::size_t n, int d, const MarginalDensityOptions& opts) : n_(n), d_(d) {
  if (n == 0) throw DomainError("MarginalDensity: n must be >= 1");
  if (d < 1) throw DomainError("MarginalDensity: d must be >= 1");
  const TimeGrid grid = TimeGrid::uniform(n);
  const auto quad = SimplexQuadrature::grid_aligned(grid.nodes(), opts.gauss_nodes, opts.tau_levels, opts.s_nodes);
  const double h = 1.0 / static_cast<double>(n);
  table_.reserve(quad.size());
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const auto node = quad.node(i);
    const double s = node[0], t = node[1];
    const std::size_t a = grid.cell_of(s);
    std::size_t b = grid.cell_of(t);
    // t on the left end of a cell contributes nothing to that cell.
    if (b > a && t <= grid[b - 1]) --b;
    Node row{};
    row.weight = quad.weight(i);
    row.tau = t - s;
    row.first = static_cast<std::uint32_t>(a);
    row.last = static_cast<std::uint32_t>(b);
    double projected;
    if (a == b) {
      const double alpha = t - s;
      row.c_first = alpha / h;
      row.c_last = 0.0;
      projected = alpha * alpha / h;
    } else {
      const double alpha_a = grid[a] - s;
      const double alpha_b = t - grid[b - 1];
      row.c_first = alpha_a / h;
      row.c_last = alpha_b / h;
      projected = (alpha_a * alpha_a + alpha_b * alpha_b) / h + static_cast<double>(b - a - 1) * h;
    }
    row.sigma2 = std::clamp(row.tau - projected, 0.0, row.tau);
    if (row.sigma2 < kSigmaFloor) continue;
    table_.push_back(row);
  }
}

double MarginalDensity::operator()(std::span<const double> u, const MarginalPoint& x) const {
  if (x.cells() != n_ || x.dim() != d_) throw DomainError("MarginalDensity: point does not match");
  if (static_cast<int>(u.size()) != d_) throw DomainError("MarginalDensity: u has the wrong dimension");
  const auto d = static_cast<std::size_t>(d_);
  double arg[32];
  std::vector<double> heap;
  double* z = arg;
  if (d > 32) {
    heap.resize(d);
    z = heap.data();
  }
  CompensatedSum acc;
  for (const auto& row : table_) {
    double r2 = 0.0;
    const std::size_t a = row.first, b = row.last;
    for (std::size_t i = 0; i < d; ++i) {
      double v = row.c_first * (x.coord(a, i) - x.coord(a - 1, i)) - u[i];
      if (b > a) v += (x.coord(b - 1, i) - x.coord(a, i)) + row.c_last * (x.coord(b, i) - x.coord(b - 1, i));
      z[i] = v;
      r2 += v * v;
    }
    acc.add(row.weight * specfun::heat_kernel_radial(r2, d_, row.sigma2));
  }
  return acc.value();
}

double MarginalDensity::expected_value(double u_norm) const {
  CompensatedSum acc;
  for (const auto& row : table_) acc.add(row.weight * specfun::heat_kernel_radial(u_norm * u_norm, d_, row.tau));
  return acc.value();
}

std::vector<MarginalPoint> sample_mu_n(std::size_t n, int d, std::uint64_t seed, std::size_t count) {
  if (n == 0) throw DomainError("sample_mu_n: n must be >= 1");
  if (d < 1) throw DomainError("sample_mu_n: d must be >= 1");
  const double scale = std::sqrt(1.0 / static_cast<double>(n));
  const auto dd = static_cast<std::size_t>(d);
  std::vector<MarginalPoint> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    Philox rng(seed, c);
    std::vector<double> flat(n * dd);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < dd; ++i) {
        const double prev = j == 0 ? 0.0 : flat[(j - 1) * dd + i];
        flat[j * dd + i] = prev + scale * rng.normal();
      }
    }
    out.emplace_back(n, d, std::move(flat));
  }
  return out;
}

void write_marginal_csv(std::ostream& os, std::span<const MarginalPoint> points) {
  CsvWriter csv(os);
  if (points.empty()) {
    csv.header({});
    return;
  }
  std::vector<std::string> cols;
  for (std::size_t j = 1; j <= points[0].cells(); ++j) {
    for (int i = 1; i <= points[0].dim(); ++i) cols.push_back("x" + std::to_string(j) + "_" + std::to_string(i));
  }
  csv.header(cols);
  for (const auto& p : points) {
    for (double v : p.flat()) csv.cell(v);
    csv.end_row();
  }
}

std::vector<MarginalPoint> read_marginal_csv(std::istream& is, std::size_t n, int d) {
  std::string line;
  bool have_header = false;
  std::vector<MarginalPoint> out;
  const std::size_t width = n * static_cast<std::size_t>(d);
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv_line(line);
    if (!have_header) {
      if (cells.size() != width) throw DomainError("read_marginal_csv: header width mismatch");
      have_header = true;
      continue;
    }
    if (cells.size() != width) throw DomainError("read_marginal_csv: ragged row");
    std::vector<double> flat(width);
    for (std::size_t k = 0; k < width; ++k) flat[k] = std::stod(cells[k]);
    out.emplace_back(n, d, std::move(flat));
  }
  return out;
}

}  // namespace silt
