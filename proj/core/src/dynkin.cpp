#include "silt/dynkin.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "silt/errors.hpp"
#include "silt/numeric.hpp"

namespace silt {

double gaussian_mollifier(double x, double y) {
  return std::exp(-0.5 * (x * x + y * y)) / (2.0 * std::numbers::pi);
}

namespace {

// All compositions of k into l positive parts, in lexicographic order.
std::vector<std::vector<int>> compositions(int k, int l) {
  std::vector<std::vector<int>> out;
  std::vector<int> parts(static_cast<std::size_t>(l), 1);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == l - 1) {
      parts[static_cast<std::size_t>(pos)] = remaining;
      out.push_back(parts);
      return;
    }
    for (int p = 1; p <= remaining - (l - 1 - pos); ++p) {
      parts[static_cast<std::size_t>(pos)] = p;
      rec(pos + 1, remaining - p);
    }
  };
  rec(0, k);
  return out;
}

}  // namespace

SimplexFunction dynkin_B(int k, int l, SimplexFunction phi) {
  if (l < 1 || k < 1) throw DomainError("dynkin_B: need 1 <= l <= k");
  if (l > k) throw DomainError("dynkin_B: l must not exceed k");
  auto comps = compositions(k, l);
  return [k, l, comps = std::move(comps), phi = std::move(phi)](std::span<const double> s) {
    if (static_cast<int>(s.size()) != l) throw DomainError("dynkin_B: argument has the wrong length");
    std::vector<double> args(static_cast<std::size_t>(k));
    CompensatedSum acc;
    for (const auto& parts : comps) {
      std::size_t pos = 0;
      for (std::size_t j = 0; j < parts.size(); ++j) {
        for (int r = 0; r < parts[j]; ++r) args[pos++] = s[j];
      }
      acc.add(phi(args));
    }
    return acc.value();
  };
}

long long monotone_surjection_count(int k, int l) {
  if (l < 1 || l > k) return 0;
  long long c = 1;
  for (int i = 1; i <= l - 1; ++i) c = c * (k - l + i) / i;
  return c;
}

double dynkin_T(const Path& path, int k, double eps, const SimplexFunction& phi, const Mollifier& q,
                const SimplexQuadrature& quad) {
  if (path.dim() != 2) throw DomainError("dynkin_T: requires d = 2");
  if (k < 1) throw DomainError("dynkin_T: k must be >= 1");
  if (k > 3) throw UnsupportedRegime("dynkin_T: orders above 3 are not supported");
  if (!(eps > 0.0)) throw DomainError("dynkin_T: eps must be positive");
  if (quad.dim() != k) throw DomainError("dynkin_T: quadrature dimension must equal k");
  const double scale = 1.0 / (eps * eps);
  std::vector<double> prev(2), cur(2);
  CompensatedSum acc;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const auto t = quad.node(i);
    double value = quad.weight(i);
    path.at(t[0], prev);
    for (int j = 1; j < k && value != 0.0; ++j) {
      path.at(t[static_cast<std::size_t>(j)], cur);
      value *= scale * q((cur[0] - prev[0]) / eps, (cur[1] - prev[1]) / eps);
      prev.swap(cur);
    }
    if (value != 0.0) value *= phi(t);
    acc.add(value);
  }
  return acc.value();
}

double dynkin_renormalized(const Path& path, int k, double eps, const SimplexFunction& phi, const Mollifier& q,
                           const std::function<const SimplexQuadrature&(int)>& rule_for) {
  if (k < 1 || k > 3) throw UnsupportedRegime("dynkin_renormalized: k must lie in 1..3");
  const double factor = std::log(eps) / (2.0 * std::numbers::pi);
  CompensatedSum acc;
  for (int l = 1; l <= k; ++l) {
    const auto b = dynkin_B(k, l, phi);
    acc.add(std::pow(factor, k - l) * dynkin_T(path, l, eps, b, q, rule_for(l)));
  }
  return acc.value();
}

}  // namespace silt
