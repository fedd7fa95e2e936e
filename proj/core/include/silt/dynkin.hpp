#pragma once

#include <functional>
#include <span>

#include "silt/path.hpp"
#include "silt/quadrature.hpp"

namespace silt {

/// A function on the ordered simplex Delta_k, called with sorted k-tuples.
using SimplexFunction = std::function<double(std::span<const double>)>;

/// Base mollifier q on R^2; q_eps(x) = eps^{-2} q(x / eps).
using Mollifier = std::function<double(double, double)>;

/// Standard Gaussian density on R^2, so that q_eps = p^2_{eps^2}.
double gaussian_mollifier(double x, double y);

/// B_k^l phi: (s_1..s_l) -> sum over monotone surjections sigma of
/// phi(s_sigma(1), ..., s_sigma(k)); the surjections are the compositions of
/// k into l positive parts.
SimplexFunction dynkin_B(int k, int l, SimplexFunction phi);

/// Number of monotone surjections {1..k} -> {1..l}, i.e. C(k-1, l-1).
long long monotone_surjection_count(int k, int l);

/// T_{k,eps}^phi = \int_{Delta_k} prod_{i<k} q_eps(w(t_{i+1}) - w(t_i)) phi(t) dt
/// over the rule `quad` on Delta_k. k = 1 has an empty product. d must be 2,
/// and k <= 3.
double dynkin_T(const Path& path, int k, double eps, const SimplexFunction& phi, const Mollifier& q,
                const SimplexQuadrature& quad);

/// sum_{l=1}^{k} (log(eps) / 2 pi)^{k-l} T_{l,eps}^{B_k^l phi}, with the
/// Delta_l rules supplied by `rule_for(l)`.
double dynkin_renormalized(const Path& path, int k, double eps, const SimplexFunction& phi, const Mollifier& q,
                           const std::function<const SimplexQuadrature&(int)>& rule_for);

}  // namespace silt
