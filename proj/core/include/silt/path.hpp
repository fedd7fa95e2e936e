#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace silt {

/// A d-dimensional trajectory sampled on the uniform grid k/m, k = 0..m,
/// started at the origin. Values are stored row-major, one row per node.
class Path {
 public:
  Path(std::size_t m, int d, std::vector<double> values, std::uint64_t seed = 0);

  std::size_t steps() const noexcept { return m_; }
  int dim() const noexcept { return d_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double time(std::size_t k) const noexcept { return static_cast<double>(k) / static_cast<double>(m_); }
  std::span<const double> node(std::size_t k) const {
    return {values_.data() + k * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  std::span<const double> values() const noexcept { return values_; }

  /// Linear interpolation between grid nodes; t is clamped to [0, 1].
  void at(double t, std::span<double> out) const;

  /// w(t) - w(s) by linear interpolation.
  void increment(double s, double t, std::span<double> out) const;

  /// max_{k} |w_i(t_k)| for every coordinate i; the running maximum of the
  /// interpolated path is attained on a node.
  std::vector<double> coordinate_max_abs() const;

  bool operator==(const Path& other) const = default;

 private:
  std::size_t m_;
  int d_;
  std::vector<double> values_;
  std::uint64_t seed_;
};

/// Cumulative sums of i.i.d. N(0, 1/m) increments per coordinate drawn from
/// the Philox stream (seed, stream).
Path sample_path(std::size_t m, int d, std::uint64_t seed, std::uint64_t stream = 0);

/// CSV with header "t,w1,...,wd" preceded by a "# seed=" comment line.
void write_path_csv(std::ostream& os, const Path& path);
Path read_path_csv(std::istream& is);

/// Little-endian binary cache: "SILTPATH1", u32 d, u64 m, u64 seed,
/// f64 t[m+1], then f64 values row-major.
void write_path_binary(std::ostream& os, const Path& path);
Path read_path_binary(std::istream& is);

}  // namespace silt
