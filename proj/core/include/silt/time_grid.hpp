#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace silt {

/// Ordered partition 0 = t_0 < t_1 < ... < t_n <= 1.
class TimeGrid {
 public:
  /// Throws DomainError unless the nodes start at 0, increase strictly and
  /// end at or below 1.
  explicit TimeGrid(std::vector<double> nodes);

  /// n equal cells of width 1/n.
  static TimeGrid uniform(std::size_t n);

  /// Number of cells n.
  std::size_t cells() const noexcept { return nodes_.size() - 1; }
  double operator[](std::size_t i) const { return nodes_[i]; }
  double width(std::size_t j) const { return nodes_[j] - nodes_[j - 1]; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  bool is_uniform() const noexcept { return uniform_; }

  /// Index j of the cell [t_{j-1}, t_j) containing t, 1-based; the last
  /// cell also takes its right end.
  std::size_t cell_of(double t) const;

 private:
  std::vector<double> nodes_;
  bool uniform_ = false;
};

}  // namespace silt
