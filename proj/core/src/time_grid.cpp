#include "silt/time_grid.hpp"

#include <algorithm>
#include <cmath>

#include "silt/errors.hpp"

namespace silt {

TimeGrid::TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw DomainError("TimeGrid: need at least one cell");
  if (nodes_.front() != 0.0) throw DomainError("TimeGrid: first node must be 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) throw DomainError("TimeGrid: nodes must increase strictly");
  }
  if (nodes_.back() > 1.0) throw DomainError("TimeGrid: last node must not exceed 1");
  const double h = nodes_[1];
  uniform_ = true;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (std::abs((nodes_[i] - nodes_[i - 1]) - h) > 1e-14) uniform_ = false;
  }
}

TimeGrid TimeGrid::uniform(std::size_t n) {
  if (n == 0) throw DomainError("TimeGrid::uniform: n must be >= 1");
  std::vector<double> nodes(n + 1);
  for (std::size_t i = 0; i <= n; ++i) nodes[i] = static_cast<double>(i) / static_cast<double>(n);
  TimeGrid grid(std::move(nodes));
  grid.uniform_ = true;
  return grid;
}

std::size_t TimeGrid::cell_of(double t) const {
  auto it = std::upper_bound(nodes_.begin() + 1, nodes_.end(), t);
  if (it == nodes_.end()) return cells();
  return static_cast<std::size_t>(it - nodes_.begin());
}

}  // namespace silt
