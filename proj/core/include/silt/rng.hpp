#pragma once

#include <array>
#include <cstdint>

namespace silt {

/// Counter-based generator (Philox4x32-10) keyed by a master seed and a
/// stream id. Two generators with the same (seed, stream) produce the same
/// sequence; distinct streams are statistically independent, so Monte Carlo
/// replicas can be evaluated in any order or on any worker.
class Philox {
 public:
  using result_type = std::uint32_t;

  Philox(std::uint64_t seed, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return 0xffffffffu; }

  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int position_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// The Philox4x32-10 bijection on a single 128-bit counter block.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

}  // namespace silt
