#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace esnc {

/// SplitMix64 output function (Steele, Lea, Flood 2014). Used to expand a
/// seed into generator state and as the integer hash for derived seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for an independent substream: mix64 chained over the base seed and
/// each key, e.g. derive_seed(base, cell, trial) for sweep cells.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) noexcept;

/// xoshiro256** 1.0 (Blackman & Vigna), state filled from the seed by four
/// SplitMix64 steps. Normal deviates use the Marsaglia polar method and
/// cache the second value of each pair. All state transitions are integer
/// only, so a seed yields the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept;
  /// Uniform on [-1, 1).
  double uniform_pm1() noexcept { return 2.0 * uniform() - 1.0; }
  double normal() noexcept;
  /// Uniform integer in [0, n), unbiased by rejection. n must be > 0.
  std::uint64_t below(std::uint64_t n) noexcept;

  template <class T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace esnc
