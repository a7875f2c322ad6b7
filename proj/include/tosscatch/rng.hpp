#pragma once

#include <cstdint>

namespace tosscatch {

/// splitmix64 generator (Steele, Lea, Flood). Tiny state, portable output.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform double in [0,1) from the top 53 bits of the next draw.
  constexpr double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// The output finalizer, usable as a standalone 64-bit hash.
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seed for grid cell (i, j): one splitmix64 step from base ^ (i * 2^32 + j).
/// Independent of the order in which cells are visited.
constexpr std::uint64_t cell_seed(std::uint64_t base_seed, std::uint32_t i, std::uint32_t j) {
  SplitMix64 rng(base_seed ^ ((static_cast<std::uint64_t>(i) << 32) | j));
  return rng.next();
}

}  // namespace tosscatch
