#pragma once

#include <cstdint>
#include <random>

namespace polyfair {

using Rng = std::mt19937_64;

// Counter-based seed splitting: every consumer of randomness gets its own
// stream derived from the run seed and a fixed stream id, so no global RNG
// state exists and results do not depend on evaluation order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace streams {
inline constexpr std::uint64_t kSplit = 1;
inline constexpr std::uint64_t kInit = 2;
inline constexpr std::uint64_t kShuffle = 3;
inline constexpr std::uint64_t kPermute = 4;
inline constexpr std::uint64_t kMonteCarlo = 5;
}  // namespace streams

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace polyfair
