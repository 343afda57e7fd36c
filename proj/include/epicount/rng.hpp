#pragma once

#include <cstdint>
#include <random>

namespace epicount {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Independent stream for work item `index` under a master seed. The
/// splitting rule is fixed: engine seeded with splitmix64(seed ^
/// splitmix64(index + 1)).
inline std::mt19937_64 child_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(index + 1)));
}

}  // namespace epicount
