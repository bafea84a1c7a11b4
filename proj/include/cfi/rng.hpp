#pragma once

#include <cstdint>

namespace cfi {

/// Derives a stream of decorrelated 64-bit seeds from one master seed
/// (splitmix64 finalizer). Used wherever one user-facing seed has to fan
/// out into independent generators deterministically.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace cfi
