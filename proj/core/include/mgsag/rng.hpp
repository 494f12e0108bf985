// Seeded randomness helpers. Every stochastic component in the library draws
// from an mt19937_64 whose seed is derived from a single user-facing seed, so
// runs are reproducible bit for bit.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mgsag {

/// FNV-1a; used to derive stable per-key seeds (e.g. per-token OOV vectors).
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Derives an independent stream seed from a base seed and a stream index.
/// splitmix64 finalizer; avoids correlated mt19937 states from nearby seeds.
inline std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return std::mt19937_64(split_seed(seed, stream));
}

}  // namespace mgsag
