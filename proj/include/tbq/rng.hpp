#pragma once

#include <cstdint>
#include <random>

// Seed derivation for reproducible, block-parallel sampling. Substreams are
// keyed by (base seed, role tag, indices); counter-style draws give random
// access without materializing sequences.

namespace tbq::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t tag, std::uint64_t a = 0,
                            std::uint64_t b = 0) {
  std::uint64_t h = splitmix64(seed ^ (tag * 0xd1342543de82ef95ULL));
  h = splitmix64(h ^ (a * 0x9e3779b97f4a7c15ULL));
  h = splitmix64(h ^ (b * 0xc2b2ae3d27d4eb4fULL));
  return h;
}

inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t a = 0,
                              std::uint64_t b = 0) {
  return std::mt19937_64(derive(seed, tag, a, b));
}

/// Uniform in [0, 1) addressed by counter; no state carried.
inline double uniform_at(std::uint64_t seed, std::uint64_t tag, std::uint64_t a,
                         std::uint64_t b) {
  return static_cast<double>(derive(seed, tag, a, b) >> 11) * 0x1.0p-53;
}

}  // namespace tbq::rng
