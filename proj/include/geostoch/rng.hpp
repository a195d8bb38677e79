#pragma once

#include <cmath>
#include <cstdint>

namespace geostoch {

// Counter-based randomness: every draw is a pure function of its key, so
// ensembles are reproducible independently of worker count or evaluation
// order. Keys are chained through the splitmix64 finalizer, which has full
// avalanche; two rounds keep correlations between neighbouring counters
// far below what the statistical tests here can see.

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t key_chain(std::uint64_t a, std::uint64_t b,
                               std::uint64_t c, std::uint64_t d) {
  return mix64(mix64(mix64(mix64(a) ^ b) ^ c) ^ d);
}

/// Uniform in (0,1), never exactly 0 or 1.
inline double uniform01(std::uint64_t key) {
  const std::uint64_t bits = mix64(key);
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}

/// Standard normal draw keyed by (seed, stream, counter, index).
/// Box-Muller on two stateless uniforms.
inline double normal_draw(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t counter, std::uint64_t index) {
  const double u1 = uniform01(key_chain(seed, stream, counter, 2 * index));
  const double u2 = uniform01(key_chain(seed, stream, counter, 2 * index + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace geostoch
