#pragma once

#include <cmath>
#include <cstdint>

#include "innerclt/types.hpp"

namespace innerclt::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based word: depends only on (seed, stream, counter), never on call
// order or worker layout, so parallel sampling stays reproducible.
inline std::uint64_t counter_word(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) {
  const std::uint64_t h = splitmix64(seed ^ (0x8bb84b93962eacc9ULL * (stream + 1)));
  return splitmix64(h ^ (0x2545f4914f6cdd1dULL * (counter + 1)));
}

// Uniform draw in [0, 1) with 53 random bits.
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return static_cast<double>(counter_word(seed, stream, counter) >> 11) * 0x1.0p-53;
}

// Uniform point of the unit circle.
inline UnitComplex unit_point(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) {
  return UnitComplex::from_angle(kTwoPi * uniform01(seed, stream, counter));
}

// Circularly symmetric complex normal CN(0,1): E z = 0, E|z|^2 = 1.
// Consumes counters 2c and 2c+1.
inline Complex complex_normal(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) {
  const double u1 = uniform01(seed, stream, 2 * counter);
  const double u2 = uniform01(seed, stream, 2 * counter + 1);
  const double radius = std::sqrt(-std::log1p(-u1));  // |z|^2 ~ Exp(1)
  return std::polar(radius, kTwoPi * u2);
}

}  // namespace innerclt::rng
