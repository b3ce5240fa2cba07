#pragma once
#include <cmath>
#include <cstdint>

namespace dph::rng {

// Counter-based generator: every draw is a pure function of (seed, a, b, c).
// Replays are exact for any evaluation order and any thread schedule.

inline uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline uint64_t keyed(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  uint64_t h = mix64(seed ^ 0x243F6A8885A308D3ULL);
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  h = mix64(h ^ c);
  return h;
}

inline double uniform01(uint64_t h) {
  // strictly inside (0,1) so log() below is safe
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

inline double normal(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
  const double u1 = uniform01(keyed(seed, a, b, 2 * c));
  const double u2 = uniform01(keyed(seed, a, b, 2 * c + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace dph::rng
