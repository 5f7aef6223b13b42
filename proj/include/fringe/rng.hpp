#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>

// Counter-based random numbers: every draw is a pure function of (seed,
// index), so generation is reproducible bit-for-bit regardless of evaluation
// order or thread schedule. The counter hash is the splitmix64 finalizer
// applied to seed + (index+1) * golden-gamma; Gaussians come from Box-Muller
// over consecutive counter pairs.
namespace fringe::rng {

constexpr std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform in [0, 1), 53-bit resolution.
constexpr double uniform_at(std::uint64_t seed, std::uint64_t index) {
  return static_cast<double>(mix(seed, index) >> 11) * 0x1.0p-53;
}

// Standard normal deviate for counter `index`. Indices 2p and 2p+1 share one
// Box-Muller pair (cosine and sine branch respectively).
inline double gaussian_at(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t pair = index >> 1;
  // u1 in (0, 1] so the log is finite.
  const double u1 = (static_cast<double>(mix(seed, 2 * pair) >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(mix(seed, 2 * pair + 1) >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  return (index & 1) ? r * std::sin(t) : r * std::cos(t);
}

}  // namespace fringe::rng
