#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace hhc::rng {

// All randomized code in the project draws through these helpers instead of
// <random> distributions: the mt19937_64 bit stream is pinned by the standard
// but distribution output is implementation-defined, and run reports must be
// reproducible across toolchains.

using Engine = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [lo, hi] via rejection sampling.
inline std::int64_t uniform_int(Engine& eng, std::int64_t lo, std::int64_t hi) {
  assert(lo <= hi);
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(eng());  // full 64-bit range
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t draw;
  do {
    draw = eng();
  } while (draw >= limit);
  return lo + static_cast<std::int64_t>(draw % span);
}

/// Standard normal via Box-Muller (the sine partner is discarded).
inline double normal(Engine& eng, double mean = 0.0, double sd = 1.0) {
  double u1 = uniform01(eng);
  while (u1 <= 0.0) u1 = uniform01(eng);
  const double u2 = uniform01(eng);
  const double z = std::sqrt(-2.0 * std::log(u1)) *
                   std::cos(2.0 * std::numbers::pi * u2);
  return mean + sd * z;
}

/// Fisher-Yates shuffle using uniform_int above.
template <typename T>
void shuffle(Engine& eng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(
        uniform_int(eng, 0, static_cast<std::int64_t>(i) - 1));
    std::swap(v[i - 1], v[j]);
  }
}

/// First `count` elements of a seeded shuffle of {0, ..., n-1}.
inline std::vector<std::size_t> sample_indices(Engine& eng, std::size_t n,
                                               std::size_t count) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  shuffle(eng, idx);
  if (count < n) idx.resize(count);
  return idx;
}

}  // namespace hhc::rng
