#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace pureg {

// std::mt19937_64 has a standard-mandated output sequence, so seeded runs are
// reproducible across compilers. The distribution helpers below are hand-rolled
// because std::uniform_real_distribution and friends are implementation
// defined and would break cross-toolchain determinism.
using Rng = std::mt19937_64;

// Uniform draw in [0, 1) with 53 random mantissa bits.
inline double uniform01(Rng& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

// Standard normal via Box-Muller (one draw per call, second value discarded
// to keep the consumption pattern obvious).
inline double normal(Rng& g) {
  double u1 = 1.0 - uniform01(g);  // (0, 1], keeps the log finite
  double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Fisher-Yates permutation of {0, ..., n-1}.
inline std::vector<int> shuffled_indices(int n, Rng& g) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    auto j = static_cast<int>(g() % static_cast<std::uint64_t>(i + 1));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  return idx;
}

}  // namespace pureg
