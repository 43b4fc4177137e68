#pragma once

#include <random>

#include "atv/grid.hpp"

namespace atv::test {

/// Grid with spacing exactly 1 (half_width = (n-1)/2).
inline GridSpec unit_grid(int n) { return GridSpec(n, (n - 1) / 2.0); }

inline ScalarField random_field(const GridSpec& g, std::uint64_t seed,
                                double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  ScalarField f(g);
  for (double& x : f.v) x = dist(rng);
  return f;
}

inline DualField random_dual(const GridSpec& g, std::uint64_t seed,
                             double amp = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amp, amp);
  DualField d(g);
  for (double& x : d.g1) x = dist(rng);
  for (double& x : d.g2) x = dist(rng);
  return d;
}

}  // namespace atv::test
