#pragma once

#include <cstdint>
#include <vector>

#include "dyndist/distribution.hpp"

namespace dyndist {

/// Deterministic uniform variates built from raw mt19937_64 output, so the
/// stream does not depend on the standard library's distribution
/// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  /// Uniform in [0, 1).
  double unit();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_[4];
  std::uint64_t next_bits();
};

/// Default battery seed used across the test suites.
inline constexpr std::uint64_t kBatterySeed = 0x5EED;

/// Reproducible family of compactly supported test functions: piecewise
/// cubics built from Hermite data, each containing every requested atom
/// location in its support. Odd-indexed members jump at the atom locations
/// and carry smooth cubic transition profiles there; even-indexed members
/// stay continuous (and profile-free), so battery[0], battery[2], ... form
/// the "continuous battery".
std::vector<TestFn> make_battery(Interval interval,
                                 const std::vector<double>& atom_locations,
                                 std::uint64_t seed, int count = 32);

/// The even-indexed (continuous, profile-free) members.
std::vector<TestFn> continuous_battery(const std::vector<TestFn>& battery);

/// Random piecewise-cubic function of bounded variation with smooth random
/// transition profiles at the given jump locations. Used by the randomized
/// algebra suites.
DynamicFn random_smooth_bv(Interval interval,
                           const std::vector<double>& jump_locations,
                           Rng& rng);

}  // namespace dyndist
