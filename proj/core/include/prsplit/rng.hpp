#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace prsplit {

/// Deterministic seeded random stream built on the splitmix64 mixer.
///
/// A (seed, stream) pair selects an independent sequence, so a generator can
/// hand out substreams (matrix entries, weights, right-hand side) that do not
/// interleave.  The sequence depends only on (seed, stream) and the call
/// order, never on platform RNG library details.
class SplitRng {
 public:
  SplitRng(std::uint64_t seed, std::uint64_t stream)
      : state_(seed + stream * 0xD2B74407B1CE6E93ull) {
    // Burn one output so trivially related (seed, stream) pairs decorrelate.
    next_u64();
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform draw in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform draw in (0, 1); exact zeros are rejected and redrawn.
  double uniform_open() {
    double v = uniform();
    while (v == 0.0) v = uniform();
    return v;
  }

  /// Standard normal via Box-Muller (cosine branch, two uniforms per draw).
  double gaussian() {
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double t = 2.0 * std::numbers::pi * uniform();
    return r * std::cos(t);
  }

 private:
  std::uint64_t state_;
};

/// Stable derived seed for trial `index` of substream `bucket`.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t bucket,
                                 std::uint64_t index) {
  SplitRng rng(base, bucket * 0x100000001B3ull + index);
  return rng.next_u64();
}

}  // namespace prsplit
