// Seeded, portable random generation. The generator (SplitMix64) and the
// normal transform (Box-Muller, cosine branch) are fixed so that fixtures
// recorded from this code can be reproduced bit-identically elsewhere.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace scalelaw::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// SplitMix64: state advances by the golden gamma, output is the
/// finalizer mix of the new state.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    state += kGolden;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in (0, 1]: top 53 bits, shifted off zero.
  double next_unit() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (cosine branch); consumes exactly
  /// two draws.
  double next_gaussian() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
};

/// Finalizer-only mix, used to derive independent substreams.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stream for the k-th item under a master seed. Item k's stream starts
/// at the master state advanced k * draws_per_item steps, so serial
/// generation with one stream and per-item generation agree draw for
/// draw.
inline SplitMix64 item_stream(std::uint64_t seed, std::uint64_t item_index,
                              std::uint64_t draws_per_item) {
  return SplitMix64{seed + item_index * draws_per_item * kGolden};
}

/// Decorrelated substream (for multi-start draws and similar uses where
/// lockstep with the main stream is not wanted).
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t stream_id) {
  return SplitMix64{mix64(seed ^ mix64(stream_id + kGolden))};
}

}  // namespace scalelaw::rng
