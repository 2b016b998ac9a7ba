// Deterministic synthetic learning-curve generation. Noise draws are
// derived from (seed, point index) with exactly two generator draws per
// point, so serial and partitioned generation produce identical output.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "scalelaw/core.hpp"
#include "scalelaw/model.hpp"
#include "scalelaw/rng.hpp"

namespace scalelaw {

/// Samples the data law at each size, `replicates` points per size, with
/// additive Gaussian noise of the given standard deviation clamped into
/// [0, 1]. noise_sd = 0 yields the exact law values.
inline std::vector<ObservationPoint> gen_curve(const DataLawParams& p,
                                               const std::vector<std::int64_t>& sizes,
                                               double noise_sd, std::uint64_t seed,
                                               int replicates = 1) {
  require_valid(p);
  if (sizes.empty()) throw Error("empty observation set");
  if (!(noise_sd >= 0.0)) throw Error("noise_sd must be nonnegative");
  if (replicates < 1) throw Error("replicates must be at least 1");

  std::vector<ObservationPoint> out;
  out.reserve(sizes.size() * static_cast<std::size_t>(replicates));
  std::uint64_t index = 0;
  for (std::int64_t n : sizes) {
    const double mean = eval_data_law(p, static_cast<double>(n));
    for (int r = 0; r < replicates; ++r, ++index) {
      double e = mean;
      if (noise_sd > 0.0) {
        rng::SplitMix64 g = rng::item_stream(seed, index, 2);
        e += noise_sd * g.next_gaussian();
      }
      out.push_back({n, std::nullopt, std::clamp(e, 0.0, 1.0), std::nullopt, 1});
    }
  }
  return out;
}

/// Samples the joint law on the Cartesian grid m_sizes x n_sizes
/// (m-major), optionally passed through the random-guess envelope, with
/// seeded noise as in gen_curve.
inline std::vector<ObservationPoint> gen_joint_grid(const JointLawParams& p,
                                                    const std::optional<EnvelopeParams>& envelope_params,
                                                    const std::vector<std::int64_t>& m_sizes,
                                                    const std::vector<std::int64_t>& n_sizes,
                                                    double noise_sd, std::uint64_t seed) {
  require_valid(p);
  if (envelope_params) require_valid(*envelope_params);
  if (m_sizes.empty() || n_sizes.empty()) throw Error("empty observation set");
  if (!(noise_sd >= 0.0)) throw Error("noise_sd must be nonnegative");

  std::vector<ObservationPoint> out;
  out.reserve(m_sizes.size() * n_sizes.size());
  std::uint64_t index = 0;
  for (std::int64_t m : m_sizes) {
    for (std::int64_t n : n_sizes) {
      double e = eval_joint_law(p, static_cast<double>(m), static_cast<double>(n));
      if (envelope_params) e = envelope(e, *envelope_params);
      if (noise_sd > 0.0) {
        rng::SplitMix64 g = rng::item_stream(seed, index, 2);
        e += noise_sd * g.next_gaussian();
      }
      out.push_back({n, m, std::clamp(e, 0.0, 1.0), std::nullopt, 1});
      ++index;
    }
  }
  return out;
}

}  // namespace scalelaw
