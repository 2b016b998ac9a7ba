// Classification of observations into the three data-scaling regimes:
// close to random guessing, power-law decay, and the irreducible-error
// floor. Thresholds are conventions exposed as parameters, not constants
// of nature.
#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "scalelaw/core.hpp"
#include "scalelaw/fit.hpp"
#include "scalelaw/model.hpp"

namespace scalelaw {

enum class RegionLabel { SmallData, PowerLaw, IrreducibleError };

inline const char* to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::SmallData: return "small-data";
    case RegionLabel::PowerLaw: return "power-law";
    case RegionLabel::IrreducibleError: return "irreducible-error";
  }
  return "?";
}

inline constexpr double kDefaultTolGuess = 0.02;
inline constexpr double kDefaultTolFloor = 0.005;

/// Labels each point: SmallData when its measured error is within
/// tol_guess of the random-guess error eps0, IrreducibleError when the
/// fitted power term a * n^(-alpha) has decayed to tol_floor or below,
/// PowerLaw otherwise. The floor test uses the fitted law rather than the
/// raw error, which fluctuates around the asymptote.
inline std::vector<std::pair<ObservationPoint, RegionLabel>> classify_points(
    const std::vector<ObservationPoint>& points, const FitResult<DataLawParams>& fit,
    const EnvelopeParams& envelope, double tol_guess = kDefaultTolGuess,
    double tol_floor = kDefaultTolFloor) {
  require_valid(envelope);
  if (!fit.converged) throw Error("cannot classify without fit");
  require_valid(fit.params);
  const std::vector<ObservationPoint> pts = validate_points(points);

  std::vector<std::pair<ObservationPoint, RegionLabel>> labeled;
  labeled.reserve(pts.size());
  for (const ObservationPoint& p : pts) {
    RegionLabel label = RegionLabel::PowerLaw;
    const double power_term =
        fit.params.a * detail::decay(static_cast<double>(p.n), fit.params.alpha);
    if (p.error >= envelope.eps0 - tol_guess)
      label = RegionLabel::SmallData;
    else if (power_term <= tol_floor)
      label = RegionLabel::IrreducibleError;
    labeled.emplace_back(p, label);
  }
  return labeled;
}

struct RegionBoundaries {
  double n_enter_power_law = 1.0;     // smallest n no longer in the small-data region
  double n_enter_irreducible = 1.0;   // smallest n with power term at or below tol_floor
};

/// Inverse images of the classification thresholds under the fitted law.
/// When the tolerances leave no power-law window, the two boundaries
/// coincide.
inline RegionBoundaries region_boundaries(const DataLawParams& p, const EnvelopeParams& envelope,
                                          double tol_guess = kDefaultTolGuess,
                                          double tol_floor = kDefaultTolFloor) {
  require_valid(p);
  require_valid(envelope);
  const double guess_threshold = envelope.eps0 - tol_guess;
  if (guess_threshold <= p.c_inf)
    throw Error("law never exits small-data region under these tolerances");

  RegionBoundaries b;
  b.n_enter_power_law =
      (p.a + p.c_inf <= guess_threshold) ? 1.0 : invert_data_law(p, guess_threshold);
  b.n_enter_irreducible =
      (p.a <= tol_floor) ? 1.0 : std::exp(std::log(p.a / tol_floor) / p.alpha);
  b.n_enter_power_law = std::min(b.n_enter_power_law, b.n_enter_irreducible);
  return b;
}

}  // namespace scalelaw
