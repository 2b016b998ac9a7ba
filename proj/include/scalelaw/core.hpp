// Domain types shared by the fitting, classification, and I/O layers.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scalelaw {

/// Thrown on invalid input, domain violations, and numerical failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One measured point of a learning curve: test error at a given
/// training-set size (and optionally model size).
struct ObservationPoint {
  std::int64_t n = 0;                   // training examples, >= 1
  std::optional<std::int64_t> m;        // model parameter count, >= 1 when present
  double error = 0.0;                   // test error probability in [0, 1]
  std::optional<double> std_dev;        // spread over repeat runs, >= 0
  int replicates = 1;                   // how many runs the value aggregates

  bool operator==(const ObservationPoint&) const = default;
};

/// Parameters of the data-scaling law  eps(n) = a * n^(-alpha) + c_inf.
struct DataLawParams {
  double a = 0.0;        // amplitude, > 0
  double alpha = 0.0;    // decay rate, > 0
  double c_inf = 0.0;    // irreducible error, >= 0

  bool operator==(const DataLawParams&) const = default;
};

/// Parameters of the joint model/data law
/// eps(m, n) = a * n^(-alpha) + b * m^(-beta) + c_inf.
struct JointLawParams {
  double a = 0.0;
  double alpha = 0.0;
  double b = 0.0;
  double beta = 0.0;
  double c_inf = 0.0;

  bool operator==(const JointLawParams&) const = default;
};

/// Random-guess envelope parameters: eps0 is the guessing error
/// (1/2 for balanced binary classification), eta the transition scale.
struct EnvelopeParams {
  double eps0 = 0.5;   // in (0, 1]
  double eta = 0.0;    // > 0

  bool operator==(const EnvelopeParams&) const = default;
};

/// Outcome of a least-squares fit.
template <class Params>
struct FitResult {
  Params params{};
  double sse = 0.0;                 // sum of squared residuals
  double mse = 0.0;                 // sse / number of points
  int iterations = 0;               // iterations of the winning start
  bool converged = false;
  std::vector<double> residuals;    // model - observed, one per point, sorted-by-n order
  int start_index = 0;              // which multi-start attempt won (0 = supplied init)
};

inline void require_valid(const DataLawParams& p) {
  if (!(p.a > 0.0)) throw Error("data-law amplitude a must be positive");
  if (!(p.alpha > 0.0)) throw Error("data-law decay rate alpha must be positive");
  if (!(p.c_inf >= 0.0)) throw Error("irreducible error c_inf must be nonnegative");
}

inline void require_valid(const JointLawParams& p) {
  if (!(p.a > 0.0) || !(p.b > 0.0)) throw Error("joint-law amplitudes a, b must be positive");
  if (!(p.alpha > 0.0) || !(p.beta > 0.0)) throw Error("joint-law decay rates alpha, beta must be positive");
  if (!(p.c_inf >= 0.0)) throw Error("irreducible error c_inf must be nonnegative");
}

inline void require_valid(const EnvelopeParams& e) {
  if (!(e.eps0 > 0.0 && e.eps0 <= 1.0)) throw Error("envelope eps0 must lie in (0, 1]");
  if (!(e.eta > 0.0)) throw Error("envelope eta must be positive");
}

/// error = 1 - accuracy. Exact involution with accuracy_from_error on
/// the canonical [0, 1] grid.
inline double error_from_accuracy(double acc) {
  if (!(acc >= 0.0 && acc <= 1.0)) throw Error("accuracy out of range [0, 1]");
  return 1.0 - acc;
}

inline double accuracy_from_error(double err) {
  if (!(err >= 0.0 && err <= 1.0)) throw Error("error out of range [0, 1]");
  return 1.0 - err;
}

/// Checks invariants of every point and returns the set sorted ascending
/// by n. Duplicate n values are allowed (replicate measurements). Sorting
/// is stable, so validating an already validated list is the identity.
inline std::vector<ObservationPoint> validate_points(std::vector<ObservationPoint> points) {
  if (points.empty()) throw Error("empty observation set");
  for (const ObservationPoint& p : points) {
    if (p.n < 1) throw Error("dataset size n must be at least 1");
    if (p.m && *p.m < 1) throw Error("model size m must be at least 1");
    if (!(p.error >= 0.0 && p.error <= 1.0)) throw Error("error out of range [0, 1]");
    if (p.std_dev && !(*p.std_dev >= 0.0)) throw Error("std deviation must be nonnegative");
    if (p.replicates < 1) throw Error("replicates must be at least 1");
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const ObservationPoint& x, const ObservationPoint& y) { return x.n < y.n; });
  return points;
}

}  // namespace scalelaw
