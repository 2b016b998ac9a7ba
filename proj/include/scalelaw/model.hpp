// Closed-form evaluation of the scaling laws: forward evaluation, the
// random-guess envelope, analytic inversion, and analytic partials.
#pragma once

#include <cmath>

#include "scalelaw/core.hpp"

namespace scalelaw {

namespace detail {

// n^(-alpha) computed as exp(-alpha * ln n) for uniform accuracy over
// n in [1, 1e12] and non-integer exponents.
inline double decay(double n, double alpha) { return std::exp(-alpha * std::log(n)); }

}  // namespace detail

/// eps(n) = a * n^(-alpha) + c_inf. Strictly decreasing in n, with
/// limit c_inf as n grows.
inline double eval_data_law(const DataLawParams& p, double n) {
  require_valid(p);
  if (!(n >= 1.0)) throw Error("dataset size n must be at least 1");
  return p.a * detail::decay(n, p.alpha) + p.c_inf;
}

/// eps(m, n) = a * n^(-alpha) + b * m^(-beta) + c_inf, strictly
/// decreasing in m and in n separately.
inline double eval_joint_law(const JointLawParams& p, double m, double n) {
  require_valid(p);
  if (!(m >= 1.0)) throw Error("model size m must be at least 1");
  if (!(n >= 1.0)) throw Error("dataset size n must be at least 1");
  return p.a * detail::decay(n, p.alpha) + p.b * detail::decay(m, p.beta) + p.c_inf;
}

/// Envelope transform eps0 * x / sqrt(x^2 + eta^2), the modulus of the
/// complex ratio x / (x - i*eta) scaled by eps0. Maps [0, inf) into
/// [0, eps0), monotone nondecreasing.
inline double envelope(double eps_tilde, const EnvelopeParams& e) {
  require_valid(e);
  if (!(eps_tilde >= 0.0)) throw Error("envelope input must be nonnegative");
  if (eps_tilde == 0.0) return 0.0;
  return e.eps0 * eps_tilde / std::hypot(eps_tilde, e.eta);
}

/// Joint law passed through the envelope; bounded above by eps0.
inline double eval_enveloped_joint(const JointLawParams& p, const EnvelopeParams& e,
                                   double m, double n) {
  return envelope(eval_joint_law(p, m, n), e);
}

/// Solves eps(n) = target_error for n:  n = ((target - c_inf) / a)^(-1/alpha).
/// Valid targets lie in (c_inf, a + c_inf]; the asymptote itself is
/// unreachable.
inline double invert_data_law(const DataLawParams& p, double target_error) {
  require_valid(p);
  if (!(target_error > p.c_inf))
    throw Error("target unreachable below irreducible error c_inf");
  if (target_error > p.a + p.c_inf)
    throw Error("target above n=1 error (a + c_inf)");
  const double ratio = (target_error - p.c_inf) / p.a;
  return std::exp(-std::log(ratio) / p.alpha);
}

/// Partial derivatives of the data law at (p, n).
struct DataLawGradient {
  double d_a = 0.0;      // n^(-alpha)
  double d_alpha = 0.0;  // -a * ln(n) * n^(-alpha)
  double d_c_inf = 0.0;  // 1
};

inline DataLawGradient data_law_jacobian(const DataLawParams& p, double n) {
  require_valid(p);
  if (!(n >= 1.0)) throw Error("dataset size n must be at least 1");
  const double t = detail::decay(n, p.alpha);
  return {t, -p.a * std::log(n) * t, 1.0};
}

/// Partial derivatives of the joint law at (p, m, n).
struct JointLawGradient {
  double d_a = 0.0;
  double d_alpha = 0.0;
  double d_b = 0.0;
  double d_beta = 0.0;
  double d_c_inf = 0.0;
};

inline JointLawGradient joint_law_jacobian(const JointLawParams& p, double m, double n) {
  require_valid(p);
  if (!(m >= 1.0)) throw Error("model size m must be at least 1");
  if (!(n >= 1.0)) throw Error("dataset size n must be at least 1");
  const double tn = detail::decay(n, p.alpha);
  const double tm = detail::decay(m, p.beta);
  return {tn, -p.a * std::log(n) * tn, tm, -p.b * std::log(m) * tm, 1.0};
}

}  // namespace scalelaw
