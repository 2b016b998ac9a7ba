// Constrained nonlinear least squares for the scaling laws.
//
// The fitter is Levenberg-Marquardt with analytic Jacobians and box
// constraints enforced by projecting each candidate step onto the feasible
// region (a > 0, alpha > 0, c_inf >= 0). Damping uses the Marquardt
// diagonal scaling, lambda starts at 1e-3 and moves by factors of 10.
// Iteration stops when the mean squared error reaches mse_stop, when the
// relative parameter step falls below step_stop, or at max_iterations;
// only the first two count as convergence. Optional multi-start draws
// extra initial points from a seeded generator, so results are
// deterministic for a given (points, options) pair.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "scalelaw/core.hpp"
#include "scalelaw/model.hpp"
#include "scalelaw/rng.hpp"

namespace scalelaw {

struct FitOptions {
  DataLawParams init{0.5, 0.001, 0.01};
  bool fix_c_inf_to_zero = false;
  double mse_stop = 1e-6;        // stop once sse / n_points <= mse_stop
  double step_stop = 1e-12;      // stop once the relative parameter step is this small
  int max_iterations = 10000;
  int multi_start = 0;           // extra seeded starting points beyond init
  std::uint64_t seed = 0;
  bool weight_by_std = false;    // 1/std^2 residual weighting where std is present
  JointLawParams joint_init{0.5, 0.001, 0.5, 0.001, 0.01};
};

namespace detail {

inline constexpr double kParamFloor = 1e-12;   // projection floor for strictly positive params
inline constexpr double kLambdaInit = 1e-3;
inline constexpr double kLambdaMin = 1e-12;
inline constexpr double kLambdaMax = 1e15;

inline void check_options(const FitOptions& opts) {
  if (!(opts.mse_stop > 0.0) || !(opts.step_stop > 0.0))
    throw Error("fit tolerances must be positive");
  if (opts.max_iterations < 1) throw Error("max_iterations must be at least 1");
  if (opts.multi_start < 0) throw Error("multi_start must be nonnegative");
}

// Gaussian elimination with partial pivoting on a k x k system, in place.
// Returns false when a pivot vanishes.
inline bool solve_linear(std::vector<double>& a, std::vector<double>& b, int k) {
  for (int col = 0; col < k; ++col) {
    int pivot = col;
    for (int row = col + 1; row < k; ++row)
      if (std::fabs(a[row * k + col]) > std::fabs(a[pivot * k + col])) pivot = row;
    if (a[pivot * k + col] == 0.0 || !std::isfinite(a[pivot * k + col])) return false;
    if (pivot != col) {
      for (int j = col; j < k; ++j) std::swap(a[pivot * k + j], a[col * k + j]);
      std::swap(b[pivot], b[col]);
    }
    const double inv = 1.0 / a[col * k + col];
    for (int row = col + 1; row < k; ++row) {
      const double f = a[row * k + col] * inv;
      if (f == 0.0) continue;
      for (int j = col; j < k; ++j) a[row * k + j] -= f * a[col * k + j];
      b[row] -= f * b[col];
    }
  }
  for (int row = k - 1; row >= 0; --row) {
    double s = b[row];
    for (int j = row + 1; j < k; ++j) s -= a[row * k + j] * b[j];
    b[row] = s / a[row * k + row];
  }
  return true;
}

struct LmOutcome {
  std::vector<double> params;
  std::vector<double> residuals;
  double sse = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

// Core damped-least-squares loop. residual_at fills r (model - observed),
// jacobian_at fills j row-major (n_points x n_params).
template <class ResidualFn, class JacobianFn>
LmOutcome levenberg_marquardt(std::vector<double> p, const std::vector<double>& lower,
                              ResidualFn&& residual_at, JacobianFn&& jacobian_at,
                              int n_points, const FitOptions& opts) {
  const int k = static_cast<int>(p.size());
  std::vector<double> r(n_points), rc(n_points), jac(n_points * k);
  std::vector<double> h(k * k), g(k), cand(k);

  auto sum_sq = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
  };

  residual_at(p, r);
  double sse = sum_sq(r);
  if (!std::isfinite(sse)) throw Error("numerical failure: non-finite residual at initial point");

  LmOutcome out;
  double lambda = kLambdaInit;
  int it = 0;
  while (it < opts.max_iterations) {
    ++it;
    jacobian_at(p, jac);
    // g = J^T r, h = J^T J with Marquardt-scaled damping on the diagonal
    for (int c = 0; c < k; ++c) {
      double gc = 0.0;
      for (int i = 0; i < n_points; ++i) gc += jac[i * k + c] * r[i];
      g[c] = -gc;
    }
    for (int c = 0; c < k; ++c)
      for (int d = c; d < k; ++d) {
        double s = 0.0;
        for (int i = 0; i < n_points; ++i) s += jac[i * k + c] * jac[i * k + d];
        h[c * k + d] = s;
        h[d * k + c] = s;
      }
    std::vector<double> hd = h;
    for (int c = 0; c < k; ++c) {
      const double diag = std::max(h[c * k + c], 1e-30);
      hd[c * k + c] = h[c * k + c] + lambda * diag;
    }
    std::vector<double> step = g;
    if (!solve_linear(hd, step, k)) {
      lambda = std::min(lambda * 10.0, kLambdaMax);
      continue;
    }

    double pnorm = 0.0, dnorm = 0.0;
    for (int c = 0; c < k; ++c) {
      cand[c] = std::max(p[c] + step[c], lower[c]);
      pnorm += p[c] * p[c];
      const double d = cand[c] - p[c];
      dnorm += d * d;
    }
    const double rel_step = std::sqrt(dnorm) / (std::sqrt(pnorm) + 1e-300);

    residual_at(cand, rc);
    const double sse_cand = sum_sq(rc);
    if (std::isfinite(sse_cand) && sse_cand < sse) {
      p = cand;
      r = rc;
      sse = sse_cand;
      lambda = std::max(lambda / 10.0, kLambdaMin);
      if (sse / n_points <= opts.mse_stop || rel_step <= opts.step_stop) {
        out.converged = true;
        break;
      }
    } else {
      lambda = std::min(lambda * 10.0, kLambdaMax);
      if (rel_step <= opts.step_stop) {
        out.converged = true;
        break;
      }
    }
  }

  out.params = std::move(p);
  out.residuals = std::move(r);
  out.sse = sse;
  out.iterations = it;
  return out;
}

inline std::vector<double> point_weights(const std::vector<ObservationPoint>& pts,
                                         bool weight_by_std) {
  std::vector<double> w(pts.size(), 1.0);
  if (weight_by_std)
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (pts[i].std_dev && *pts[i].std_dev > 0.0) w[i] = 1.0 / *pts[i].std_dev;
  return w;
}

inline double min_error(const std::vector<ObservationPoint>& pts) {
  double lo = 1.0;
  for (const ObservationPoint& p : pts) lo = std::min(lo, p.error);
  return lo;
}

}  // namespace detail

/// Sum of squared residuals of the data law against the observations.
inline double sse(const DataLawParams& p, const std::vector<ObservationPoint>& points) {
  double s = 0.0;
  for (const ObservationPoint& pt : points) {
    const double d = eval_data_law(p, static_cast<double>(pt.n)) - pt.error;
    s += d * d;
  }
  return s;
}

/// Sum of squared residuals of the joint law; every point must carry m.
inline double sse(const JointLawParams& p, const std::vector<ObservationPoint>& points) {
  double s = 0.0;
  for (const ObservationPoint& pt : points) {
    if (!pt.m) throw Error("joint law requires model size m on every point");
    const double d =
        eval_joint_law(p, static_cast<double>(*pt.m), static_cast<double>(pt.n)) - pt.error;
    s += d * d;
  }
  return s;
}

/// Fits eps(n) = a * n^(-alpha) + c_inf by constrained least squares.
/// Needs at least one more point than free parameters. Deterministic for
/// fixed (points, opts); multi-start attempts are seeded, the winner is
/// the lowest SSE with ties broken by start index.
inline FitResult<DataLawParams> fit_data_law(const std::vector<ObservationPoint>& points,
                                             const FitOptions& opts = {}) {
  detail::check_options(opts);
  require_valid(opts.init);
  const std::vector<ObservationPoint> pts = validate_points(points);
  const int n_params = opts.fix_c_inf_to_zero ? 2 : 3;
  const int n_points = static_cast<int>(pts.size());
  if (n_points < n_params + 1) throw Error("underdetermined fit: need more points than parameters");

  const std::vector<double> w = detail::point_weights(pts, opts.weight_by_std);
  std::vector<double> log_n(pts.size()), err(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    log_n[i] = std::log(static_cast<double>(pts[i].n));
    err[i] = pts[i].error;
  }

  const bool fixed = opts.fix_c_inf_to_zero;
  auto residual_at = [&](const std::vector<double>& q, std::vector<double>& r) {
    const double c = fixed ? 0.0 : q[2];
    for (int i = 0; i < n_points; ++i)
      r[i] = (q[0] * std::exp(-q[1] * log_n[i]) + c - err[i]) * w[i];
  };
  auto jacobian_at = [&](const std::vector<double>& q, std::vector<double>& j) {
    for (int i = 0; i < n_points; ++i) {
      const double t = std::exp(-q[1] * log_n[i]);
      j[i * n_params + 0] = t * w[i];
      j[i * n_params + 1] = -q[0] * log_n[i] * t * w[i];
      if (!fixed) j[i * n_params + 2] = w[i];
    }
  };

  const std::vector<double> lower =
      fixed ? std::vector<double>{detail::kParamFloor, detail::kParamFloor}
            : std::vector<double>{detail::kParamFloor, detail::kParamFloor, 0.0};
  const double err_floor = detail::min_error(pts);

  detail::LmOutcome best;
  int best_start = 0;
  for (int s = 0; s <= opts.multi_start; ++s) {
    std::vector<double> start;
    if (s == 0) {
      start = fixed ? std::vector<double>{opts.init.a, opts.init.alpha}
                    : std::vector<double>{opts.init.a, opts.init.alpha, opts.init.c_inf};
    } else {
      // log-uniform a in [1e-2, 1], alpha in [1e-3, 1]; c_inf uniform in
      // [0, min observed error]
      rng::SplitMix64 g = rng::substream(opts.seed, static_cast<std::uint64_t>(s));
      const double a0 = std::pow(10.0, -2.0 + 2.0 * g.next_unit());
      const double al0 = std::pow(10.0, -3.0 + 3.0 * g.next_unit());
      const double c0 = err_floor * g.next_unit();
      start = fixed ? std::vector<double>{a0, al0} : std::vector<double>{a0, al0, c0};
    }
    detail::LmOutcome run = detail::levenberg_marquardt(std::move(start), lower, residual_at,
                                                        jacobian_at, n_points, opts);
    if (run.sse < best.sse || best.params.empty()) {
      best = std::move(run);
      best_start = s;
    }
  }

  FitResult<DataLawParams> result;
  result.params = {best.params[0], best.params[1], fixed ? 0.0 : best.params[2]};
  result.sse = best.sse;
  result.mse = best.sse / n_points;
  result.iterations = best.iterations;
  result.converged = best.converged;
  result.residuals = std::move(best.residuals);
  result.start_index = best_start;
  return result;
}

/// Fits the joint law eps(m, n) = a n^(-alpha) + b m^(-beta) + c_inf.
/// Requires at least 6 points spanning two distinct m and two distinct n;
/// otherwise the design is rank deficient.
inline FitResult<JointLawParams> fit_joint_law(const std::vector<ObservationPoint>& points,
                                               const FitOptions& opts = {}) {
  detail::check_options(opts);
  require_valid(opts.joint_init);
  const std::vector<ObservationPoint> pts = validate_points(points);
  const int n_points = static_cast<int>(pts.size());
  if (n_points < 6) throw Error("underdetermined fit: need more points than parameters");

  bool m_varies = false, n_varies = false;
  for (const ObservationPoint& p : pts) {
    if (!p.m) throw Error("joint law requires model size m on every point");
    if (*p.m != *pts.front().m) m_varies = true;
    if (p.n != pts.front().n) n_varies = true;
  }
  if (!m_varies || !n_varies)
    throw Error("degenerate joint design: need at least two distinct m and two distinct n");

  const std::vector<double> w = detail::point_weights(pts, opts.weight_by_std);
  std::vector<double> log_n(pts.size()), log_m(pts.size()), err(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    log_n[i] = std::log(static_cast<double>(pts[i].n));
    log_m[i] = std::log(static_cast<double>(*pts[i].m));
    err[i] = pts[i].error;
  }

  auto residual_at = [&](const std::vector<double>& q, std::vector<double>& r) {
    for (int i = 0; i < n_points; ++i)
      r[i] = (q[0] * std::exp(-q[1] * log_n[i]) + q[2] * std::exp(-q[3] * log_m[i]) + q[4] -
              err[i]) *
             w[i];
  };
  auto jacobian_at = [&](const std::vector<double>& q, std::vector<double>& j) {
    for (int i = 0; i < n_points; ++i) {
      const double tn = std::exp(-q[1] * log_n[i]);
      const double tm = std::exp(-q[3] * log_m[i]);
      j[i * 5 + 0] = tn * w[i];
      j[i * 5 + 1] = -q[0] * log_n[i] * tn * w[i];
      j[i * 5 + 2] = tm * w[i];
      j[i * 5 + 3] = -q[2] * log_m[i] * tm * w[i];
      j[i * 5 + 4] = w[i];
    }
  };

  const std::vector<double> lower{detail::kParamFloor, detail::kParamFloor, detail::kParamFloor,
                                  detail::kParamFloor, 0.0};
  const double err_floor = detail::min_error(pts);

  detail::LmOutcome best;
  int best_start = 0;
  for (int s = 0; s <= opts.multi_start; ++s) {
    std::vector<double> start;
    if (s == 0) {
      const JointLawParams& q0 = opts.joint_init;
      start = {q0.a, q0.alpha, q0.b, q0.beta, q0.c_inf};
    } else {
      rng::SplitMix64 g = rng::substream(opts.seed, static_cast<std::uint64_t>(s));
      start = {std::pow(10.0, -2.0 + 2.0 * g.next_unit()),
               std::pow(10.0, -3.0 + 3.0 * g.next_unit()),
               std::pow(10.0, -2.0 + 2.0 * g.next_unit()),
               std::pow(10.0, -3.0 + 3.0 * g.next_unit()), err_floor * g.next_unit()};
    }
    detail::LmOutcome run = detail::levenberg_marquardt(std::move(start), lower, residual_at,
                                                        jacobian_at, n_points, opts);
    if (run.sse < best.sse || best.params.empty()) {
      best = std::move(run);
      best_start = s;
    }
  }

  FitResult<JointLawParams> result;
  result.params = {best.params[0], best.params[1], best.params[2], best.params[3], best.params[4]};
  result.sse = best.sse;
  result.mse = best.sse / n_points;
  result.iterations = best.iterations;
  result.converged = best.converged;
  result.residuals = std::move(best.residuals);
  result.start_index = best_start;
  return result;
}

/// One axis of the brute-force grid: steps evenly spaced values over
/// [min, max], endpoints included.
struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  int steps = 0;
};

struct GridSpec {
  GridAxis a;
  GridAxis alpha;
  GridAxis c_inf;
};

struct GridFitResult {
  DataLawParams params{};
  double sse = 0.0;
  std::size_t cell_index = 0;   // linear index, a-major then alpha then c_inf
};

/// Exhaustive SSE evaluation over the Cartesian grid; the minimizing cell
/// wins, ties broken by the lowest linear index. Independent of the
/// iterative fitter by construction.
inline GridFitResult grid_oracle_fit(const std::vector<ObservationPoint>& points,
                                     const GridSpec& grid) {
  const std::vector<ObservationPoint> pts = validate_points(points);
  for (const GridAxis& ax : {grid.a, grid.alpha, grid.c_inf}) {
    if (ax.steps < 2) throw Error("grid axis needs at least 2 steps");
    if (!(ax.max >= ax.min)) throw Error("grid axis max must be at least min");
  }
  const double total = static_cast<double>(grid.a.steps) * grid.alpha.steps * grid.c_inf.steps;
  if (total > 1e8) throw Error("grid too large: more than 1e8 cells");

  auto axis_value = [](const GridAxis& ax, int i) {
    return ax.min + (ax.max - ax.min) * static_cast<double>(i) / (ax.steps - 1);
  };

  std::vector<double> log_n(pts.size()), err(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    log_n[i] = std::log(static_cast<double>(pts[i].n));
    err[i] = pts[i].error;
  }

  // decay table: one row per alpha step
  std::vector<double> decay(static_cast<std::size_t>(grid.alpha.steps) * pts.size());
  for (int ja = 0; ja < grid.alpha.steps; ++ja) {
    const double alpha = axis_value(grid.alpha, ja);
    for (std::size_t i = 0; i < pts.size(); ++i)
      decay[ja * pts.size() + i] = std::exp(-alpha * log_n[i]);
  }

  double best_sse = std::numeric_limits<double>::infinity();
  std::size_t best_cell = 0;
  DataLawParams best_params{};
  std::size_t cell = 0;
  for (int ia = 0; ia < grid.a.steps; ++ia) {
    const double a = axis_value(grid.a, ia);
    for (int ja = 0; ja < grid.alpha.steps; ++ja) {
      const double* t = &decay[ja * pts.size()];
      for (int jc = 0; jc < grid.c_inf.steps; ++jc, ++cell) {
        const double c = axis_value(grid.c_inf, jc);
        double s = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
          const double d = a * t[i] + c - err[i];
          s += d * d;
        }
        if (s < best_sse) {
          best_sse = s;
          best_cell = cell;
          best_params = {a, axis_value(grid.alpha, ja), c};
        }
      }
    }
  }
  return {best_params, best_sse, best_cell};
}

}  // namespace scalelaw
