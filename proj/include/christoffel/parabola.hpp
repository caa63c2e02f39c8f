#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "christoffel/chart.hpp"
#include "christoffel/error.hpp"

namespace christoffel {

/// Lowest parabola delta/2 + k x^2 above the chart profile, its tangency
/// abscissa xi, and the supporting line alpha x - beta of the profile at xi.
///
/// When the tangency happens on the negative side the profile is reflected
/// (x -> -x) first; `reflected` records that and xi, alpha, beta are then
/// expressed in reflected coordinates.
struct ParabolaFit {
  double k = 0.0;
  double xi = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  bool reflected = false;
};

inline constexpr double kBetaFloor = 1e-14;

/// True when the profile never rises above delta/2 on [-1, 1], i.e. the flat
/// (Case 2) construction applies and no tangent parabola exists.
inline bool profile_below_half_gap(const PiecewiseLinear& f, double delta) {
  return std::max(f(f.lo()), f(f.hi())) <= 0.5 * delta;
}

namespace detail {

struct TangencyCandidate {
  double x;
  double k;
};

/// All local maximizers of (f(x) - delta/2) / x^2 on the breakpoint grid and
/// inside segments (double-root condition of the parabola against a line).
inline std::vector<TangencyCandidate> tangency_candidates(const PiecewiseLinear& f, double delta) {
  const double half = 0.5 * delta;
  std::vector<TangencyCandidate> out;
  for (std::size_t i = 0; i < f.xs().size(); ++i) {
    const double x = f.xs()[i];
    if (x != 0.0) out.push_back({x, (f.ys()[i] - half) / (x * x)});
  }
  for (std::size_t s = 0; s < f.segments(); ++s) {
    const double m = f.slope(s);
    const double c = f.intercept(s);
    if (m == 0.0 || !(c < half)) continue;
    const double x = 2.0 * (half - c) / m;
    if (x > f.xs()[s] && x < f.xs()[s + 1] && x != 0.0) out.push_back({x, m * m / (4.0 * (half - c))});
  }
  return out;
}

}  // namespace detail

inline ParabolaFit fit_parabola(const PiecewiseLinear& profile, double delta) {
  if (!(delta > 0.0)) fail(ErrorKind::InvalidArgument, "delta must be positive");
  if (profile_below_half_gap(profile, delta)) {
    fail(ErrorKind::NotCase3, "profile stays below delta/2; no tangent parabola");
  }
  const auto candidates = detail::tangency_candidates(profile, delta);
  double k = 0.0;
  for (const auto& c : candidates) k = std::max(k, c.k);

  // smallest |xi| among the maximizers, positive side preferred
  const double cutoff = k * (1.0 - 1e-12);
  double best_pos = std::numeric_limits<double>::infinity();
  double best_neg = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    if (c.k < cutoff) continue;
    if (c.x > 0.0) best_pos = std::min(best_pos, c.x);
    else best_neg = std::min(best_neg, -c.x);
  }

  ParabolaFit fit;
  fit.k = k;
  fit.reflected = !std::isfinite(best_pos);
  fit.xi = fit.reflected ? best_neg : best_pos;
  const PiecewiseLinear f = fit.reflected ? profile.reflected() : profile;
  fit.alpha = f.slope_left(fit.xi);
  fit.beta = std::max(kBetaFloor, fit.xi * fit.alpha - k * fit.xi * fit.xi - 0.5 * delta);
  return fit;
}

inline ParabolaFit fit_parabola(const LocalChart& chart) { return fit_parabola(chart.profile, chart.delta); }

/// Which of the fit's postconditions hold within `tol`.
struct FitCheck {
  bool domination = false;
  bool tangency = false;
  bool support = false;
  bool parameter_bound = false;
  [[nodiscard]] bool all() const { return domination && tangency && support && parameter_bound; }
};

inline FitCheck check_fit(const PiecewiseLinear& profile, double delta, const ParabolaFit& fit, double tol = 1e-9) {
  const PiecewiseLinear f = fit.reflected ? profile.reflected() : profile;
  const double half = 0.5 * delta;
  FitCheck out;
  out.domination = std::all_of(f.xs().begin(), f.xs().end(), [&](double x) {
    return f(x) <= half + fit.k * x * x + tol;
  });
  out.tangency = std::abs(half + fit.k * fit.xi * fit.xi - f(fit.xi)) <= tol;
  const double line_at_xi = fit.alpha * fit.xi - fit.beta;
  const bool touches = std::abs(line_at_xi - f(fit.xi)) <= tol;
  const bool slope_ok =
      std::abs(fit.alpha - f.slope_left(fit.xi)) <= tol || std::abs(fit.alpha - f.slope_right(fit.xi)) <= tol;
  out.support = touches && slope_ok && fit.alpha > 0.0 && fit.alpha <= 2.0 + tol && fit.beta > 0.0 &&
                fit.beta <= 2.0 + tol;
  out.parameter_bound = std::sqrt(delta + fit.beta) / std::abs(fit.alpha) <= (1.0 + tol) / std::sqrt(fit.k);
  return out;
}

}  // namespace christoffel
