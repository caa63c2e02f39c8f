#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "christoffel/error.hpp"
#include "christoffel/geometry.hpp"
#include "christoffel/normalize.hpp"

namespace christoffel {

/// Continuous piecewise-linear function on [xs.front(), xs.back()], given by
/// its breakpoints.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  PiecewiseLinear(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() < 2 || xs_.size() != ys_.size()) {
      fail(ErrorKind::InvalidArgument, "piecewise-linear function needs >= 2 matching breakpoints");
    }
    for (std::size_t i = 1; i < xs_.size(); ++i) {
      if (!(xs_[i] > xs_[i - 1])) fail(ErrorKind::InvalidArgument, "breakpoints must increase strictly");
    }
  }

  [[nodiscard]] const std::vector<double>& xs() const { return xs_; }
  [[nodiscard]] const std::vector<double>& ys() const { return ys_; }
  [[nodiscard]] std::size_t segments() const { return xs_.size() - 1; }
  [[nodiscard]] double lo() const { return xs_.front(); }
  [[nodiscard]] double hi() const { return xs_.back(); }

  [[nodiscard]] double slope(std::size_t segment) const {
    return (ys_[segment + 1] - ys_[segment]) / (xs_[segment + 1] - xs_[segment]);
  }
  [[nodiscard]] double intercept(std::size_t segment) const { return ys_[segment] - slope(segment) * xs_[segment]; }

  [[nodiscard]] double operator()(double x) const {
    const std::size_t s = segment_right(x);
    const double t = (x - xs_[s]) / (xs_[s + 1] - xs_[s]);
    return ys_[s] + t * (ys_[s + 1] - ys_[s]);
  }

  /// Right derivative; at the right end it falls back to the left derivative.
  [[nodiscard]] double slope_right(double x) const { return slope(segment_right(x)); }
  /// Left derivative; at the left end it falls back to the right derivative.
  [[nodiscard]] double slope_left(double x) const { return slope(segment_left(x)); }

  /// The reflected function x -> f(-x).
  [[nodiscard]] PiecewiseLinear reflected() const {
    std::vector<double> xs(xs_.rbegin(), xs_.rend());
    std::vector<double> ys(ys_.rbegin(), ys_.rend());
    for (auto& x : xs) x = -x;
    return {std::move(xs), std::move(ys)};
  }

 private:
  // segment s with xs[s] <= x < xs[s+1], clamped to the valid range
  [[nodiscard]] std::size_t segment_right(double x) const {
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const auto idx = static_cast<std::ptrdiff_t>(it - xs_.begin()) - 1;
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(segments()) - 1));
  }
  // segment s with xs[s] < x <= xs[s+1], clamped
  [[nodiscard]] std::size_t segment_left(double x) const {
    const auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
    const auto idx = static_cast<std::ptrdiff_t>(it - xs_.begin()) - 1;
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(segments()) - 1));
  }

  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// Boundary chart near the exit point of the ray through x: after `chart_map`
/// (det 3) the point x sits at (0, delta) and the polygon's lower boundary over
/// [-1, 1] is the graph of the convex `profile` with f(0) = f'_+(0) = 0.
struct LocalChart {
  AffineMap2 chart_map;
  double delta = 0.0;
  PiecewiseLinear profile;
};

namespace detail {

/// Vertices of the lower chain of a CCW convex polygon, left to right.
inline std::vector<Point2> lower_chain(const ConvexPolygon& poly) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  std::size_t start = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (v[i].x() < v[start].x() || (v[i].x() == v[start].x() && v[i].y() < v[start].y())) start = i;
  }
  std::vector<Point2> chain{v[start]};
  for (std::size_t k = 1; k < n; ++k) {
    const Point2& next = v[(start + k) % n];
    if (!(next.x() > chain.back().x())) break;
    chain.push_back(next);
  }
  return chain;
}

inline double chain_value(const std::vector<Point2>& chain, double x) {
  auto it = std::upper_bound(chain.begin(), chain.end(), x, [](double t, const Point2& p) { return t < p.x(); });
  std::size_t hi = static_cast<std::size_t>(it - chain.begin());
  hi = std::clamp<std::size_t>(hi, 1, chain.size() - 1);
  const Point2& a = chain[hi - 1];
  const Point2& b = chain[hi];
  return a.y() + (x - a.x()) * (b.y() - a.y()) / (b.x() - a.x());
}

}  // namespace detail

/// Checks the LocalChart invariants; throws ChartFailure on violation.
inline void validate_chart(const LocalChart& chart) {
  const auto& f = chart.profile;
  auto bad = [](const std::string& what) { fail(ErrorKind::ChartFailure, what); };
  if (std::abs(chart.chart_map.det() - 3.0) > 1e-10 * 3.0) bad("chart determinant differs from 3");
  if (std::abs(f.lo() + 1.0) > 1e-15 || std::abs(f.hi() - 1.0) > 1e-15) bad("profile domain is not [-1, 1]");
  if (std::abs(f(0.0)) > 1e-10) bad("profile does not vanish at 0");
  if (std::abs(f.slope_right(0.0)) > 1e-10) bad("profile right slope at 0 is not 0");
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < f.segments(); ++s) {
    const double m = f.slope(s);
    if (std::abs(m) > 2.0 + 1e-9) bad("profile slope exceeds 2 in magnitude");
    if (m < prev - 1e-9) bad("profile is not convex");
    prev = m;
  }
  for (double y : f.ys()) {
    if (y < -1e-12) bad("profile is negative");
  }
}

/// Boundary chart of the normalized body at the exit point of the ray
/// through x.
///
/// The rigid motion moves the exit point z to the origin and turns -x to the
/// +y axis; the shear (3 0; -s 1) with s the right slope of the boundary at z
/// then flattens the boundary there. At a vertex s is the slope of the
/// outgoing (right-hand) edge.
inline LocalChart local_chart(const NormalizedBody& body, const Point2& x) {
  const RayHit hit = ray_boundary_gap(body, x);
  const Point2 down = -x.normalized();
  const double angle = std::numbers::pi / 2.0 - std::atan2(down.y(), down.x());
  const AffineMap2 rigid = AffineMap2::rotation(angle) * AffineMap2::translation(-hit.z);

  const ConvexPolygon& poly = body.polygon;
  const std::size_t edge = hit.vertex ? *hit.vertex : hit.edge;
  const Point2 d = rigid.linear() * (poly.vertex(edge + 1) - poly.vertex(edge));
  if (!(d.x() > 0.0)) fail(ErrorKind::ChartFailure, "boundary edge at the exit point is not on the lower chain");
  const double s = d.y() / d.x();

  Matrix2 shear;
  shear << 3.0, 0.0, -s, 1.0;
  LocalChart chart;
  chart.chart_map = AffineMap2::linear_map(shear) * rigid;
  chart.delta = hit.delta;

  const ConvexPolygon image = poly.transformed(chart.chart_map);
  const std::vector<Point2> chain = detail::lower_chain(image);
  constexpr double kMerge = 1e-12;
  std::vector<double> xs{-1.0, 0.0, 1.0};
  for (const auto& p : chain) {
    if (p.x() > -1.0 + kMerge && p.x() < 1.0 - kMerge && std::abs(p.x()) > kMerge) xs.push_back(p.x());
  }
  std::sort(xs.begin(), xs.end());
  std::vector<double> ys;
  ys.reserve(xs.size());
  for (double t : xs) {
    const double v = t == 0.0 ? 0.0 : detail::chain_value(chain, t);
    ys.push_back(v > -1e-12 ? std::max(0.0, v) : v);  // round-off only
  }
  chart.profile = PiecewiseLinear(std::move(xs), std::move(ys));
  validate_chart(chart);
  return chart;
}

}  // namespace christoffel
