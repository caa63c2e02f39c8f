#pragma once

#include <cmath>
#include <optional>
#include <variant>

#include "christoffel/chart.hpp"
#include "christoffel/error.hpp"
#include "christoffel/geometry.hpp"
#include "christoffel/normalize.hpp"
#include "christoffel/parabola.hpp"

namespace christoffel {

enum class BoundKind { Lower, Upper };

/// A witness for one side of the geometric sandwich at a point x:
///  - Lower: an ellipse E with x in E and E inside the polygon; `value` is
///    (1 - |E^{-1} x|)^{1/2} |det E|, a lower bound for the ellipse functional.
///  - Upper: an affine frame U with polygon inside U([0,1]^2) and U^{-1} x in
///    [0,1/2]^2; `value` is ((U^{-1}x)_1 (U^{-1}x)_2)^{1/2} |det U|, an upper
///    bound for the parallelogram functional.
/// Witnesses and values live in the normalized body's coordinates.
struct BoundCertificate {
  BoundKind kind = BoundKind::Lower;
  int case_tag = 0;
  double value = 0.0;
  std::variant<Ellipse, AffineMap2> witness;

  [[nodiscard]] const Ellipse& ellipse() const { return std::get<Ellipse>(witness); }
  [[nodiscard]] const AffineMap2& frame() const { return std::get<AffineMap2>(witness); }
};

inline constexpr double kCase1Radius = 1.0 / 8.0;
inline constexpr double kBoundaryGuard = 1e-10;

/// Which construction applies at x, with the intermediate objects it needs.
struct CaseAnalysis {
  int case_tag = 1;
  std::optional<LocalChart> chart;
  std::optional<ParabolaFit> fit;
};

/// Case 1 when x + B/8 fits in the polygon; otherwise Case 2 when the chart
/// profile stays below delta/2 and Case 3 (tangent parabola) when it does not.
inline CaseAnalysis classify(const NormalizedBody& body, const Point2& x) {
  CaseAnalysis out;
  if (body.polygon.margin(x) >= kCase1Radius - 1e-12) return out;
  out.chart = local_chart(body, x);
  if (profile_below_half_gap(out.chart->profile, out.chart->delta)) {
    out.case_tag = 2;
  } else {
    out.case_tag = 3;
    out.fit = fit_parabola(*out.chart);
  }
  return out;
}

inline double ellipse_value(const Ellipse& e, const Point2& x) {
  return std::sqrt(std::max(0.0, 1.0 - e.gauge(x))) * std::abs(e.axes.determinant());
}

inline double frame_value(const AffineMap2& frame, const Point2& x) {
  const Point2 t = frame.inverse()(x);
  return std::sqrt(std::max(0.0, t.x() * t.y())) * std::abs(frame.det());
}

/// Ellipse inside the polygon (exact support-function test) containing x.
inline bool certifies_lower(const ConvexPolygon& poly, const Point2& x, const Ellipse& e, double tol = 1e-9) {
  return e.inside(poly, tol) && e.gauge(x) < 1.0;
}

/// Every vertex maps into [-tol, 1+tol]^2 and x into [0, 1/2]^2 (up to tol).
inline bool certifies_upper(const ConvexPolygon& poly, const Point2& x, const AffineMap2& frame, double tol = 1e-9) {
  const AffineMap2 inv = frame.inverse();
  for (const auto& v : poly.vertices()) {
    const Point2 t = inv(v);
    if (t.x() < -tol || t.y() < -tol || t.x() > 1.0 + tol || t.y() > 1.0 + tol) return false;
  }
  const Point2 t = inv(x);
  return t.x() >= -tol && t.y() >= -tol && t.x() <= 0.5 + tol && t.y() <= 0.5 + tol;
}

namespace detail {

inline void check_interior(const NormalizedBody& body, const Point2& x) {
  const double m = body.polygon.margin(x);
  if (!(m > 0.0)) fail(ErrorKind::Outside, "point is not interior to the polygon");
  if (m <= kBoundaryGuard) fail(ErrorKind::TooCloseToBoundary, "point is within 1e-10 of the boundary; retract first");
}

/// Chart-frame map of the Case 3 parallelogram: y = 0 -> y = 0, x = 0 -> the
/// support line y = alpha x - beta, x = 1 -> the parallel line through
/// (-16, 16). Expressed in unreflected chart coordinates.
inline AffineMap2 case3_chart_frame(const ParabolaFit& fit) {
  const double a = fit.alpha;
  const double b = fit.beta;
  Matrix2 lin;
  lin << -(b + 16.0 * a + 16.0) / a, 16.0 / a, 0.0, 16.0;
  AffineMap2 frame(lin, Point2(b / a, 0.0));
  if (fit.reflected) frame = AffineMap2::linear_map(Eigen::Vector2d(-1.0, 1.0).asDiagonal().toDenseMatrix()) * frame;
  return frame;
}

/// [-16, 16] x [0, 16] in chart coordinates.
inline AffineMap2 general_chart_frame() { return {Eigen::Vector2d(32.0, 16.0).asDiagonal().toDenseMatrix(), Point2(-16.0, 0.0)}; }

}  // namespace detail

/// Public for tests: the Case 3 parallelogram frame in chart coordinates.
inline AffineMap2 case3_parallelogram(const ParabolaFit& fit) { return detail::case3_chart_frame(fit); }

inline BoundCertificate lower_certificate(const NormalizedBody& body, const Point2& x) {
  detail::check_interior(body, x);
  const CaseAnalysis cases = classify(body, x);
  BoundCertificate cert;
  cert.kind = BoundKind::Lower;
  cert.case_tag = cases.case_tag;

  Ellipse e;
  if (cases.case_tag == 1) {
    e = Ellipse{x, kCase1Radius * Matrix2::Identity()};
  } else {
    const LocalChart& chart = *cases.chart;
    const double d = chart.delta;
    Ellipse in_chart;
    if (cases.case_tag == 2) {
      // [-1,1] x [5d/6, 5d/6 + 1/12] lies in the chart image
      in_chart = Ellipse{Point2(0.0, 5.0 * d / 6.0 + 1.0 / 24.0), Eigen::Vector2d(1.0, 1.0 / 24.0).asDiagonal()};
    } else {
      // above y = k x^2 + d/2 and below y = 1/3
      const double kp = std::max(cases.fit->k, 1.0);
      in_chart = Ellipse{Point2(0.0, 1.0 / 12.0 + 2.0 * d / 3.0),
                         Eigen::Vector2d(1.0 / std::sqrt(24.0 * kp), 1.0 / 12.0).asDiagonal()};
    }
    const AffineMap2 back = chart.chart_map.inverse() * in_chart.as_map();
    e = Ellipse{back.shift(), back.linear()};
  }
  cert.witness = e;
  cert.value = ellipse_value(e, x);
  return cert;
}

inline BoundCertificate upper_certificate(const NormalizedBody& body, const Point2& x) {
  if (!(body.polygon.margin(x) > 0.0)) fail(ErrorKind::Outside, "point is not interior to the polygon");
  const CaseAnalysis cases = classify(body, x);
  BoundCertificate cert;
  cert.kind = BoundKind::Upper;
  cert.case_tag = cases.case_tag;

  if (cases.case_tag == 1) {
    const AffineMap2 frame(8.0 * Matrix2::Identity(), x - Point2(4.0, 4.0));
    cert.witness = frame;
    cert.value = frame_value(frame, x);
    return cert;
  }
  const AffineMap2 back = cases.chart->chart_map.inverse();
  AffineMap2 best = back * detail::general_chart_frame();
  double best_value = frame_value(best, x);
  if (cases.case_tag == 3) {
    const AffineMap2 frame = back * detail::case3_chart_frame(*cases.fit);
    const double v = frame_value(frame, x);
    if (v < best_value && certifies_upper(body.polygon, x, frame)) {
      best = frame;
      best_value = v;
    }
  }
  cert.witness = best;
  cert.value = best_value;
  return cert;
}

/// Image of a certificate under an affine map; values scale by |det T|.
inline BoundCertificate transform_certificate(const BoundCertificate& cert, const AffineMap2& t) {
  BoundCertificate out = cert;
  out.value = cert.value * std::abs(t.det());
  if (std::holds_alternative<Ellipse>(cert.witness)) {
    const Ellipse& e = cert.ellipse();
    out.witness = Ellipse{t(e.center), t.linear() * e.axes};
  } else {
    out.witness = t * cert.frame();
  }
  return out;
}

}  // namespace christoffel
