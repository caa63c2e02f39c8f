#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "christoffel/error.hpp"
#include "christoffel/geometry.hpp"
#include "christoffel/mvee.hpp"

namespace christoffel {

/// A polygon in John position, B subset polygon subset 2B, together with the
/// map that put it there.
struct NormalizedBody {
  ConvexPolygon polygon;
  AffineMap2 to_normalized;
  AffineMap2 from_normalized;
};

inline constexpr double kNormalizationSlack = 1e-7;

/// True when the unit disk is inside `poly` and `poly` is inside the disk of
/// radius 2, both up to `slack`.
inline bool in_john_position(const ConvexPolygon& poly, double slack = kNormalizationSlack) {
  for (const auto& h : poly.halfplanes()) {
    if (h.offset < 1.0 - slack) return false;
  }
  return poly.max_vertex_norm() <= 2.0 + slack;
}

/// Affine map taking `poly` into John position.
///
/// The minimum-area enclosing ellipse E of the vertices is shrunk by the
/// planar John factor 1/2 about its center; the map sends that inscribed
/// ellipse to the unit disk. A final isotropic rescale absorbs the MVEE
/// tolerance so that the unit disk is inside the image.
inline NormalizedBody john_normalize(const ConvexPolygon& poly, const MveeOptions& options = {}) {
  MveeOptions opts = options;
  for (int attempt = 0; attempt < 3; ++attempt) {
    const Ellipse outer = mvee(poly.vertices(), opts);
    const AffineMap2 inner_map(0.5 * outer.axes, outer.center);
    AffineMap2 to = inner_map.inverse();
    ConvexPolygon image = poly.transformed(to);

    double inradius = std::numeric_limits<double>::infinity();
    for (const auto& h : image.halfplanes()) inradius = std::min(inradius, h.offset);
    if (inradius < 1.0) {
      to = AffineMap2::scaling(1.0 / inradius) * to;
      image = poly.transformed(to);
    }
    if (in_john_position(image)) return {std::move(image), to, to.inverse()};
    opts.tolerance *= 1e-2;
  }
  fail(ErrorKind::NumericalFailure, "could not place polygon in John position");
}

struct RayHit {
  Point2 z;
  double delta = 0.0;
  std::size_t edge = 0;
  /// Set when the ray leaves through a vertex; holds its index.
  std::optional<std::size_t> vertex;
};

/// Exit point of the ray from the origin through x, and its distance delta
/// beyond x. Requires x in the interior and away from the origin.
inline RayHit ray_boundary_gap(const NormalizedBody& body, const Point2& x) {
  const double r = x.norm();
  if (!(r >= 1e-12)) fail(ErrorKind::AtOrigin, "point coincides with the normalization center");
  const ConvexPolygon& poly = body.polygon;
  if (!(poly.margin(x) > 0.0)) fail(ErrorKind::Outside, "point is not interior to the polygon");

  const Point2 dir = x / r;
  double t_exit = std::numeric_limits<double>::infinity();
  std::size_t edge = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const HalfPlane& h = poly.halfplanes()[i];
    const double rate = h.normal.dot(dir);
    if (rate > 0.0) {
      const double t = h.offset / rate;
      if (t < t_exit) {
        t_exit = t;
        edge = i;
      }
    }
  }
  RayHit hit;
  hit.z = t_exit * dir;
  hit.delta = t_exit - r;
  hit.edge = edge;
  if (!(hit.delta > 0.0)) fail(ErrorKind::Outside, "point is not interior to the polygon");

  const Point2& a = poly.vertex(edge);
  const Point2& b = poly.vertex(edge + 1);
  const double len = (b - a).norm();
  constexpr double kSnap = 1e-12;
  if ((hit.z - a).norm() <= kSnap * std::max(1.0, len)) {
    hit.vertex = edge;
  } else if ((hit.z - b).norm() <= kSnap * std::max(1.0, len)) {
    hit.vertex = (edge + 1) % poly.size();
  }
  return hit;
}

/// Radial pull-back of x into (1 - 1/(16 n^2)) * polygon.
inline Point2 tau_retract(const NormalizedBody& body, const Point2& x, int n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "tau_retract needs n >= 1");
  const double shrink = 1.0 - 1.0 / (16.0 * static_cast<double>(n) * static_cast<double>(n));
  double t = 1.0;
  for (const auto& h : body.polygon.halfplanes()) {
    const double proj = h.normal.dot(x);
    if (proj > shrink * h.offset) t = std::min(t, shrink * h.offset / proj);
  }
  return t < 1.0 ? Point2(t * x) : x;
}

}  // namespace christoffel
