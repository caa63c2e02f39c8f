#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "christoffel/error.hpp"
#include "christoffel/geometry.hpp"

namespace christoffel {

inline constexpr int kDefaultPolygonVertices = 256;

namespace detail {

/// Drops vertices where the chain turns by less than a relative 1e-12
/// (straight stretches of p = 1 superellipses, clustered samples).
inline std::vector<Point2> drop_flat_vertices(std::vector<Point2> v) {
  bool changed = true;
  while (changed && v.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < v.size() && v.size() > 3; ++i) {
      const Point2& a = v[(i + v.size() - 1) % v.size()];
      const Point2& b = v[i];
      const Point2& c = v[(i + 1) % v.size()];
      const Point2 e0 = b - a;
      const Point2 e1 = c - b;
      if (cross(e0, e1) <= 1e-12 * e0.norm() * e1.norm()) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return v;
}

}  // namespace detail

/// Inscribed polygon of |x/a|^p + |y/b|^p <= 1 with `vertices` points, the
/// first at (a, 0). p = 2 is the ellipse.
inline ConvexPolygon superellipse_polygon(double a, double b, double p, int vertices = kDefaultPolygonVertices) {
  if (!(a > 0.0) || !(b > 0.0)) fail(ErrorKind::InvalidArgument, "semi-axes must be positive");
  if (!(p >= 1.0) || !std::isfinite(p)) fail(ErrorKind::InvalidArgument, "superellipse exponent must be >= 1");
  if (vertices < 3) fail(ErrorKind::InvalidArgument, "need at least 3 vertices");
  std::vector<Point2> v;
  v.reserve(static_cast<std::size_t>(vertices));
  for (int i = 0; i < vertices; ++i) {
    const double t = 2.0 * std::numbers::pi * i / vertices;
    const double c = std::cos(t);
    const double s = std::sin(t);
    v.emplace_back(a * std::copysign(std::pow(std::abs(c), 2.0 / p), c),
                   b * std::copysign(std::pow(std::abs(s), 2.0 / p), s));
  }
  return ConvexPolygon(detail::drop_flat_vertices(std::move(v)));
}

inline ConvexPolygon ellipse_polygon(double a, double b, int vertices = kDefaultPolygonVertices) {
  return superellipse_polygon(a, b, 2.0, vertices);
}

inline ConvexPolygon disk_polygon(int vertices = kDefaultPolygonVertices) { return ellipse_polygon(1.0, 1.0, vertices); }

}  // namespace christoffel
