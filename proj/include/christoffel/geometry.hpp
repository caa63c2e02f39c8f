#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "christoffel/error.hpp"

namespace christoffel {

using Point2 = Eigen::Vector2d;
using Matrix2 = Eigen::Matrix2d;

inline double cross(const Point2& a, const Point2& b) { return a.x() * b.y() - a.y() * b.x(); }

inline bool is_finite(const Point2& p) { return std::isfinite(p.x()) && std::isfinite(p.y()); }

/// Invertible affine map x -> A x + z of the plane.
class AffineMap2 {
 public:
  AffineMap2() : linear_(Matrix2::Identity()), shift_(Point2::Zero()) {}

  AffineMap2(const Matrix2& linear, const Point2& shift) : linear_(linear), shift_(shift) {
    const double d = linear_.determinant();
    if (!std::isfinite(d) || d == 0.0 || !linear_.allFinite() || !is_finite(shift_)) {
      fail(ErrorKind::DegenerateInput, "affine map must have a finite, non-zero determinant");
    }
  }

  static AffineMap2 identity() { return {}; }
  static AffineMap2 translation(const Point2& z) { return {Matrix2::Identity(), z}; }
  static AffineMap2 linear_map(const Matrix2& a) { return {a, Point2::Zero()}; }
  static AffineMap2 scaling(double s) { return {s * Matrix2::Identity(), Point2::Zero()}; }
  static AffineMap2 rotation(double angle) {
    Matrix2 r;
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return linear_map(r);
  }

  [[nodiscard]] const Matrix2& linear() const { return linear_; }
  [[nodiscard]] const Point2& shift() const { return shift_; }
  [[nodiscard]] double det() const { return linear_.determinant(); }

  Point2 operator()(const Point2& p) const { return linear_ * p + shift_; }

  [[nodiscard]] AffineMap2 inverse() const {
    const Matrix2 inv = linear_.inverse();
    return {inv, -(inv * shift_)};
  }

  /// Composition: (a * b)(p) == a(b(p)).
  friend AffineMap2 operator*(const AffineMap2& a, const AffineMap2& b) {
    return {a.linear_ * b.linear_, a.linear_ * b.shift_ + a.shift_};
  }

 private:
  Matrix2 linear_;
  Point2 shift_;
};

/// Half-plane {p : normal . p <= offset} with unit outward normal.
struct HalfPlane {
  Point2 normal;
  double offset = 0.0;

  [[nodiscard]] double slack(const Point2& p) const { return offset - normal.dot(p); }
};

struct BoundingBox {
  Point2 lo;
  Point2 hi;

  [[nodiscard]] Point2 center() const { return 0.5 * (lo + hi); }
  [[nodiscard]] Point2 size() const { return hi - lo; }
};

/// Strictly convex polygon with counterclockwise vertices.
class ConvexPolygon {
 public:
  explicit ConvexPolygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
    validate();
    build();
  }

  /// Accepts either orientation; clockwise input is reversed.
  static ConvexPolygon from_any_orientation(std::vector<Point2> vertices) {
    double twice_area = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      twice_area += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
    }
    if (twice_area < 0.0) std::reverse(vertices.begin(), vertices.end());
    return ConvexPolygon(std::move(vertices));
  }

  [[nodiscard]] std::size_t size() const { return vertices_.size(); }
  [[nodiscard]] const std::vector<Point2>& vertices() const { return vertices_; }
  [[nodiscard]] const Point2& vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }
  [[nodiscard]] const std::vector<HalfPlane>& halfplanes() const { return halfplanes_; }
  [[nodiscard]] double area() const { return area_; }
  [[nodiscard]] const Point2& centroid() const { return centroid_; }

  [[nodiscard]] BoundingBox bounding_box() const {
    BoundingBox box{vertices_.front(), vertices_.front()};
    for (const auto& v : vertices_) {
      box.lo = box.lo.cwiseMin(v);
      box.hi = box.hi.cwiseMax(v);
    }
    return box;
  }

  /// Distance-like margin: min over edges of (offset - n.p). Positive inside,
  /// equals the Euclidean distance to the boundary for interior points.
  [[nodiscard]] double margin(const Point2& p) const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& h : halfplanes_) m = std::min(m, h.slack(p));
    return m;
  }

  [[nodiscard]] bool contains(const Point2& p, double tol = 0.0) const { return margin(p) >= -tol; }

  [[nodiscard]] ConvexPolygon transformed(const AffineMap2& t) const {
    std::vector<Point2> out;
    out.reserve(vertices_.size());
    for (const auto& v : vertices_) out.push_back(t(v));
    if (t.det() < 0.0) std::reverse(out.begin(), out.end());
    return ConvexPolygon(std::move(out), Unchecked{});
  }

  /// Largest |v| over vertices.
  [[nodiscard]] double max_vertex_norm() const {
    double r = 0.0;
    for (const auto& v : vertices_) r = std::max(r, v.norm());
    return r;
  }

 private:
  struct Unchecked {};
  ConvexPolygon(std::vector<Point2> vertices, Unchecked) : vertices_(std::move(vertices)) { build(); }

  void validate() const {
    const std::size_t n = vertices_.size();
    if (n < 3) fail(ErrorKind::InvalidPolygon, "need at least 3 vertices");
    for (const auto& v : vertices_) {
      if (!is_finite(v)) fail(ErrorKind::InvalidPolygon, "non-finite vertex");
    }
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 e0 = vertices_[(i + 1) % n] - vertices_[i];
      const Point2 e1 = vertices_[(i + 2) % n] - vertices_[(i + 1) % n];
      if (!(cross(e0, e1) > 0.0)) {
        fail(ErrorKind::InvalidPolygon,
             "vertex chain is not strictly convex and counterclockwise at vertex " +
                 std::to_string((i + 1) % n));
      }
      turning += std::atan2(cross(e0, e1), e0.dot(e1));
    }
    // a star polygon turns left everywhere but winds more than once
    if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6) {
      fail(ErrorKind::InvalidPolygon, "vertex chain winds more than once");
    }
  }

  void build() {
    const std::size_t n = vertices_.size();
    halfplanes_.clear();
    halfplanes_.reserve(n);
    double twice_area = 0.0;
    Point2 c = Point2::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& a = vertices_[i];
      const Point2& b = vertices_[(i + 1) % n];
      const Point2 e = b - a;
      const Point2 normal = Point2(e.y(), -e.x()).normalized();
      halfplanes_.push_back({normal, normal.dot(a)});
      const double w = cross(a, b);
      twice_area += w;
      c += w * (a + b);
    }
    area_ = 0.5 * twice_area;
    centroid_ = c / (3.0 * twice_area);
  }

  std::vector<Point2> vertices_;
  std::vector<HalfPlane> halfplanes_;
  double area_ = 0.0;
  Point2 centroid_ = Point2::Zero();
};

/// Image of the closed unit disk under p -> center + axes * p.
struct Ellipse {
  Point2 center = Point2::Zero();
  Matrix2 axes = Matrix2::Identity();

  [[nodiscard]] double area() const { return std::numbers::pi * std::abs(axes.determinant()); }
  [[nodiscard]] AffineMap2 as_map() const { return {axes, center}; }

  /// Norm of the preimage of p in the unit disk.
  [[nodiscard]] double gauge(const Point2& p) const { return (axes.inverse() * (p - center)).norm(); }
  [[nodiscard]] bool contains(const Point2& p, double tol = 0.0) const { return gauge(p) <= 1.0 + tol; }

  /// Exact containment test via the support function of the ellipse.
  [[nodiscard]] bool inside(const ConvexPolygon& poly, double tol = 0.0) const {
    for (const auto& h : poly.halfplanes()) {
      if (h.normal.dot(center) + (axes.transpose() * h.normal).norm() > h.offset + tol) return false;
    }
    return true;
  }

  [[nodiscard]] Point2 boundary_point(double angle) const {
    return center + axes * Point2(std::cos(angle), std::sin(angle));
  }
};

}  // namespace christoffel
