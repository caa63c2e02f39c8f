#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "christoffel/error.hpp"
#include "christoffel/geometry.hpp"
#include "christoffel/legendre.hpp"
#include "christoffel/moments.hpp"

namespace christoffel {

/// Positive cubature rule on a planar domain.
struct Quadrature {
  std::vector<Point2> nodes;
  std::vector<double> weights;
  int exact_degree = 0;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }

  template <class F>
  [[nodiscard]] double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

inline constexpr int kMaxQuadratureDegree = 64;

/// Collapsed Gauss-Legendre product rule on a triangle (apex, a, b), exact for
/// total degree `degree`. The square [0,1]^2 is mapped by
///   (s, t) -> apex + s ((1 - t)(a - apex) + t (b - apex)),
/// whose Jacobian s * 2|T| costs one extra degree in s.
inline void append_triangle_rule(const Point2& apex, const Point2& a, const Point2& b, int degree,
                                 Quadrature& out) {
  const int q = (degree + 3) / 2;  // ceil((degree + 2) / 2)
  const GaussRule g = gauss_legendre_unit(q);
  const double twice_area = std::abs(cross(a - apex, b - apex));
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double s = g.nodes[i];
    for (std::size_t j = 0; j < g.nodes.size(); ++j) {
      const double t = g.nodes[j];
      out.nodes.push_back(apex + s * ((1.0 - t) * (a - apex) + t * (b - apex)));
      out.weights.push_back(g.weights[i] * g.weights[j] * s * twice_area);
    }
  }
}

/// Fan triangulation from the centroid with a collapsed product rule on each
/// triangle. All nodes are interior and all weights positive.
inline Quadrature fine_quadrature(const ConvexPolygon& poly, int exact_degree) {
  if (exact_degree < 0) fail(ErrorKind::InvalidArgument, "degree must be non-negative");
  if (exact_degree > kMaxQuadratureDegree) fail(ErrorKind::DegreeTooLarge, "quadrature degree above 64");
  Quadrature out;
  out.exact_degree = exact_degree;
  const int q = (exact_degree + 3) / 2;
  out.nodes.reserve(poly.size() * static_cast<std::size_t>(q * q));
  out.weights.reserve(out.nodes.capacity());
  const Point2 c = poly.centroid();
  for (std::size_t e = 0; e < poly.size(); ++e) append_triangle_rule(c, poly.vertex(e), poly.vertex(e + 1), exact_degree, out);
  return out;
}

/// Largest |sum w x^p y^q - m(p,q)| / max(1, |m(p,q)|) over p + q <= degree.
inline double moment_residual(const Quadrature& quad, const MomentTable& moments, int degree) {
  if (degree > moments.order()) fail(ErrorKind::InvalidArgument, "moment table too small");
  double worst = 0.0;
  for (int p = 0; p <= degree; ++p) {
    for (int q = 0; p + q <= degree; ++q) {
      const double s = quad.integrate([&](const Point2& x) { return std::pow(x.x(), p) * std::pow(x.y(), q); });
      worst = std::max(worst, std::abs(s - moments(p, q)) / std::max(1.0, std::abs(moments(p, q))));
    }
  }
  return worst;
}

}  // namespace christoffel
