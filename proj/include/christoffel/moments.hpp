#pragma once

#include <cmath>
#include <vector>

#include "christoffel/error.hpp"
#include "christoffel/geometry.hpp"

namespace christoffel {

inline constexpr int kMaxMomentDegree = 64;

/// m(p, q) = integral over the polygon of x^p y^q, for p + q <= 2 * degree_max.
class MomentTable {
 public:
  MomentTable() = default;
  explicit MomentTable(int degree_max)
      : degree_max_(degree_max), order_(2 * degree_max), data_(static_cast<std::size_t>((order_ + 1) * (order_ + 1)), 0.0) {}

  [[nodiscard]] int degree_max() const { return degree_max_; }
  /// Largest total degree p + q stored.
  [[nodiscard]] int order() const { return order_; }

  [[nodiscard]] double operator()(int p, int q) const { return data_[index(p, q)]; }
  double& operator()(int p, int q) { return data_[index(p, q)]; }

 private:
  [[nodiscard]] std::size_t index(int p, int q) const {
    if (p < 0 || q < 0 || p + q > order_) fail(ErrorKind::InvalidArgument, "moment index out of range");
    return static_cast<std::size_t>(p * (order_ + 1) + q);
  }

  int degree_max_ = 0;
  int order_ = 0;
  std::vector<double> data_;
};

namespace detail {

inline std::vector<std::vector<double>> binomials(int n) {
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    c[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i + 1), 1.0);
    for (int j = 1; j < i; ++j) {
      c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
          c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
    }
  }
  return c;
}

inline std::vector<double> powers(double base, int n) {
  std::vector<double> out(static_cast<std::size_t>(n + 1), 1.0);
  for (int i = 1; i <= n; ++i) out[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i - 1)] * base;
  return out;
}

}  // namespace detail

/// Exact monomial moments of a convex polygon.
///
/// Fan-triangulates from the centroid; each triangle (c, a, b) contributes,
/// with a' = a - c and b' = b - c,
///   cross(a', b') p! q! / (p+q+2)!  sum_{k,l} C(k+l, l) C(p-k+q-l, q-l)
///                                    a'_x^k b'_x^(p-k) a'_y^l b'_y^(q-l)
/// (the simplex monomial integral). Centered moments are then shifted back
/// binomially.
inline MomentTable polygon_moments(const ConvexPolygon& poly, int degree_max) {
  if (degree_max < 0) fail(ErrorKind::InvalidArgument, "degree must be non-negative");
  if (degree_max > kMaxMomentDegree) fail(ErrorKind::DegreeTooLarge, "moment degree above 64");
  const int order = 2 * degree_max;
  const auto binom = detail::binomials(order + 2);
  auto C = [&](int n, int k) { return binom[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]; };

  const Point2 c = poly.centroid();
  MomentTable centered(degree_max);
  const std::size_t nv = poly.size();
  for (std::size_t e = 0; e < nv; ++e) {
    const Point2 a = poly.vertex(e) - c;
    const Point2 b = poly.vertex(e + 1) - c;
    const double twice_area = cross(a, b);
    const auto ax = detail::powers(a.x(), order);
    const auto bx = detail::powers(b.x(), order);
    const auto ay = detail::powers(a.y(), order);
    const auto by = detail::powers(b.y(), order);
    for (int p = 0; p <= order; ++p) {
      for (int q = 0; p + q <= order; ++q) {
        double sum = 0.0;
        for (int k = 0; k <= p; ++k) {
          double inner = 0.0;
          for (int l = 0; l <= q; ++l) {
            inner += C(k + l, l) * C(p - k + q - l, q - l) * ay[static_cast<std::size_t>(l)] *
                     by[static_cast<std::size_t>(q - l)];
          }
          sum += inner * ax[static_cast<std::size_t>(k)] * bx[static_cast<std::size_t>(p - k)];
        }
        // p! q! / (p+q+2)! = 1 / ((p+q+1)(p+q+2) C(p+q, p))
        const double scale = 1.0 / ((p + q + 1.0) * (p + q + 2.0) * C(p + q, p));
        centered(p, q) += twice_area * scale * sum;
      }
    }
  }

  MomentTable out(degree_max);
  const auto cx = detail::powers(c.x(), order);
  const auto cy = detail::powers(c.y(), order);
  for (int p = 0; p <= order; ++p) {
    for (int q = 0; p + q <= order; ++q) {
      double sum = 0.0;
      for (int i = 0; i <= p; ++i) {
        for (int j = 0; j <= q; ++j) {
          sum += C(p, i) * C(q, j) * cx[static_cast<std::size_t>(p - i)] * cy[static_cast<std::size_t>(q - j)] *
                 centered(i, j);
        }
      }
      out(p, q) = sum;
    }
  }
  return out;
}

}  // namespace christoffel
