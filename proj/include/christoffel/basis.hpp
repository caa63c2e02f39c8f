#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "christoffel/error.hpp"
#include "christoffel/geometry.hpp"
#include "christoffel/legendre.hpp"

namespace christoffel {

inline std::size_t polynomial_space_dim(int degree) {
  return static_cast<std::size_t>(degree + 1) * static_cast<std::size_t>(degree + 2) / 2;
}

/// Products of orthonormal Legendre polynomials in the coordinates of a box
/// rescaled to [-1, 1]^2, total degree <= n, graded lexicographic order:
/// (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
class ProductLegendreBasis {
 public:
  ProductLegendreBasis(int degree, const BoundingBox& box) : degree_(degree), center_(box.center()) {
    if (degree < 0) fail(ErrorKind::InvalidArgument, "degree must be non-negative");
    if (degree > kMaxDegree) fail(ErrorKind::DegreeTooLarge, "basis degree above 64");
    const Point2 size = box.size();
    if (!(size.x() > 0.0 && size.y() > 0.0)) fail(ErrorKind::DegenerateInput, "basis box has zero width");
    inv_half_ = Point2(2.0 / size.x(), 2.0 / size.y());
    for (int t = 0; t <= degree; ++t) {
      for (int i = t; i >= 0; --i) exponents_.emplace_back(i, t - i);
    }
  }

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] std::size_t size() const { return exponents_.size(); }
  [[nodiscard]] const std::vector<std::pair<int, int>>& exponents() const { return exponents_; }

  void evaluate(const Point2& p, std::span<double> out) const {
    const Point2 u = (p - center_).cwiseProduct(inv_half_);
    double lu[kMaxDegree + 1];
    double lv[kMaxDegree + 1];
    const auto m = static_cast<std::size_t>(degree_ + 1);
    legendre_orthonormal(u.x(), std::span<double>(lu, m));
    legendre_orthonormal(u.y(), std::span<double>(lv, m));
    for (std::size_t k = 0; k < exponents_.size(); ++k) {
      out[k] = lu[exponents_[k].first] * lv[exponents_[k].second];
    }
  }

  [[nodiscard]] Eigen::VectorXd operator()(const Point2& p) const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(size()));
    evaluate(p, std::span<double>(v.data(), size()));
    return v;
  }

  /// Row i holds the basis at points[i].
  [[nodiscard]] Eigen::MatrixXd vandermonde(std::span<const Point2> points) const {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> v(
        static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
      evaluate(points[i], std::span<double>(v.row(static_cast<Eigen::Index>(i)).data(), size()));
    }
    return v;
  }

  static constexpr int kMaxDegree = 64;

 private:
  int degree_;
  Point2 center_;
  Point2 inv_half_;
  std::vector<std::pair<int, int>> exponents_;
};

}  // namespace christoffel
