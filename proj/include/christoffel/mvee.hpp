#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "christoffel/error.hpp"
#include "christoffel/geometry.hpp"

namespace christoffel {

struct MveeOptions {
  double tolerance = 1e-7;
  int max_iterations = 100000;
};

namespace detail {

inline Matrix2 symmetric_sqrt(const Matrix2& s) {
  Eigen::SelfAdjointEigenSolver<Matrix2> eig(s);
  const Eigen::Vector2d ev = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace detail

/// Minimum-area enclosing ellipse of a planar point set.
///
/// Khachiyan's barycentric iteration on the lifted points (p, 1) with the
/// Todd-Yildirim away steps, which give linear convergence. Iteration stops
/// once the weights are (1 + tol)-approximately optimal; the returned ellipse
/// is then rescaled so that it contains every point exactly.
inline Ellipse mvee(std::span<const Point2> points, const MveeOptions& options = {}) {
  constexpr double kDim = 2.0;
  const std::size_t n = points.size();
  if (n < 3) fail(ErrorKind::DegenerateInput, "mvee needs at least 3 points");
  if (!(options.tolerance > 0.0)) fail(ErrorKind::InvalidArgument, "mvee tolerance must be positive");

  {
    Point2 mean = Point2::Zero();
    for (const auto& p : points) mean += p;
    mean /= static_cast<double>(n);
    Matrix2 cov = Matrix2::Zero();
    double scale = 0.0;
    for (const auto& p : points) {
      cov += (p - mean) * (p - mean).transpose();
      scale = std::max(scale, (p - mean).squaredNorm());
    }
    Eigen::SelfAdjointEigenSolver<Matrix2> eig(cov);
    if (!(eig.eigenvalues()(0) > 1e-14 * std::max(eig.eigenvalues()(1), scale))) {
      fail(ErrorKind::DegenerateInput, "points are collinear");
    }
  }

  Eigen::Matrix<double, 3, Eigen::Dynamic> lifted(3, static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) lifted.col(static_cast<Eigen::Index>(j)) << points[j], 1.0;

  Eigen::VectorXd u = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
  Eigen::VectorXd omega(static_cast<Eigen::Index>(n));
  const double target = kDim + 1.0;

  bool converged = false;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const Eigen::Matrix3d x = lifted * u.asDiagonal() * lifted.transpose();
    const Eigen::Matrix3d xinv = x.inverse();
    omega = (lifted.transpose() * xinv).cwiseProduct(lifted.transpose()).rowwise().sum();

    Eigen::Index up = 0;
    const double omega_max = omega.maxCoeff(&up);
    Eigen::Index down = -1;
    double omega_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < omega.size(); ++j) {
      if (u(j) > 0.0 && omega(j) < omega_min) {
        omega_min = omega(j);
        down = j;
      }
    }
    const double eps_plus = omega_max / target - 1.0;
    const double eps_minus = 1.0 - omega_min / target;
    if (eps_plus <= options.tolerance && eps_minus <= options.tolerance) {
      converged = true;
      break;
    }
    if (eps_plus > eps_minus) {
      const double step = (omega_max - target) / (target * (omega_max - 1.0));
      u *= (1.0 - step);
      u(up) += step;
    } else {
      double step = (target - omega_min) / (target * (omega_min - 1.0));
      const double cap = u(down) / (1.0 - u(down));
      step = std::min(step, cap);
      u *= (1.0 + step);
      u(down) -= step;
      if (step == cap) u(down) = 0.0;
    }
  }
  if (!converged) fail(ErrorKind::NumericalFailure, "mvee iteration did not converge");

  Point2 center = Point2::Zero();
  for (std::size_t j = 0; j < n; ++j) center += u(static_cast<Eigen::Index>(j)) * points[j];
  Matrix2 spread = Matrix2::Zero();
  for (std::size_t j = 0; j < n; ++j) {
    const Point2 d = points[j] - center;
    spread += u(static_cast<Eigen::Index>(j)) * d * d.transpose();
  }
  Matrix2 axes = detail::symmetric_sqrt(kDim * spread);
  const Matrix2 inv = axes.inverse();
  double gauge = 0.0;
  for (const auto& p : points) gauge = std::max(gauge, (inv * (p - center)).norm());
  axes *= gauge;
  return {center, axes};
}

}  // namespace christoffel
