#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "christoffel/basis.hpp"
#include "christoffel/error.hpp"
#include "christoffel/geometry.hpp"

namespace christoffel {

inline constexpr double kDefaultPivotTolerance = 1e-13;

/// Polynomials of total degree <= n orthonormal for a positive discrete
/// measure sum_i w_i delta(x_i), built degree by degree (block Stieltjes).
/// Block t is the part of [x Q_{t-1}, y Q_{t-1}] orthogonal to all lower
/// blocks (twice-orthogonalized); it has rank t + 1 and its dominant left
/// singular vectors are the new orthonormal block.
///
/// Evaluation at a new point replays both multiplications and solves the
/// overdetermined relation in the least-squares sense. Using x alone (the
/// usual Arnoldi recurrence) loses about one digit per degree in 2D; the
/// joint x/y solve stays at round-off through degree 30.
class DiscreteOrthonormalBasis {
 public:
  DiscreteOrthonormalBasis(int degree, const std::vector<Point2>& nodes, const std::vector<double>& weights,
                           const AffineMap2& pre = AffineMap2::identity(),
                           double pivot_tolerance = kDefaultPivotTolerance)
      : degree_(degree), pre_(pre) {
    if (degree < 0) fail(ErrorKind::InvalidArgument, "degree must be non-negative");
    if (nodes.size() != weights.size() || nodes.empty()) fail(ErrorKind::InvalidArgument, "nodes and weights mismatch");
    const auto n = static_cast<Eigen::Index>(nodes.size());
    const auto dim = static_cast<Eigen::Index>(polynomial_space_dim(degree));
    if (n < dim) fail(ErrorKind::IllConditioned, "fewer nodes than polynomials");

    Eigen::VectorXd xs(n);
    Eigen::VectorXd ys(n);
    Eigen::VectorXd sw(n);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = weights[static_cast<std::size_t>(i)];
      if (!(w > 0.0)) fail(ErrorKind::InvalidArgument, "weights must be positive");
      const Point2 p = pre_(nodes[static_cast<std::size_t>(i)]);
      xs(i) = p.x();
      ys(i) = p.y();
      sw(i) = std::sqrt(w);
      total += w;
    }

    q_.resize(n, dim);
    q0_ = 1.0 / std::sqrt(total);
    q_.col(0) = sw * q0_;
    for (int t = 1; t <= degree; ++t) {
      const Eigen::Index start = offset(t);
      const Eigen::Index prev = offset(t - 1);
      const Eigen::Index width = t + 1;
      Eigen::MatrixXd v(n, 2 * t);
      v.leftCols(t) = xs.asDiagonal() * q_.middleCols(prev, t);
      v.rightCols(t) = ys.asDiagonal() * q_.middleCols(prev, t);

      auto lower = q_.leftCols(start);
      Eigen::MatrixXd c = lower.transpose() * v;
      v.noalias() -= lower * c;
      const Eigen::MatrixXd c2 = lower.transpose() * v;
      v.noalias() -= lower * c2;
      c += c2;

      // v has rank t + 1: its leading right singular directions span the new block
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
      const Eigen::MatrixXd r = qr.matrixQR().topRows(2 * t).triangularView<Eigen::Upper>();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Eigen::VectorXd sigma = svd.singularValues();
      if (!(sigma(width - 1) * sigma(width - 1) >= pivot_tolerance * sigma(0) * sigma(0))) {
        fail(ErrorKind::IllConditioned, "orthogonalization pivot below tolerance");
      }
      const Eigen::MatrixXd right = svd.matrixV().leftCols(width);
      const Eigen::MatrixXd qblock = (qr.householderQ() * Eigen::MatrixXd::Identity(n, 2 * t)) * svd.matrixU().leftCols(width);
      q_.middleCols(start, width) = qblock;
      coupling_.push_back(std::move(c));
      // q_t(x) = diag(1/sigma) right^T (v(x) - c^T q_{<t}(x))
      diag_.push_back(sigma.head(width).cwiseInverse().asDiagonal() * right.transpose());
    }
    sqrt_weights_ = std::move(sw);
  }

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] std::size_t size() const { return polynomial_space_dim(degree_); }

  /// Values of the basis at x (in the caller's coordinates).
  void evaluate(const Point2& x, std::span<double> out) const {
    const Point2 p = pre_(x);
    Eigen::Map<Eigen::VectorXd> vals(out.data(), static_cast<Eigen::Index>(size()));
    vals(0) = q0_;
    for (int t = 1; t <= degree_; ++t) {
      const Eigen::Index start = offset(t);
      const Eigen::Index prev = offset(t - 1);
      const Eigen::Index width = t + 1;
      Eigen::VectorXd v(2 * t);
      v.head(t) = p.x() * vals.segment(prev, t);
      v.tail(t) = p.y() * vals.segment(prev, t);
      v.noalias() -= coupling_[static_cast<std::size_t>(t - 1)].transpose() * vals.head(start);
      vals.segment(start, width).noalias() = diag_[static_cast<std::size_t>(t - 1)] * v;
    }
  }

  [[nodiscard]] Eigen::VectorXd operator()(const Point2& x) const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(size()));
    evaluate(x, std::span<double>(v.data(), size()));
    return v;
  }

  /// Basis values at the construction nodes (row i at node i).
  [[nodiscard]] Eigen::MatrixXd node_values() const { return sqrt_weights_.cwiseInverse().asDiagonal() * q_; }

  /// Weighted values sqrt(w_i) q_j(x_i); columns are orthonormal.
  [[nodiscard]] const Eigen::MatrixXd& weighted_values() const { return q_; }

  /// Release the node-sized storage once only pointwise evaluation is needed.
  void drop_node_values() {
    q_.resize(0, 0);
    sqrt_weights_.resize(0);
  }

 private:
  static Eigen::Index offset(int t) { return static_cast<Eigen::Index>(t) * (t + 1) / 2; }

  int degree_;
  AffineMap2 pre_;
  double q0_ = 0.0;
  Eigen::MatrixXd q_;
  Eigen::VectorXd sqrt_weights_;
  std::vector<Eigen::MatrixXd> coupling_;
  std::vector<Eigen::MatrixXd> diag_;
};

}  // namespace christoffel
