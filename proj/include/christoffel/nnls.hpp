#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "christoffel/error.hpp"

namespace christoffel {

struct NnlsOptions {
  /// Stop once |Ax - b| <= residual_target * |b|.
  double residual_target = 1e-10;
  /// Outer iterations allowed, as a multiple of the column count.
  int iteration_factor = 3;
};

struct NnlsResult {
  Eigen::VectorXd x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

/// Thin QR of a growing/shrinking column subset of A with explicit Q.
/// Columns enter by Householder reflection and leave by Givens sweeps,
/// so each update costs O(m^2) instead of a fresh factorization.
class UpdatableQr {
 public:
  UpdatableQr(Eigen::Index rows, const Eigen::VectorXd& rhs)
      : q_(Eigen::MatrixXd::Identity(rows, rows)), r_(Eigen::MatrixXd::Zero(rows, rows)), qtb_(rhs) {}

  [[nodiscard]] Eigen::Index size() const { return k_; }

  /// Returns false (and leaves the factorization alone) if the column is
  /// numerically dependent on the current ones.
  bool append(const Eigen::VectorXd& column) {
    const Eigen::Index m = q_.rows();
    if (k_ >= m) return false;
    Eigen::VectorXd v = q_.transpose() * column;
    const double tail = v.tail(m - k_).norm();
    if (!(tail > 1e-12 * column.norm())) return false;
    Eigen::VectorXd h = v.tail(m - k_);
    const double alpha = h(0) >= 0.0 ? -tail : tail;
    h(0) -= alpha;
    const double hh = h.squaredNorm();
    if (hh > 0.0) {
      auto qtail = q_.rightCols(m - k_);
      const Eigen::VectorXd qh = qtail * h;
      qtail.noalias() -= (2.0 / hh) * qh * h.transpose();
      auto btail = qtb_.tail(m - k_);
      btail -= (2.0 * h.dot(btail) / hh) * h;
    }
    r_.col(k_).head(k_) = v.head(k_);
    r_(k_, k_) = alpha;
    ++k_;
    return true;
  }

  void remove(Eigen::Index j) {
    for (Eigen::Index c = j; c + 1 < k_; ++c) r_.col(c).head(k_) = r_.col(c + 1).head(k_);
    r_.col(k_ - 1).setZero();
    for (Eigen::Index i = j; i + 1 < k_; ++i) {
      Eigen::JacobiRotation<double> g;
      g.makeGivens(r_(i, i), r_(i + 1, i));
      r_.applyOnTheLeft(i, i + 1, g.adjoint());
      q_.applyOnTheRight(i, i + 1, g);
      qtb_.applyOnTheLeft(i, i + 1, g.adjoint());
      r_(i + 1, i) = 0.0;
    }
    --k_;
  }

  /// Least-squares solution over the current columns.
  [[nodiscard]] Eigen::VectorXd solve() const {
    return r_.topLeftCorner(k_, k_).triangularView<Eigen::Upper>().solve(qtb_.head(k_));
  }

 private:
  Eigen::MatrixXd q_;
  Eigen::MatrixXd r_;
  Eigen::VectorXd qtb_;
  Eigen::Index k_ = 0;
};

}  // namespace detail

/// Lawson-Hanson active-set solver for min |Ax - b| subject to x >= 0.
/// The solution is a vertex: at most rank(A) entries are positive.
inline NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const NnlsOptions& options = {}) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (b.size() != m) fail(ErrorKind::InvalidArgument, "nnls: size mismatch");

  NnlsResult out;
  out.x = Eigen::VectorXd::Zero(n);
  if (n == 0 || m == 0) {
    out.residual = b.norm();
    out.converged = out.residual == 0.0;
    return out;
  }
  const double bnorm = b.norm();
  const double target = options.residual_target * std::max(bnorm, std::numeric_limits<double>::min());
  const double max_col = a.colwise().norm().maxCoeff();

  detail::UpdatableQr qr(m, b);
  std::vector<Eigen::Index> passive;
  std::vector<char> in_passive(static_cast<std::size_t>(n), 0);
  std::vector<char> rejected(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd resid = b;
  const int max_iter = options.iteration_factor * static_cast<int>(std::max<Eigen::Index>(n, 1));

  while (out.iterations < max_iter) {
    out.residual = resid.norm();
    if (out.residual <= target) break;
    const Eigen::VectorXd w = a.transpose() * resid;
    Eigen::Index best = -1;
    double wmax = 1e-14 * max_col * out.residual;
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto sj = static_cast<std::size_t>(j);
      if (!in_passive[sj] && !rejected[sj] && w(j) > wmax) {
        wmax = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    ++out.iterations;
    if (!qr.append(a.col(best))) {
      rejected[static_cast<std::size_t>(best)] = 1;
      continue;
    }
    passive.push_back(best);
    in_passive[static_cast<std::size_t>(best)] = 1;

    // inner loop: step back toward feasibility until the LS solution is positive
    while (true) {
      const Eigen::VectorXd z = qr.solve();
      bool feasible = true;
      double step = 1.0;
      std::size_t blocking = 0;
      for (std::size_t i = 0; i < passive.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        if (z(ii) <= 0.0) {
          const double xi = out.x(passive[i]);
          const double t = xi / (xi - z(ii));
          if (feasible || t < step) {
            step = t;
            blocking = i;
          }
          feasible = false;
        }
      }
      if (feasible) {
        for (std::size_t i = 0; i < passive.size(); ++i) out.x(passive[i]) = z(static_cast<Eigen::Index>(i));
        break;
      }
      for (std::size_t i = 0; i < passive.size(); ++i) {
        double& xi = out.x(passive[i]);
        xi += step * (z(static_cast<Eigen::Index>(i)) - xi);
      }
      out.x(passive[blocking]) = 0.0;
      // drop every passive index that hit zero, last first so positions stay valid
      for (std::size_t i = passive.size(); i-- > 0;) {
        if (out.x(passive[i]) <= 0.0) {
          out.x(passive[i]) = 0.0;
          in_passive[static_cast<std::size_t>(passive[i])] = 0;
          qr.remove(static_cast<Eigen::Index>(i));
          passive.erase(passive.begin() + static_cast<std::ptrdiff_t>(i));
        }
      }
      if (passive.empty()) break;
    }
    resid = b - a * out.x;
  }
  out.residual = (b - a * out.x).norm();
  out.converged = out.residual <= target;
  return out;
}

}  // namespace christoffel
