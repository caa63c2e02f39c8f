#pragma once

#include <vector>

#include <Eigen/Dense>

#include "christoffel/basis.hpp"
#include "christoffel/error.hpp"
#include "christoffel/geometry.hpp"
#include "christoffel/nnls.hpp"
#include "christoffel/normalize.hpp"
#include "christoffel/orthopoly.hpp"
#include "christoffel/quadrature.hpp"

namespace christoffel {

inline constexpr double kCompressionTarget = 1e-10;
inline constexpr double kCompressionAcceptance = 1e-8;

struct CompressionOptions {
  /// NNLS stops once the moment residual is below target * |b|.
  double target = kCompressionTarget;
  /// Larger relative residuals raise CompressionFailed.
  double acceptance = kCompressionAcceptance;
  double pivot_tolerance = kDefaultPivotTolerance;
};

/// Basis of P_degree orthonormal for the discrete measure of `reference`,
/// in the John position of `poly` for conditioning.
inline DiscreteOrthonormalBasis reference_basis(const ConvexPolygon& poly, int degree, const Quadrature& reference,
                                                double pivot_tolerance = kDefaultPivotTolerance) {
  return DiscreteOrthonormalBasis(degree, reference.nodes, reference.weights, john_normalize(poly).to_normalized,
                                  pivot_tolerance);
}

inline Eigen::VectorXd discrete_moments(const DiscreteOrthonormalBasis& basis, const Quadrature& rule) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < rule.size(); ++i) b += rule.weights[i] * basis(rule.nodes[i]);
  return b;
}

/// |b(candidate) - b(reference)| / |b(reference)| with b the moment vector in
/// the basis orthonormal for `reference`.
inline double compression_residual(const ConvexPolygon& poly, const Quadrature& reference, const Quadrature& candidate,
                                   int degree) {
  const DiscreteOrthonormalBasis basis = reference_basis(poly, degree, reference);
  const Eigen::VectorXd b = discrete_moments(basis, reference);
  return (discrete_moments(basis, candidate) - b).norm() / b.norm();
}

/// Positive rule with at most dim P_degree nodes taken from `quad` and the
/// same integrals on P_degree (Tchakaloff). Solved as NNLS on the
/// moment-matching system, whose vertex solutions have small support.
inline Quadrature tchakaloff_compress(const Quadrature& quad, const ConvexPolygon& poly, int exact_degree,
                                      const CompressionOptions& options = {}) {
  if (!(options.target > 0.0) || !(options.acceptance >= options.target)) {
    fail(ErrorKind::InvalidArgument, "need 0 < target <= acceptance");
  }
  if (exact_degree < 0) fail(ErrorKind::InvalidArgument, "degree must be non-negative");
  if (quad.exact_degree < exact_degree) fail(ErrorKind::InvalidArgument, "input rule is not exact for the target degree");
  const std::size_t dim = polynomial_space_dim(exact_degree);
  if (quad.size() <= dim) {
    Quadrature same = quad;
    same.exact_degree = exact_degree;
    return same;
  }

  const DiscreteOrthonormalBasis basis = reference_basis(poly, exact_degree, quad, options.pivot_tolerance);
  const Eigen::MatrixXd a = basis.node_values().transpose();
  const Eigen::VectorXd b = a * Eigen::Map<const Eigen::VectorXd>(quad.weights.data(), static_cast<Eigen::Index>(quad.size()));

  NnlsOptions nnls_options;
  nnls_options.residual_target = options.target;
  const NnlsResult sol = nnls(a, b, nnls_options);
  if (!(sol.residual <= options.acceptance * b.norm())) {
    fail(ErrorKind::CompressionFailed, "nonnegative residual floor not reached; retry with a finer input rule");
  }

  Quadrature out;
  out.exact_degree = exact_degree;
  for (Eigen::Index j = 0; j < sol.x.size(); ++j) {
    if (sol.x(j) > 0.0) {
      out.nodes.push_back(quad.nodes[static_cast<std::size_t>(j)]);
      out.weights.push_back(sol.x(j));
    }
  }
  if (out.size() > dim) fail(ErrorKind::CompressionFailed, "support exceeds the Tchakaloff bound");
  return out;
}

}  // namespace christoffel
