#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "christoffel/basis.hpp"
#include "christoffel/bounds.hpp"
#include "christoffel/error.hpp"
#include "christoffel/geometry.hpp"
#include "christoffel/normalize.hpp"
#include "christoffel/orthopoly.hpp"
#include "christoffel/parallel.hpp"
#include "christoffel/quadrature.hpp"

namespace christoffel {

inline constexpr int kMaxChristoffelDegree = 30;

struct EvaluatorOptions {
  /// Smallest admissible squared orthogonalization pivot, relative to the
  /// squared norm of the candidate column.
  double pivot_tolerance = kDefaultPivotTolerance;
};

/// Christoffel function lambda_n(., D) of a convex polygon D.
///
/// Works in the John position of D: a basis of P_n orthonormal in L2 of the
/// normalized polygon is built against the positive fan quadrature exact for
/// degree 2n (so the discrete and continuous inner products agree on P_n).
/// Then lambda_n(x) = 1 / (|det T| |q(Tx)|^2), with q the basis vector and T
/// the normalizing map (affine covariance of lambda).
class ChristoffelEvaluator {
 public:
  ChristoffelEvaluator(const ConvexPolygon& poly, int degree, const EvaluatorOptions& options = {})
      : ChristoffelEvaluator(john_normalize(poly), degree, options) {}

  ChristoffelEvaluator(NormalizedBody body, int degree, const EvaluatorOptions& options = {})
      : body_(std::move(body)),
        degree_(check_degree(degree)),
        scale_(std::abs(body_.to_normalized.det())),
        basis_(make_basis(body_.polygon, degree_, options)) {}

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] std::size_t dimension() const { return basis_.size(); }
  [[nodiscard]] const NormalizedBody& body() const { return body_; }
  /// Orthonormal basis on the normalized polygon.
  [[nodiscard]] const DiscreteOrthonormalBasis& basis() const { return basis_; }
  /// |det| of the normalizing map.
  [[nodiscard]] double scale() const { return scale_; }

  /// Values at x of an L2(D)-orthonormal basis of polynomials of degree <= n.
  [[nodiscard]] Eigen::VectorXd orthonormal_values(const Point2& x) const {
    return basis_(body_.to_normalized(x)) * std::sqrt(scale_);
  }

  /// Reproducing kernel diagonal K_n(x, x) = 1 / lambda_n(x).
  [[nodiscard]] double kernel_diagonal(const Point2& x) const { return orthonormal_values(x).squaredNorm(); }

  [[nodiscard]] double operator()(const Point2& x) const { return 1.0 / kernel_diagonal(x); }
  [[nodiscard]] double lambda(const Point2& x) const { return (*this)(x); }

 private:
  static int check_degree(int degree) {
    if (degree < 0) fail(ErrorKind::InvalidArgument, "degree must be non-negative");
    if (degree > kMaxChristoffelDegree) fail(ErrorKind::DegreeTooLarge, "Christoffel degree above 30");
    return degree;
  }

  static DiscreteOrthonormalBasis make_basis(const ConvexPolygon& poly, int degree, const EvaluatorOptions& options) {
    const Quadrature quad = fine_quadrature(poly, 2 * degree);
    DiscreteOrthonormalBasis basis(degree, quad.nodes, quad.weights, AffineMap2::identity(), options.pivot_tolerance);
    basis.drop_node_values();
    return basis;
  }

  NormalizedBody body_;
  int degree_;
  double scale_;
  DiscreteOrthonormalBasis basis_;
};

inline double christoffel_eval(const ConvexPolygon& poly, int n, const Point2& x) {
  return ChristoffelEvaluator(poly, n)(x);
}

/// lambda_n(x) together with n^-2 times the lower/upper certificate values at
/// the retracted point, all in the input polygon's coordinates.
struct TwoSidedEstimate {
  double lambda = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  Point2 retracted = Point2::Zero();
  int case_lower = 0;
  int case_upper = 0;
};

/// Lower and upper certificates at the tau_n-retracted point, mapped back to
/// the input polygon's coordinates (values are not divided by n^2).
struct CertificatePair {
  BoundCertificate lower;
  BoundCertificate upper;
  Point2 retracted = Point2::Zero();
};

inline CertificatePair certificates_at(const ChristoffelEvaluator& ev, const Point2& x) {
  const int n = ev.degree();
  if (n < 1) fail(ErrorKind::InvalidArgument, "two-sided estimate needs n >= 1");
  const NormalizedBody& body = ev.body();
  const Point2 y = body.to_normalized(x);
  if (!body.polygon.contains(y, 1e-12)) fail(ErrorKind::Outside, "point is outside the polygon");
  const Point2 r = tau_retract(body, y, n);
  return {transform_certificate(lower_certificate(body, r), body.from_normalized),
          transform_certificate(upper_certificate(body, r), body.from_normalized), body.from_normalized(r)};
}

inline TwoSidedEstimate christoffel_two_sided(const ChristoffelEvaluator& ev, const Point2& x) {
  const CertificatePair certs = certificates_at(ev, x);
  const double n2 = static_cast<double>(ev.degree()) * static_cast<double>(ev.degree());

  TwoSidedEstimate out;
  out.lambda = ev(x);
  out.lower = certs.lower.value / n2;
  out.upper = certs.upper.value / n2;
  out.retracted = certs.retracted;
  out.case_lower = certs.lower.case_tag;
  out.case_upper = certs.upper.case_tag;
  return out;
}

inline TwoSidedEstimate christoffel_two_sided(const ConvexPolygon& poly, int n, const Point2& x) {
  return christoffel_two_sided(ChristoffelEvaluator(poly, n), x);
}

/// Comparator n^-2 (1 - |z|)^{1/2} for the unit disk, valid for
/// |z| <= 1 - 1/(64 n^2).
inline double reference_disk(const Point2& z, int n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "n must be >= 1");
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  const double r = z.norm();
  if (r > 1.0 - 1.0 / (64.0 * n2) + 1e-15) fail(ErrorKind::OutOfRegime, "point too close to the unit circle");
  return std::sqrt(1.0 - r) / n2;
}

/// Comparator n^-2 sqrt(z1 z2) for the unit square, valid for
/// z in [1/(128 n^2), 1/2]^2.
inline double reference_square_upper(const Point2& z, int n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "n must be >= 1");
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  const double lo = 1.0 / (128.0 * n2);
  auto inside = [&](double t) { return t >= lo * (1.0 - 1e-15) && t <= 0.5 * (1.0 + 1e-15); };
  if (!inside(z.x()) || !inside(z.y())) fail(ErrorKind::OutOfRegime, "point outside [1/(128 n^2), 1/2]^2");
  return std::sqrt(z.x() * z.y()) / n2;
}

inline constexpr std::size_t kMaxGridCells = 1'000'000;

/// Rectangular lattice of width x height points spanning `window`
/// (endpoints included), or the polygon's bounding box when unset.
struct GridSpec {
  int width = 0;
  int height = 0;
  std::optional<BoundingBox> window;
};

struct FieldRow {
  Point2 point;
  double lambda = 0.0;
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();
  int case_lower = 0;
  int case_upper = 0;
};

inline std::vector<Point2> lattice_points(const GridSpec& grid, const BoundingBox& box) {
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(grid.width) * static_cast<std::size_t>(grid.height));
  auto coord = [](double lo, double hi, int i, int count) {
    return count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  };
  for (int j = 0; j < grid.height; ++j) {
    for (int i = 0; i < grid.width; ++i) {
      pts.emplace_back(coord(box.lo.x(), box.hi.x(), i, grid.width), coord(box.lo.y(), box.hi.y(), j, grid.height));
    }
  }
  return pts;
}

/// lambda and the two-sided bounds on the interior lattice points, row-major
/// (y outer, x inner). For n = 0 the bounds are left as NaN.
inline std::vector<FieldRow> christoffel_field(const ConvexPolygon& poly, int n, const GridSpec& grid,
                                               const EvaluatorOptions& options = {}) {
  if (grid.width < 1 || grid.height < 1) fail(ErrorKind::InvalidArgument, "grid must be at least 1x1");
  if (static_cast<std::size_t>(grid.width) * static_cast<std::size_t>(grid.height) > kMaxGridCells) {
    fail(ErrorKind::GridTooLarge, "grid has more than 1e6 cells");
  }
  const ChristoffelEvaluator ev(poly, n, options);
  std::vector<Point2> inside;
  for (const auto& p : lattice_points(grid, grid.window.value_or(poly.bounding_box()))) {
    if (poly.margin(p) > 0.0) inside.push_back(p);
  }
  std::vector<FieldRow> rows(inside.size());
  parallel_for(inside.size(), [&](std::size_t i) {
    FieldRow& row = rows[i];
    row.point = inside[i];
    if (n == 0) {
      row.lambda = ev(inside[i]);
      return;
    }
    const TwoSidedEstimate est = christoffel_two_sided(ev, inside[i]);
    row.lambda = est.lambda;
    row.lower = est.lower;
    row.upper = est.upper;
    row.case_lower = est.case_lower;
    row.case_upper = est.case_upper;
  });
  return rows;
}

}  // namespace christoffel
