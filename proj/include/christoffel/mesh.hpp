#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "christoffel/christoffel.hpp"
#include "christoffel/error.hpp"
#include "christoffel/geometry.hpp"
#include "christoffel/parallel.hpp"
#include "christoffel/quadrature.hpp"
#include "christoffel/tchakaloff.hpp"

namespace christoffel {

inline constexpr int kMaxMeshDegree = 15;
inline constexpr int kMinSampleDensity = 32;
inline constexpr int kDefaultSampleDensity = 64;
inline constexpr int kVerifyLattice = 128;
inline constexpr int kVerifyEdgeSamples = 256;

/// sqrt(lambda_{(m-1)n}(xi) / lambda_{mn}(xi)): for p in P_n and any positive
/// rule exact on P_{2mn} with nodes Y, |p(xi)| <= ratio * max_Y |p|.
inline double norming_ratio(const ChristoffelEvaluator& coarse, const ChristoffelEvaluator& fine, const Point2& xi) {
  return std::sqrt(fine.kernel_diagonal(xi) / coarse.kernel_diagonal(xi));
}

inline double norming_ratio(const ConvexPolygon& poly, int n, int m, const Point2& xi) {
  if (n < 0 || m < 1) fail(ErrorKind::InvalidArgument, "need n >= 0 and m >= 1");
  if (m * n > kMaxChristoffelDegree) fail(ErrorKind::DegreeTooLarge, "m n above 30");
  if (!poly.contains(xi, 1e-12)) fail(ErrorKind::Outside, "xi is outside the polygon");
  const NormalizedBody body = john_normalize(poly);
  return norming_ratio(ChristoffelEvaluator(body, (m - 1) * n), ChristoffelEvaluator(body, m * n), xi);
}

struct PolynomialMesh {
  int n = 0;
  int m = 2;
  std::vector<Point2> points;
  std::vector<double> weights;
  /// Largest norming ratio seen on the sample set; certified by sampling only.
  double nu_bound = 1.0;
  int sample_density = kDefaultSampleDensity;
  int exact_degree = 0;

  [[nodiscard]] std::size_t cardinality() const { return points.size(); }
};

/// `per_edge` points on each edge, vertices included once.
inline std::vector<Point2> boundary_samples(const ConvexPolygon& poly, int per_edge) {
  std::vector<Point2> pts;
  for (std::size_t e = 0; e < poly.size(); ++e) {
    const Point2 a = poly.vertex(e);
    const Point2 b = poly.vertex(e + 1);
    for (int i = 0; i < per_edge; ++i) pts.push_back(a + (b - a) * (static_cast<double>(i) / per_edge));
  }
  return pts;
}

/// Points of a density x density lattice on the bounding box strictly inside
/// the polygon.
inline std::vector<Point2> interior_lattice(const ConvexPolygon& poly, int density) {
  GridSpec grid{density, density, std::nullopt};
  std::vector<Point2> pts;
  for (const auto& p : lattice_points(grid, poly.bounding_box())) {
    if (poly.margin(p) > 0.0) pts.push_back(p);
  }
  return pts;
}

/// Compressed positive rule exact on P_{2mn}; its nodes norm P_n with the
/// constant max_xi norming_ratio(xi), sampled on an interior lattice plus
/// `density` points per edge.
inline PolynomialMesh build_mesh(const ConvexPolygon& poly, int n, int m = 2, int sample_density = kDefaultSampleDensity,
                                 const CompressionOptions& options = {}) {
  if (n < 0 || m < 1) fail(ErrorKind::InvalidArgument, "need n >= 0 and m >= 1");
  if (m * n > kMaxMeshDegree) fail(ErrorKind::DegreeTooLarge, "mesh needs m n <= 15");
  if (sample_density < kMinSampleDensity) fail(ErrorKind::InvalidArgument, "sample density must be >= 32");

  PolynomialMesh mesh;
  mesh.n = n;
  mesh.m = m;
  mesh.sample_density = sample_density;
  mesh.exact_degree = 2 * m * n;

  const Quadrature fine = fine_quadrature(poly, mesh.exact_degree);
  Quadrature rule = tchakaloff_compress(fine, poly, mesh.exact_degree, options);
  mesh.points = std::move(rule.nodes);
  mesh.weights = std::move(rule.weights);

  if (n == 0) return mesh;
  const NormalizedBody body = john_normalize(poly);
  const EvaluatorOptions eval_options{options.pivot_tolerance};
  const ChristoffelEvaluator coarse(body, (m - 1) * n, eval_options);
  const ChristoffelEvaluator sharp(body, m * n, eval_options);
  std::vector<Point2> samples = interior_lattice(poly, sample_density);
  const std::vector<Point2> edge = boundary_samples(poly, sample_density);
  samples.insert(samples.end(), edge.begin(), edge.end());
  std::vector<double> ratio(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) { ratio[i] = norming_ratio(coarse, sharp, samples[i]); });
  mesh.nu_bound = std::max(1.0, *std::max_element(ratio.begin(), ratio.end()));
  return mesh;
}

/// Precomputed values of an orthonormal basis of P_n on the verification set
/// (dense lattice plus edge samples) and on the mesh.
class MeshVerifier {
 public:
  MeshVerifier(const ConvexPolygon& poly, int n, const std::vector<Point2>& mesh_points,
               int lattice = kVerifyLattice, int per_edge = kVerifyEdgeSamples)
      : evaluator_(poly, n) {
    if (mesh_points.empty()) fail(ErrorKind::InvalidArgument, "empty mesh");
    std::vector<Point2> test = interior_lattice(poly, lattice);
    const std::vector<Point2> edge = boundary_samples(poly, per_edge);
    test.insert(test.end(), edge.begin(), edge.end());
    test_ = values(test);
    mesh_ = values(mesh_points);
  }

  [[nodiscard]] std::size_t dimension() const { return evaluator_.dimension(); }

  /// max |p| on the verification set over max |p| on the mesh.
  [[nodiscard]] double ratio(const Eigen::VectorXd& coefficients) const {
    const double top = (test_ * coefficients).cwiseAbs().maxCoeff();
    const double bottom = (mesh_ * coefficients).cwiseAbs().maxCoeff();
    return top / bottom;
  }

 private:
  [[nodiscard]] Eigen::MatrixXd values(const std::vector<Point2>& pts) const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(dimension()));
    for (std::size_t i = 0; i < pts.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = evaluator_.orthonormal_values(pts[i]).transpose();
    return out;
  }

  ChristoffelEvaluator evaluator_;
  Eigen::MatrixXd test_;
  Eigen::MatrixXd mesh_;
};

/// Standard normal coefficients for trial `trial`, independent of scheduling.
inline Eigen::VectorXd trial_coefficients(std::size_t dim, std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  Eigen::VectorXd c(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = normal(rng);
  return c;
}

/// Largest observed ||p||_D / ||p||_mesh over `trials` random p in P_n.
inline double verify_mesh(const ConvexPolygon& poly, const PolynomialMesh& mesh, int trials, std::uint64_t seed) {
  if (trials < 100) fail(ErrorKind::InvalidArgument, "verify_mesh needs at least 100 trials");
  const MeshVerifier verifier(poly, mesh.n, mesh.points);
  std::vector<double> ratio(static_cast<std::size_t>(trials));
  parallel_for(ratio.size(), [&](std::size_t t) {
    ratio[t] = verifier.ratio(trial_coefficients(verifier.dimension(), seed, t));
  });
  return *std::max_element(ratio.begin(), ratio.end());
}

}  // namespace christoffel
