#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "christoffel/chart.hpp"
#include "christoffel/corpus.hpp"
#include "christoffel/geometry.hpp"
#include "christoffel/mvee.hpp"
#include "christoffel/normalize.hpp"
#include "christoffel/shapes.hpp"

using namespace christoffel;

namespace {

NormalizedBody identity_body(const ConvexPolygon& poly) {
  return {poly, AffineMap2::identity(), AffineMap2::identity()};
}

ConvexPolygon box(double lo, double hi) { return ConvexPolygon({{lo, lo}, {hi, lo}, {hi, hi}, {lo, hi}}); }

bool in_normal_position(const ConvexPolygon& poly) {
  for (const auto& h : poly.halfplanes()) {
    if (h.offset < 1.0 - 1e-7) return false;
  }
  return poly.max_vertex_norm() <= 2.0 + 1e-7;
}

}  // namespace

TEST(Polygon, RejectsBadVertexChains) {
  EXPECT_THROW(ConvexPolygon({{0, 0}, {1, 0}}), Error);
  EXPECT_THROW(ConvexPolygon({{0, 0}, {0, 1}, {1, 0}}), Error);  // clockwise
  EXPECT_THROW(ConvexPolygon({{0, 0}, {1, 0}, {2, 0}, {1, 1}}), Error);  // collinear
  EXPECT_THROW(ConvexPolygon({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), Error);  // repeated
  EXPECT_THROW(ConvexPolygon({{0, 0}, {1, 0}, {NAN, 1}}), Error);
  // pentagram: turns left at every vertex but winds twice
  std::vector<Point2> star;
  for (int i = 0; i < 5; ++i) {
    const double t = 4.0 * std::numbers::pi * i / 5.0;
    star.emplace_back(std::cos(t), std::sin(t));
  }
  EXPECT_THROW(ConvexPolygon{star}, Error);
  try {
    ConvexPolygon({{0, 0}, {0, 1}, {1, 0}});
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidPolygon);
  }
}

TEST(Polygon, AreaCentroidMargin) {
  const ConvexPolygon sq = box(0.0, 2.0);
  EXPECT_DOUBLE_EQ(sq.area(), 4.0);
  EXPECT_NEAR(sq.centroid().x(), 1.0, 1e-15);
  EXPECT_NEAR(sq.margin({1.0, 0.5}), 0.5, 1e-15);
  EXPECT_LT(sq.margin({3.0, 1.0}), 0.0);
  const ConvexPolygon cw = ConvexPolygon::from_any_orientation({{0, 0}, {0, 1}, {1, 0}});
  EXPECT_NEAR(cw.area(), 0.5, 1e-15);
}

TEST(AffineMap, DeterminantOfCompositionAndInverse) {
  corpus::Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const AffineMap2 t = corpus::random_affine(rng);
    const AffineMap2 s = corpus::random_affine(rng);
    const double prod = t.det() * s.det();
    EXPECT_LE(std::abs((t * s).det() - prod), 1e-12 * std::abs(prod));
    const Point2 p(corpus::uniform(rng, -1, 1), corpus::uniform(rng, -1, 1));
    EXPECT_NEAR((t.inverse()(t(p)) - p).norm(), 0.0, 1e-10);
  }
  EXPECT_THROW(AffineMap2(Matrix2::Zero(), Point2::Zero()), Error);
}

TEST(AffineMap, TransformedPolygonAreaScales) {
  corpus::Rng rng(11);
  const ConvexPolygon poly = corpus::random_polygon(rng, 5, 9);
  const AffineMap2 t = corpus::random_affine(rng);
  EXPECT_NEAR(poly.transformed(t).area(), poly.area() * std::abs(t.det()), 1e-10 * poly.area() * std::abs(t.det()));
  Matrix2 flip;
  flip << -1, 0, 0, 1;
  EXPECT_NEAR(poly.transformed(AffineMap2::linear_map(flip)).area(), poly.area(), 1e-12);
}

TEST(Mvee, SquareVerticesGiveCircumscribedCircle) {
  const std::vector<Point2> pts{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  const Ellipse e = mvee(pts, {1e-10, 100000});
  EXPECT_NEAR(e.center.norm(), 0.0, 1e-8);
  const Matrix2 shape = e.axes * e.axes.transpose();
  EXPECT_NEAR(shape(0, 0), 2.0, 1e-6);
  EXPECT_NEAR(shape(1, 1), 2.0, 1e-6);
  EXPECT_NEAR(shape(0, 1), 0.0, 1e-6);
}

TEST(Mvee, EquilateralTriangleGivesUnitCircle) {
  std::vector<Point2> pts;
  for (int i = 0; i < 3; ++i) pts.emplace_back(std::cos(2 * std::numbers::pi * i / 3), std::sin(2 * std::numbers::pi * i / 3));
  const Ellipse e = mvee(pts, {1e-10, 100000});
  EXPECT_NEAR(e.center.norm(), 0.0, 1e-7);
  EXPECT_NEAR(std::abs(e.axes.determinant()), 1.0, 1e-6);
  for (const auto& p : pts) EXPECT_NEAR(e.gauge(p), 1.0, 1e-6);
}

TEST(Mvee, PointsOnCircleGiveThatCircle) {
  const Point2 c(3.0, -2.0);
  const double r = 0.7;
  std::vector<Point2> pts;
  for (int i = 0; i < 7; ++i) pts.push_back(c + r * Point2(std::cos(0.9 * i), std::sin(0.9 * i)));
  const Ellipse e = mvee(pts, {1e-10, 100000});
  EXPECT_NEAR((e.center - c).norm(), 0.0, 1e-5);
  EXPECT_NEAR(std::abs(e.axes.determinant()), r * r, 1e-5);
}

TEST(Mvee, ContainsAllPointsAndRejectsDegenerateInput) {
  corpus::Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const ConvexPolygon poly = corpus::random_polygon(rng, 3, 12);
    const Ellipse e = mvee(poly.vertices());
    for (const auto& v : poly.vertices()) EXPECT_LE(e.gauge(v), 1.0 + 1e-12);
  }
  const std::vector<Point2> two{{0, 0}, {1, 1}};
  EXPECT_THROW(mvee(two), Error);
}

TEST(JohnNormalize, RegularPolygonIsNearScaledIdentity) {
  // the half-size MVEE is the inscribed disk, so the 64-gon lands near 2B
  const NormalizedBody body = john_normalize(disk_polygon(64));
  const Matrix2 a = body.to_normalized.linear();
  EXPECT_LE((a - 2.0 * Matrix2::Identity()).norm(), 0.02 * 2.0);
  EXPECT_NEAR(body.to_normalized.shift().norm(), 0.0, 0.02);
}

TEST(JohnNormalize, ScaledSquareSitsBetweenBAnd2B) {
  const NormalizedBody body = john_normalize(box(0.0, 10.0));
  EXPECT_TRUE(in_normal_position(body.polygon));
  EXPECT_TRUE(in_john_position(body.polygon));
  const Point2 p(3.0, 7.0);
  EXPECT_NEAR((body.from_normalized(body.to_normalized(p)) - p).norm(), 0.0, 1e-12);
}

TEST(JohnNormalize, SecondPassIsNearSimilarity) {
  corpus::Rng rng(50);
  for (int i = 0; i < 50; ++i) {
    const ConvexPolygon poly = corpus::random_polygon(rng, 3, 14);
    const NormalizedBody once = john_normalize(poly);
    const NormalizedBody twice = john_normalize(once.polygon);
    EXPECT_TRUE(in_normal_position(once.polygon));
    Eigen::JacobiSVD<Matrix2> svd(twice.to_normalized.linear());
    const double s1 = svd.singularValues()(0);
    const double s2 = svd.singularValues()(1);
    EXPECT_LE(s1 / s2, 1.05) << "polygon " << i;
  }
}

TEST(JohnNormalize, AffineImagesShareTheSandwich) {
  corpus::Rng rng(21);
  for (int i = 0; i < 30; ++i) {
    const ConvexPolygon poly = corpus::random_polygon(rng, 3, 10);
    const AffineMap2 t = corpus::random_affine(rng);
    const NormalizedBody a = john_normalize(poly);
    const NormalizedBody b = john_normalize(poly.transformed(t));
    EXPECT_TRUE(in_normal_position(b.polygon));
    // b.polygon = S(a.polygon) with S = b.to o t o a.from; S is (close to) an isometry
    const AffineMap2 s = b.to_normalized * t * a.from_normalized;
    EXPECT_NEAR(std::abs(s.det()), 1.0, 0.05);
    EXPECT_NEAR(b.polygon.area(), a.polygon.area(), 0.05 * a.polygon.area());
  }
}

TEST(RayGap, DiskAndSquareExamples) {
  const NormalizedBody disk = identity_body(disk_polygon(64));
  const RayHit h = ray_boundary_gap(disk, {0.9, 0.0});
  EXPECT_NEAR(h.delta, 0.1, 2e-3);

  const NormalizedBody sq = identity_body(box(-2.0, 2.0));
  const RayHit side = ray_boundary_gap(sq, {1.0, 0.0});
  EXPECT_NEAR((side.z - Point2(2.0, 0.0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR(side.delta, 1.0, 1e-15);
  EXPECT_FALSE(side.vertex.has_value());
  const RayHit corner = ray_boundary_gap(sq, {1.0, 1.0});
  EXPECT_NEAR((corner.z - Point2(2.0, 2.0)).norm(), 0.0, 1e-14);
  EXPECT_NEAR(corner.delta, std::sqrt(2.0), 1e-14);
  EXPECT_TRUE(corner.vertex.has_value());
}

TEST(RayGap, ReconstructsExitPointOnOneEdge) {
  const auto corpus = corpus::make_corpus(40, 10, 99);
  for (const auto& inst : corpus) {
    const NormalizedBody body = identity_body(inst.polygon);
    for (const auto& x : inst.points) {
      if (x.norm() < 1e-6) continue;
      const RayHit h = ray_boundary_gap(body, x);
      EXPECT_NEAR((x + h.delta * x / x.norm() - h.z).norm(), 0.0, 1e-12);
      const auto& hp = body.polygon.halfplanes()[h.edge];
      EXPECT_NEAR(hp.normal.dot(h.z), hp.offset, 1e-12);
    }
  }
}

TEST(RayGap, RejectsOriginAndOutside) {
  const NormalizedBody sq = identity_body(box(-2.0, 2.0));
  EXPECT_THROW(ray_boundary_gap(sq, {0.0, 0.0}), Error);
  EXPECT_THROW(ray_boundary_gap(sq, {3.0, 0.0}), Error);
}

TEST(LocalChart, FlatEdgeOfSquare) {
  const NormalizedBody sq = identity_body(box(-2.0, 2.0));
  const LocalChart chart = local_chart(sq, {0.0, -1.9});
  EXPECT_NEAR(chart.delta, 0.1, 1e-12);
  EXPECT_NEAR(chart.chart_map.det(), 3.0, 1e-10);
  EXPECT_NEAR(chart.profile(0.0), 0.0, 1e-12);
  EXPECT_NEAR(chart.profile(0.3), 0.0, 1e-12);
  EXPECT_NEAR(chart.profile.slope_right(0.0), 0.0, 1e-12);
  EXPECT_NEAR(chart.chart_map(Point2(0.0, -1.9)).y(), 0.1, 1e-12);
}

TEST(LocalChart, RegularPolygonProfile) {
  const NormalizedBody disk = identity_body(disk_polygon(64));
  const LocalChart chart = local_chart(disk, {0.95, 0.0});
  EXPECT_NEAR(chart.profile(0.0), 0.0, 1e-12);
  for (std::size_t s = 0; s < chart.profile.segments(); ++s) EXPECT_LE(std::abs(chart.profile.slope(s)), 2.0 + 1e-12);
  // direct transform of the polygon: the profile is the image's lower boundary
  const ConvexPolygon image = disk.polygon.transformed(chart.chart_map);
  for (double x : {-0.9, -0.5, -0.1, 0.2, 0.6, 1.0}) {
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < image.size(); ++e) {
      const Point2 a = image.vertex(e);
      const Point2 b = image.vertex(e + 1);
      if ((a.x() - x) * (b.x() - x) <= 0.0 && a.x() != b.x()) {
        lowest = std::min(lowest, a.y() + (b.y() - a.y()) * (x - a.x()) / (b.x() - a.x()));
      }
    }
    EXPECT_NEAR(chart.profile(x), lowest, 1e-12) << "x = " << x;
  }
}

TEST(LocalChart, InvariantsOnRandomPairs) {
  corpus::Rng rng(500);
  int checked = 0;
  while (checked < 500) {
    const ConvexPolygon poly = corpus::random_polygon(rng, 3, 16);
    const NormalizedBody body = john_normalize(poly);
    const Point2 x = corpus::random_interior_point(rng, body.polygon);
    if (x.norm() < 1e-9) continue;
    const LocalChart chart = local_chart(body, x);
    EXPECT_NO_THROW(validate_chart(chart));
    EXPECT_NEAR(chart.chart_map(x).x(), 0.0, 1e-10);
    EXPECT_NEAR(chart.chart_map(x).y(), chart.delta, 1e-10);
    ++checked;
  }
}

TEST(Retract, Examples) {
  const NormalizedBody sq = identity_body(box(-2.0, 2.0));
  EXPECT_EQ(tau_retract(sq, {0.0, 0.0}, 3), Point2(0.0, 0.0));
  const Point2 r = tau_retract(sq, {2.0, 0.0}, 2);
  EXPECT_NEAR(r.x(), 1.96875, 1e-15);
  EXPECT_EQ(r.y(), 0.0);
  const Point2 inner(0.5, -0.3);
  EXPECT_EQ(tau_retract(sq, inner, 1), inner);
  EXPECT_THROW(tau_retract(sq, inner, 0), Error);
}

TEST(Retract, Idempotent) {
  const auto corpus = corpus::make_corpus(30, 10, 5);
  for (const auto& inst : corpus) {
    const NormalizedBody body = identity_body(inst.polygon);
    for (const auto& x : inst.points) {
      for (int n : {1, 4, 16}) {
        const Point2 r = tau_retract(body, x, n);
        EXPECT_NEAR((tau_retract(body, r, n) - r).norm(), 0.0, 1e-12);
        EXPECT_LE(r.norm(), x.norm() + 1e-15);
      }
    }
  }
}

TEST(Shapes, PolygonizedBodies) {
  const ConvexPolygon disk = disk_polygon();
  EXPECT_EQ(disk.size(), 256u);
  EXPECT_NEAR(disk.area(), std::numbers::pi, 1e-3);
  const ConvexPolygon ell = ellipse_polygon(2.0, 0.5, 128);
  EXPECT_NEAR(ell.area(), std::numbers::pi, 2e-3);
  const ConvexPolygon diamond = superellipse_polygon(1.0, 1.0, 1.0, 64);
  EXPECT_EQ(diamond.size(), 4u);
  EXPECT_NEAR(diamond.area(), 2.0, 1e-12);
  const ConvexPolygon squarish = superellipse_polygon(1.0, 1.0, 8.0, 256);
  EXPECT_GT(squarish.area(), 3.5);
  EXPECT_LT(squarish.area(), 4.0);
  EXPECT_THROW(superellipse_polygon(1.0, 1.0, 0.5), Error);
  EXPECT_THROW(ellipse_polygon(-1.0, 1.0), Error);
}
