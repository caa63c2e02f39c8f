#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "christoffel/bounds.hpp"
#include "christoffel/corpus.hpp"
#include "christoffel/parabola.hpp"
#include "christoffel/shapes.hpp"
#include "christoffel/testing/oracles.hpp"

using namespace christoffel;
using christoffel::testing::brute_force_L;
using christoffel::testing::brute_force_U;
using christoffel::testing::sampled_parabola_k;

namespace {

NormalizedBody identity_body(const ConvexPolygon& poly) {
  return {poly, AffineMap2::identity(), AffineMap2::identity()};
}

ConvexPolygon box(double lo, double hi) { return ConvexPolygon({{lo, lo}, {hi, lo}, {hi, hi}, {lo, hi}}); }

struct Probe {
  NormalizedBody body;
  Point2 x;
};

std::vector<Probe> corpus_probes(std::size_t polygons, int points, std::uint64_t seed) {
  std::vector<Probe> out;
  for (const auto& inst : corpus::make_corpus(polygons, points, seed)) {
    const NormalizedBody body = identity_body(inst.polygon);
    for (const auto& x : inst.points) {
      if (body.polygon.margin(x) > kBoundaryGuard && x.norm() > 1e-9) out.push_back({body, x});
    }
  }
  return out;
}

}  // namespace

TEST(ParabolaFit, SingleCornerExample) {
  const PiecewiseLinear f({-1.0, 0.25, 1.0}, {0.0, 0.0, 1.5});
  const double delta = 0.1;
  const ParabolaFit fit = fit_parabola(f, delta);
  EXPECT_NEAR(fit.k, 20.0 / 11.0, 1e-12);
  EXPECT_NEAR(fit.xi, 0.55, 1e-12);
  EXPECT_NEAR(fit.alpha, 2.0, 1e-12);
  EXPECT_NEAR(fit.beta, 0.5, 1e-12);
  EXPECT_FALSE(fit.reflected);
  EXPECT_LE(std::sqrt(delta + fit.beta) / fit.alpha, 1.0 / std::sqrt(fit.k));
  EXPECT_NEAR(sampled_parabola_k(f, delta), fit.k, 1e-9);
  EXPECT_TRUE(check_fit(f, delta, fit).all());
}

TEST(ParabolaFit, TrapezoidProfile) {
  const double a = 0.1;
  const double delta = 0.05;
  const PiecewiseLinear f({-1.0, a, 1.0}, {0.0, 0.0, 1.0});
  const ParabolaFit fit = fit_parabola(f, delta);
  // double root of k x^2 + delta/2 = (x - a)/(1 - a)
  const double closed = 1.0 / (4.0 * (1.0 - a) * (1.0 - a) * (0.5 * delta + a / (1.0 - a)));
  EXPECT_NEAR(fit.k, closed, 1e-12);
  EXPECT_NEAR(sampled_parabola_k(f, delta), closed, 1e-9);
  EXPECT_NEAR(fit.alpha, 1.0 / (1.0 - a), 1e-12);
}

TEST(ParabolaFit, TouchesFartherCorner) {
  const PiecewiseLinear f({-1.0, 0.4, 0.6, 1.0}, {0.0, 0.0, 0.2, 1.0});
  const double delta = 0.1;
  const ParabolaFit fit = fit_parabola(f, delta);
  EXPECT_EQ(fit.xi, 1.0);
  EXPECT_NEAR(fit.k, 0.95, 1e-12);
  EXPECT_NEAR(fit.alpha, f.slope_left(1.0), 1e-15);
  EXPECT_NEAR(fit.beta, 1.0, 1e-12);
  EXPECT_NEAR(sampled_parabola_k(f, delta), fit.k, 1e-9);
}

TEST(ParabolaFit, MirroredProfileIsReflected) {
  const PiecewiseLinear f({-1.0, -0.25, 1.0}, {1.5, 0.0, 0.0});
  const ParabolaFit fit = fit_parabola(f, 0.1);
  EXPECT_TRUE(fit.reflected);
  EXPECT_NEAR(fit.k, 20.0 / 11.0, 1e-12);
  EXPECT_NEAR(fit.xi, 0.55, 1e-12);
}

TEST(ParabolaFit, RejectsCase2Profiles) {
  const PiecewiseLinear flat({-1.0, 1.0}, {0.0, 0.0});
  EXPECT_THROW(fit_parabola(flat, 0.1), Error);
  EXPECT_THROW(fit_parabola(flat, 0.0), Error);
}

TEST(ParabolaFit, MatchesSamplingOracleOnRandomConvexProfiles) {
  corpus::Rng rng(17);
  int fitted = 0;
  for (int trial = 0; trial < 60; ++trial) {
    // convex: zero on [-1, 0]-ish part, slopes increasing on both sides
    const int right = corpus::uniform_int(rng, 1, 4);
    const int left = corpus::uniform_int(rng, 0, 3);
    std::vector<double> lx;
    std::vector<double> slopes_l;
    for (int i = 0; i < left; ++i) lx.push_back(-corpus::uniform(rng, 0.05, 0.95));
    std::sort(lx.begin(), lx.end());
    std::vector<double> rx;
    for (int i = 0; i < right; ++i) rx.push_back(corpus::uniform(rng, 0.05, 0.95));
    std::sort(rx.begin(), rx.end());
    std::vector<double> xs{-1.0};
    xs.insert(xs.end(), lx.begin(), lx.end());
    xs.push_back(0.0);
    xs.insert(xs.end(), rx.begin(), rx.end());
    xs.push_back(1.0);
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<double> ys(xs.size(), 0.0);
    const auto zero = static_cast<std::size_t>(std::find(xs.begin(), xs.end(), 0.0) - xs.begin());
    double slope = 0.0;
    for (std::size_t i = zero + 1; i < xs.size(); ++i) {
      if (i > zero + 1) slope = std::min(2.0, slope + corpus::uniform(rng, 0.0, 0.8));
      ys[i] = ys[i - 1] + slope * (xs[i] - xs[i - 1]);
    }
    slope = 0.0;
    for (std::size_t i = zero; i-- > 0;) {
      slope = std::min(2.0, slope + corpus::uniform(rng, 0.0, 0.8));
      ys[i] = ys[i + 1] + slope * (xs[i + 1] - xs[i]);
    }
    const PiecewiseLinear f(xs, ys);
    const double delta = std::pow(10.0, -corpus::uniform(rng, 0.5, 3.0));
    if (profile_below_half_gap(f, delta)) continue;
    const ParabolaFit fit = fit_parabola(f, delta);
    EXPECT_NEAR(fit.k, sampled_parabola_k(f, delta, 200'000), 1e-6 * fit.k) << "trial " << trial;
    EXPECT_TRUE(check_fit(f, delta, fit).all()) << "trial " << trial;
    ++fitted;
  }
  EXPECT_GT(fitted, 30);
}

TEST(Certificates, Case1AtCenterOfDisk) {
  const NormalizedBody body = john_normalize(disk_polygon());
  const BoundCertificate lo = lower_certificate(body, {0.0, 0.0});
  const BoundCertificate up = upper_certificate(body, {0.0, 0.0});
  EXPECT_EQ(lo.case_tag, 1);
  EXPECT_EQ(up.case_tag, 1);
  EXPECT_GE(lo.value, 1.0 / 64.0 - 1e-15);
  EXPECT_LE(lo.value, 1.0);
  EXPECT_LE(up.value, 32.0 + 1e-12);
  EXPECT_TRUE(certifies_lower(body.polygon, {0.0, 0.0}, lo.ellipse()));
  EXPECT_TRUE(certifies_upper(body.polygon, {0.0, 0.0}, up.frame()));
}

TEST(Certificates, Case2NearFlatEdgeOfSquare) {
  const NormalizedBody body = john_normalize(box(-1.0, 1.0));
  const double half = body.polygon.halfplanes()[0].offset;
  const Point2 normal = body.polygon.halfplanes()[0].normal;
  const double delta = 0.01;
  const Point2 x = (half - delta) * normal;
  const BoundCertificate lo = lower_certificate(body, x);
  const BoundCertificate up = upper_certificate(body, x);
  EXPECT_EQ(lo.case_tag, 2);
  // Case 2 ellipse in chart coordinates gives sqrt(delta)/12; the chart has det 3
  EXPECT_NEAR(lo.value, std::sqrt(delta) / 36.0, 1e-12);
  EXPECT_TRUE(certifies_lower(body.polygon, x, lo.ellipse()));
  EXPECT_LE(up.value, 64.0 * std::sqrt(2.0 * delta) / 3.0 * (1.0 + 1e-12));
  EXPECT_TRUE(certifies_upper(body.polygon, x, up.frame()));
}

TEST(Certificates, WitnessesAreAdmissibleOnCorpus) {
  int cases[4] = {0, 0, 0, 0};
  for (const auto& p : corpus_probes(60, 20, 4242)) {
    const BoundCertificate lo = lower_certificate(p.body, p.x);
    const BoundCertificate up = upper_certificate(p.body, p.x);
    ASSERT_EQ(lo.case_tag, up.case_tag);
    ASSERT_GE(lo.case_tag, 1);
    ASSERT_LE(lo.case_tag, 3);
    ++cases[lo.case_tag];
    EXPECT_TRUE(certifies_lower(p.body.polygon, p.x, lo.ellipse()));
    EXPECT_TRUE(certifies_upper(p.body.polygon, p.x, up.frame()));
    EXPECT_NEAR(lo.value, ellipse_value(lo.ellipse(), p.x), 1e-14);
    EXPECT_NEAR(up.value, frame_value(up.frame(), p.x), 1e-12 * up.value);
    EXPECT_GT(lo.value, 0.0);
    EXPECT_LE(up.value, 1e4 * lo.value);
    // classification is a pure function of the input
    EXPECT_EQ(classify(p.body, p.x).case_tag, lo.case_tag);
  }
  EXPECT_GT(cases[1], 0);
  EXPECT_GT(cases[2], 0);
  EXPECT_GT(cases[3], 0);
}

TEST(Certificates, Case3UpperObeysClosedFormBound) {
  int seen = 0;
  for (const auto& p : corpus_probes(60, 20, 77)) {
    const CaseAnalysis c = classify(p.body, p.x);
    if (c.case_tag != 3) continue;
    const double d = c.chart->delta;
    const ParabolaFit& fit = *c.fit;
    // chart coordinates carry det 3
    const double chart_value = 3.0 * upper_certificate(p.body, p.x).value;
    EXPECT_LE(chart_value, 200.0 * std::sqrt((d + fit.beta) * d) / fit.alpha * (1.0 + 1e-9));
    EXPECT_LE(chart_value, 64.0 * std::sqrt(2.0 * d) * (1.0 + 1e-9));
    ++seen;
  }
  EXPECT_GT(seen, 50);
}

TEST(Certificates, BruteForceLowerNeverExceedsUpperCertificate) {
  const auto probes = corpus_probes(8, 5, 9);
  for (const auto& p : probes) {
    const double up = upper_certificate(p.body, p.x).value;
    const double bl = brute_force_L(p.body.polygon, p.x, 12);
    EXPECT_LE(std::max(bl, lower_certificate(p.body, p.x).value), up * (1.0 + 1e-9));
  }
}

TEST(Certificates, AffineInvariantInNormalizedCoordinates) {
  corpus::Rng rng(31);
  for (int i = 0; i < 40; ++i) {
    const ConvexPolygon poly = corpus::random_polygon(rng, 5, 20);
    const AffineMap2 t = corpus::random_affine(rng);
    const NormalizedBody a = john_normalize(poly);
    const NormalizedBody b = john_normalize(poly.transformed(t));
    const Point2 x = poly.centroid() + 0.6 * (poly.vertex(0) - poly.centroid());
    const Point2 xa = a.to_normalized(x);
    const Point2 xb = b.to_normalized(t(x));
    EXPECT_NEAR(lower_certificate(b, xb).value, lower_certificate(a, xa).value, 0.1 * lower_certificate(a, xa).value);
    EXPECT_NEAR(upper_certificate(b, xb).value, upper_certificate(a, xa).value, 0.1 * upper_certificate(a, xa).value);
  }
}

TEST(Certificates, TransformScalesValueAndWitness) {
  const NormalizedBody body = john_normalize(box(0.0, 3.0));
  const Point2 x(0.3, -0.2);
  const BoundCertificate lo = lower_certificate(body, x);
  const AffineMap2 back = body.from_normalized;
  const BoundCertificate mapped = transform_certificate(lo, back);
  EXPECT_NEAR(mapped.value, lo.value * std::abs(back.det()), 1e-14);
  EXPECT_NEAR(ellipse_value(mapped.ellipse(), back(x)), mapped.value, 1e-12);
  EXPECT_TRUE(certifies_lower(box(0.0, 3.0), back(x), mapped.ellipse()));
}

TEST(Certificates, RejectBoundaryAndOutsidePoints) {
  const NormalizedBody body = john_normalize(box(-1.0, 1.0));
  const Point2 corner = body.polygon.vertex(0);
  EXPECT_THROW(lower_certificate(body, corner * 1.01), Error);
  EXPECT_THROW(upper_certificate(body, corner * 1.01), Error);
  try {
    lower_certificate(body, corner * (1.0 - 1e-13));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooCloseToBoundary);
  }
}

TEST(BruteForce, UnitSquareCenterIsAtMostHalf) {
  EXPECT_LE(brute_force_U(box(0.0, 1.0), {0.5, 0.5}, 16), 0.5 + 1e-12);
}

TEST(BruteForce, DiskCenterApproachesOne) {
  const NormalizedBody disk = identity_body(disk_polygon());
  EXPECT_GE(brute_force_L(disk.polygon, {0.0, 0.0}, 32), 0.9);
}

TEST(BruteForce, NormalizedSquareCenterWithinFactorFour) {
  const NormalizedBody body = john_normalize(box(-1.0, 1.0));
  const double l = brute_force_L(body.polygon, {0.0, 0.0}, 16);
  const double u = brute_force_U(body.polygon, {0.0, 0.0}, 16);
  EXPECT_LE(u, 4.0 * l);
  EXPECT_GE(u, l / 4.0);
}

TEST(BruteForce, ResolutionDoublingIsMonotone) {
  for (const auto& p : corpus_probes(6, 3, 123)) {
    const double l8 = brute_force_L(p.body.polygon, p.x, 8);
    const double l16 = brute_force_L(p.body.polygon, p.x, 16);
    EXPECT_GE(l16, l8);
    const double u8 = brute_force_U(p.body.polygon, p.x, 8);
    const double u16 = brute_force_U(p.body.polygon, p.x, 16);
    EXPECT_LE(u16, u8);
  }
}
