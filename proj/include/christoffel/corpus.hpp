#pragma once

// Random polygon corpora and the reproducible experiments behind the
// acceptance suite. Shared by the acceptance test binary and `christoffel corpus`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "christoffel/bounds.hpp"
#include "christoffel/christoffel.hpp"
#include "christoffel/mesh.hpp"
#include "christoffel/moments.hpp"
#include "christoffel/parabola.hpp"
#include "christoffel/quadrature.hpp"
#include "christoffel/tchakaloff.hpp"
#include "christoffel/testing/oracles.hpp"

namespace christoffel::corpus {

using nlohmann::json;
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline ConvexPolygon regular_polygon(int k, double radius = 1.0, const Point2& center = Point2::Zero()) {
  std::vector<Point2> v;
  for (int i = 0; i < k; ++i) {
    const double a = 2.0 * std::numbers::pi * i / k;
    v.push_back(center + radius * Point2(std::cos(a), std::sin(a)));
  }
  return ConvexPolygon(std::move(v));
}

/// Inscribed 256-gon of the unit disk with a vertex at angle 0.
inline ConvexPolygon unit_disk_polygon(int k = 256) { return regular_polygon(k); }

inline ConvexPolygon unit_square() { return ConvexPolygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

/// Trapezoid with vertices (+-a, 0), (+-1, 1).
inline ConvexPolygon trapezoid(double a) { return ConvexPolygon({{-a, 0}, {a, 0}, {1, 1}, {-1, 1}}); }

namespace detail {

/// Valtr's uniform random convex polygon construction.
inline std::vector<Point2> valtr(Rng& rng, int k) {
  auto chains = [&](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const double lo = v.front();
    const double hi = v.back();
    std::vector<double> steps;
    double last_a = lo;
    double last_b = lo;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (uniform(rng) < 0.5) {
        steps.push_back(v[i] - last_a);
        last_a = v[i];
      } else {
        steps.push_back(last_b - v[i]);
        last_b = v[i];
      }
    }
    steps.push_back(hi - last_a);
    steps.push_back(last_b - hi);
    return steps;
  };
  std::vector<double> xs(static_cast<std::size_t>(k));
  std::vector<double> ys(static_cast<std::size_t>(k));
  for (auto& x : xs) x = uniform(rng);
  for (auto& y : ys) y = uniform(rng);
  std::vector<double> dx = chains(xs);
  std::vector<double> dy = chains(ys);
  std::shuffle(dy.begin(), dy.end(), rng);
  std::vector<Point2> vec;
  for (std::size_t i = 0; i < dx.size(); ++i) vec.emplace_back(dx[i], dy[i]);
  std::sort(vec.begin(), vec.end(), [](const Point2& a, const Point2& b) {
    return std::atan2(a.y(), a.x()) < std::atan2(b.y(), b.x());
  });
  std::vector<Point2> pts;
  Point2 p = Point2::Zero();
  for (const auto& d : vec) {
    pts.push_back(p);
    p += d;
  }
  return pts;
}

/// k points at sorted random angles on a random ellipse.
inline std::vector<Point2> on_ellipse(Rng& rng, int k) {
  std::vector<double> angles(static_cast<std::size_t>(k));
  for (auto& a : angles) a = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  std::sort(angles.begin(), angles.end());
  const double aspect = std::exp(uniform(rng, std::log(0.05), 0.0));
  const double rot = uniform(rng, 0.0, std::numbers::pi);
  std::vector<Point2> pts;
  for (double a : angles) {
    const Point2 q(std::cos(a), aspect * std::sin(a));
    pts.emplace_back(std::cos(rot) * q.x() - std::sin(rot) * q.y(), std::sin(rot) * q.x() + std::cos(rot) * q.y());
  }
  return pts;
}

}  // namespace detail

/// Random convex polygon with between min_vertices and max_vertices vertices
/// (not normalized), alternating between Valtr polygons and ellipse samples.
inline ConvexPolygon random_polygon(Rng& rng, int min_vertices, int max_vertices) {
  for (int attempt = 0;; ++attempt) {
    const int k = uniform_int(rng, min_vertices, max_vertices);
    const bool use_valtr = uniform(rng) < 0.5;
    std::vector<Point2> pts = use_valtr ? detail::valtr(rng, k) : detail::on_ellipse(rng, k);
    try {
      ConvexPolygon poly(std::move(pts));
      // reject slivers that leave no room for a well-posed Gram matrix
      const double turn = [&] {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < poly.size(); ++i) {
          const Point2 a = poly.vertex(i + poly.size() - 1);
          const Point2 b = poly.vertex(i);
          const Point2 c = poly.vertex(i + 1);
          worst = std::min(worst, cross(b - a, c - b) / ((b - a).norm() * (c - b).norm()));
        }
        return worst;
      }();
      if (turn > 1e-6) return poly;
    } catch (const Error&) {
    }
    if (attempt > 1000) fail(ErrorKind::NumericalFailure, "random polygon generator stuck");
  }
}

/// Interior point between the centroid and a random boundary point, with the
/// relative distance to the boundary log-uniform down to 1e-4.
inline Point2 random_interior_point(Rng& rng, const ConvexPolygon& poly) {
  const auto e = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(poly.size()) - 1));
  const Point2 b = poly.vertex(e) + uniform(rng) * (poly.vertex(e + 1) - poly.vertex(e));
  const double s = 1.0 - std::pow(10.0, -4.0 * uniform(rng));
  const Point2 c = poly.centroid();
  return c + s * (b - c);
}

/// A random affine map with |det| in a moderate range and possibly a reflection.
inline AffineMap2 random_affine(Rng& rng) {
  const double a = uniform(rng, -1.5, 1.5);
  const double b = uniform(rng, -1.5, 1.5);
  Matrix2 lin = AffineMap2::rotation(uniform(rng, 0.0, std::numbers::pi)).linear() *
                Eigen::Vector2d(std::exp(a), std::exp(b)).asDiagonal() *
                AffineMap2::rotation(uniform(rng, 0.0, std::numbers::pi)).linear();
  if (uniform(rng) < 0.5) lin.row(0) *= -1.0;
  return AffineMap2(lin, Point2(uniform(rng, -5.0, 5.0), uniform(rng, -5.0, 5.0)));
}

struct Instance {
  ConvexPolygon polygon;
  std::vector<Point2> points;
};

/// `count` random polygons with 5-40 vertices in John position, each with
/// `points_per` interior points.
inline std::vector<Instance> make_corpus(std::size_t count, int points_per, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Instance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const ConvexPolygon raw = random_polygon(rng, 5, 40);
    Instance inst{john_normalize(raw).polygon, {}};
    for (int j = 0; j < points_per; ++j) inst.points.push_back(random_interior_point(rng, inst.polygon));
    out.push_back(std::move(inst));
  }
  return out;
}

/// Running [min, max] of a positive statistic.
struct Window {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void merge(const Window& w) {
    lo = std::min(lo, w.lo);
    hi = std::max(hi, w.hi);
  }
  [[nodiscard]] double spread() const { return hi / lo; }
  [[nodiscard]] bool overlaps(const Window& w) const { return lo <= w.hi && w.lo <= hi; }
  [[nodiscard]] json to_json() const { return json::array({lo, hi}); }
};

inline double percentile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()))) - 1;
  return v[std::min(idx, v.size() - 1)];
}

struct Criterion {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  json data;
  double seconds = 0.0;
};

/// Pinned acceptance tolerances.
struct Limits {
  static constexpr double disk_spread = 25.0;
  static constexpr double sandwich_constant = 1e3;
  static constexpr double certificate_ratio = 1e4;
  static constexpr double trapezoid_spread = 30.0;
  static constexpr double trapezoid_c = 1.0;
  static constexpr double doubling_monotone = 1e-10;
  static constexpr double doubling_ratio = 100.0;
  static constexpr double affine_relative = 1e-8;
  static constexpr double fit_tolerance = 1e-9;
  static constexpr double fit_oracle_relative = 1e-6;
  static constexpr double compression_residual = 1e-8;
  static constexpr double mesh_slack = 1.05;
  static constexpr double mesh_nu = 10.0;
  static constexpr double lambda1_oracle = 1e-12;
  static constexpr double dirichlet_oracle = 1e-13;
  static constexpr double brute_force_center = 0.9;
  // wall-clock budgets in seconds
  static constexpr double disk_seconds = 60.0;
  static constexpr double corpus_seconds = 600.0;
  static constexpr double trapezoid_seconds = 300.0;
  static constexpr double tchakaloff_seconds = 180.0;
  static constexpr double mesh_seconds = 300.0;
};

struct Config {
  std::uint64_t seed = 20240601;
  std::size_t corpus_size = 200;
  int corpus_points = 10;
  int fit_oracle_samples = 1'000'000;
  int mesh_trials = 500;
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

template <class F>
Criterion timed(int id, std::string name, F&& body) {
  Criterion c;
  c.id = id;
  c.name = std::move(name);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail = std::string("exception: ") + e.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

}  // namespace detail

inline Criterion disk_behavior() {
  return detail::timed(1, "disk behavior", [](Criterion& c) {
    const ConvexPolygon disk = unit_disk_polygon();
    Window all;
    json per_n = json::object();
    std::vector<std::pair<int, Window>> windows;
    for (int n : {2, 4, 8, 16}) {
      const ChristoffelEvaluator ev(disk, n);
      const double rmax = 1.0 - 1.0 / (64.0 * n * n);
      Window w;
      for (int i = 0; i < 40; ++i) {
        const Point2 z(rmax * i / 39.0, 0.0);
        w.add(ev(z) / reference_disk(z, n));
      }
      per_n[std::to_string(n)] = w.to_json();
      windows.emplace_back(n, w);
      all.merge(w);
    }
    const bool overlap = windows[3].second.overlaps(windows[1].second);
    c.pass = all.spread() <= Limits::disk_spread && overlap;
    c.detail = "window [" + detail::fmt(all.lo) + ", " + detail::fmt(all.hi) + "] spread " + detail::fmt(all.spread()) +
               " (limit 25), n=16 overlaps n=4: " + (overlap ? "yes" : "no");
    c.data = {{"window", all.to_json()}, {"spread", all.spread()}, {"per_n", per_n}};
  });
}

/// Criteria 2, 3, 5 and 7 share the corpus and the evaluators built on it.
struct CorpusResults {
  Criterion sandwich;
  Criterion certificates;
  Criterion doubling;
  Criterion fit;
};

inline CorpusResults corpus_experiments(const Config& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Instance> corpus = make_corpus(config.corpus_size, config.corpus_points, config.seed);
  const std::array<int, 3> degrees{2, 4, 8};

  struct PerN {
    Window r_lower;
    Window r_upper;
    Window doubling;
  };
  std::array<PerN, 3> stats{};
  std::vector<double> cert_ratios;
  double worst_monotone = -std::numeric_limits<double>::infinity();
  std::size_t case3 = 0;
  std::size_t fit_failures = 0;
  double fit_worst_rel = 0.0;
  double fit_worst_bound = 0.0;
  std::string first_fit_failure;
  std::array<std::size_t, 4> case_counts{};

  for (const auto& inst : corpus) {
    const NormalizedBody body = john_normalize(inst.polygon);
    std::vector<ChristoffelEvaluator> ev;
    for (int n : {2, 4, 8, 16}) ev.emplace_back(body, n);
    for (const auto& x : inst.points) {
      for (std::size_t k = 0; k < degrees.size(); ++k) {
        const TwoSidedEstimate est = christoffel_two_sided(ev[k], x);
        stats[k].r_lower.add(est.lambda / est.lower);
        stats[k].r_upper.add(est.lambda / est.upper);
        cert_ratios.push_back(est.upper / est.lower);
        ++case_counts[static_cast<std::size_t>(est.case_lower)];
        const double l2n = ev[k + 1](x);
        worst_monotone = std::max(worst_monotone, (l2n - est.lambda) / est.lambda);
        stats[k].doubling.add(est.lambda / l2n);
      }
    }
    // parabola-fit postconditions at every Case-3 point: raw points and their retractions
    std::vector<Point2> probes = inst.points;
    for (const auto& x : inst.points) {
      for (int n : degrees) probes.push_back(body.from_normalized(tau_retract(body, body.to_normalized(x), n)));
    }
    for (const auto& p : probes) {
      const Point2 y = body.to_normalized(p);
      const CaseAnalysis cases = classify(body, y);
      if (cases.case_tag != 3) continue;
      ++case3;
      const ParabolaFit& fit = *cases.fit;
      const FitCheck check = check_fit(cases.chart->profile, cases.chart->delta, fit, Limits::fit_tolerance);
      const double k_oracle = testing::sampled_parabola_k(cases.chart->profile, cases.chart->delta, config.fit_oracle_samples);
      const double rel = std::abs(fit.k - k_oracle) / std::abs(k_oracle);
      fit_worst_rel = std::max(fit_worst_rel, rel);
      fit_worst_bound = std::max(fit_worst_bound, std::sqrt(cases.chart->delta + fit.beta) / fit.alpha * std::sqrt(fit.k));
      if (!check.all() || rel > Limits::fit_oracle_relative) {
        if (fit_failures++ == 0) {
          std::ostringstream s;
          s << "delta=" << cases.chart->delta << " k=" << fit.k << " oracle=" << k_oracle << " dom=" << check.domination
            << " tan=" << check.tangency << " sup=" << check.support << " par=" << check.parameter_bound;
          first_fit_failure = s.str();
        }
      }
    }
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  CorpusResults out;
  {
    Criterion& c = out.sandwich;
    c.id = 2;
    c.name = "sandwich";
    Window rl;
    Window ru;
    bool overlap = true;
    json per_n = json::object();
    for (std::size_t k = 0; k < degrees.size(); ++k) {
      rl.merge(stats[k].r_lower);
      ru.merge(stats[k].r_upper);
      for (std::size_t j = 0; j < k; ++j) {
        overlap = overlap && stats[k].r_lower.overlaps(stats[j].r_lower) && stats[k].r_upper.overlaps(stats[j].r_upper);
      }
      per_n[std::to_string(degrees[k])] = {{"r_lower", stats[k].r_lower.to_json()}, {"r_upper", stats[k].r_upper.to_json()}};
    }
    const double c_lower = 1.0 / rl.lo;
    const double c_upper = ru.hi;
    c.pass = rl.lo > 0.0 && c_lower <= Limits::sandwich_constant && c_upper <= Limits::sandwich_constant && overlap;
    c.detail = "min r_L " + detail::fmt(rl.lo) + " (C_L " + detail::fmt(c_lower) + "), max r_U " + detail::fmt(c_upper) +
               " (C_U), limit 1e3, per-n windows overlap: " + (overlap ? "yes" : "no");
    c.data = {{"r_lower", rl.to_json()}, {"r_upper", ru.to_json()}, {"C_L", c_lower}, {"C_U", c_upper}, {"per_n", per_n},
              {"cases", {case_counts[1], case_counts[2], case_counts[3]}}};
    c.seconds = elapsed;
  }
  {
    Criterion& c = out.certificates;
    c.id = 3;
    c.name = "certificate ratio";
    const double worst = *std::max_element(cert_ratios.begin(), cert_ratios.end());
    const double p99 = percentile(cert_ratios, 0.99);
    c.pass = worst <= Limits::certificate_ratio;
    c.detail = "max upper/lower " + detail::fmt(worst) + " (limit 1e4), p99 " + detail::fmt(p99) + " over " +
               std::to_string(cert_ratios.size()) + " instances";
    c.data = {{"max", worst}, {"p99", p99}, {"instances", cert_ratios.size()}};
  }
  {
    Criterion& c = out.doubling;
    c.id = 5;
    c.name = "doubling";
    Window d;
    json per_n = json::object();
    for (std::size_t k = 0; k < degrees.size(); ++k) {
      d.merge(stats[k].doubling);
      per_n[std::to_string(degrees[k])] = stats[k].doubling.to_json();
    }
    c.pass = worst_monotone <= Limits::doubling_monotone && d.hi <= Limits::doubling_ratio;
    c.detail = "max (l_2n - l_n)/l_n " + detail::fmt(worst_monotone) + " (limit 1e-10), max l_n/l_2n " +
               detail::fmt(d.hi) + " (limit 100)";
    c.data = {{"monotone_excess", worst_monotone}, {"ratio", d.to_json()}, {"per_n", per_n}};
  }
  {
    Criterion& c = out.fit;
    c.id = 7;
    c.name = "parabola fit";
    c.pass = case3 > 0 && fit_failures == 0;
    c.detail = std::to_string(case3) + " Case-3 instances, " + std::to_string(fit_failures) +
               " failures, worst k vs oracle " + detail::fmt(fit_worst_rel) + " (limit 1e-6), max sqrt(k(delta+beta))/alpha " +
               detail::fmt(fit_worst_bound);
    if (!first_fit_failure.empty()) c.detail += "; first failure: " + first_fit_failure;
    c.data = {{"instances", case3}, {"failures", fit_failures}, {"oracle_relative", fit_worst_rel},
              {"parameter_bound", fit_worst_bound}};
  }
  return out;
}

inline Criterion trapezoid_experiment() {
  return detail::timed(4, "trapezoid", [](Criterion& c) {
    Window all;
    json rows = json::array();
    for (double a : {1.0 / 3.0, 0.1, 0.01}) {
      const ConvexPolygon poly = trapezoid(a);
      for (int n : {4, 8, 16}) {
        const ChristoffelEvaluator ev(poly, n);
        const double d0 = Limits::trapezoid_c / (n * n);
        Window w;
        for (int i = 0; i < 12; ++i) {
          const double delta = d0 * std::pow(0.5 / d0, i / 11.0);
          w.add(ev(Point2(0.0, delta)) * n * n / std::sqrt(delta * (a + delta)));
        }
        rows.push_back({{"a", a}, {"n", n}, {"window", w.to_json()}});
        all.merge(w);
      }
    }
    c.pass = all.spread() <= Limits::trapezoid_spread;
    c.detail = "window [" + detail::fmt(all.lo) + ", " + detail::fmt(all.hi) + "] spread " + detail::fmt(all.spread()) +
               " (limit 30), delta in [n^-2, 1/2]";
    c.data = {{"window", all.to_json()}, {"spread", all.spread()}, {"c", Limits::trapezoid_c}, {"rows", rows}};
  });
}

inline Criterion affine_covariance(std::uint64_t seed) {
  return detail::timed(6, "affine covariance", [seed](Criterion& c) {
    Rng rng(seed ^ 0x6a09e667f3bcc909ULL);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const ConvexPolygon poly = random_polygon(rng, 3, 20);
      const AffineMap2 t = random_affine(rng);
      const Point2 x = random_interior_point(rng, poly);
      const int n = 1 + i % 8;
      const double base = christoffel_eval(poly, n, x) * std::abs(t.det());
      const double moved = christoffel_eval(poly.transformed(t), n, t(x));
      worst = std::max(worst, std::abs(moved - base) / base);
    }
    c.pass = worst <= Limits::affine_relative;
    c.detail = "max relative deviation " + detail::fmt(worst) + " over 100 cases (limit 1e-8)";
    c.data = {{"max_relative", worst}};
  });
}

inline Criterion tchakaloff_experiment(std::uint64_t seed) {
  return detail::timed(8, "tchakaloff", [seed](Criterion& c) {
    Rng rng(seed ^ 0xbb67ae8584caa73bULL);
    double worst_residual = 0.0;
    double min_weight = std::numeric_limits<double>::infinity();
    bool counts_ok = true;
    for (int i = 0; i < 30; ++i) {
      const ConvexPolygon poly = random_polygon(rng, 3, 40);
      const int mn = 1 + i % 15;
      const int degree = 2 * mn;
      const Quadrature fine = fine_quadrature(poly, degree);
      const Quadrature rule = tchakaloff_compress(fine, poly, degree);
      counts_ok = counts_ok && rule.size() <= polynomial_space_dim(degree);
      for (double w : rule.weights) min_weight = std::min(min_weight, w);
      worst_residual = std::max(worst_residual, compression_residual(poly, fine, rule, degree));
    }
    c.pass = counts_ok && min_weight > 0.0 && worst_residual <= Limits::compression_residual;
    c.detail = std::string("node counts within dim P: ") + (counts_ok ? "yes" : "no") + ", min weight " +
               detail::fmt(min_weight) + ", max residual " + detail::fmt(worst_residual) + " (limit 1e-8)";
    c.data = {{"max_residual", worst_residual}, {"min_weight", min_weight}, {"counts_ok", counts_ok}};
  });
}

inline Criterion mesh_experiment(std::uint64_t seed, int trials) {
  return detail::timed(9, "mesh norming", [seed, trials](Criterion& c) {
    Rng rng(seed ^ 0x3c6ef372fe94f82bULL);
    std::vector<std::pair<std::string, ConvexPolygon>> domains{{"square", unit_square()}, {"disk", unit_disk_polygon()}};
    for (int i = 0; i < 3; ++i) domains.emplace_back("random" + std::to_string(i), random_polygon(rng, 5, 40));
    bool ok = true;
    double worst_slack = 0.0;
    double worst_nu = 0.0;
    json rows = json::array();
    for (const auto& [name, poly] : domains) {
      for (int n : {2, 3, 4}) {
        const int m = 2;
        const PolynomialMesh mesh = build_mesh(poly, n, m);
        const double measured = verify_mesh(poly, mesh, trials, seed + static_cast<std::uint64_t>(n));
        const auto card_limit = static_cast<std::size_t>((2 * m * n + 1) * (m * n + 1));
        ok = ok && measured <= mesh.nu_bound * Limits::mesh_slack && mesh.nu_bound <= Limits::mesh_nu &&
             mesh.cardinality() <= card_limit;
        worst_slack = std::max(worst_slack, measured / mesh.nu_bound);
        worst_nu = std::max(worst_nu, mesh.nu_bound);
        rows.push_back({{"domain", name}, {"n", n}, {"nu_bound", mesh.nu_bound}, {"measured", measured},
                        {"cardinality", mesh.cardinality()}, {"limit", card_limit}});
      }
    }
    c.pass = ok;
    c.detail = "max measured/nu_bound " + detail::fmt(worst_slack) + " (limit 1.05), max nu_bound " + detail::fmt(worst_nu) +
               " (limit 10), cardinality within (2mn+1)(mn+1): " + (ok ? "yes" : "see data");
    c.data = {{"rows", rows}, {"max_measured_over_bound", worst_slack}, {"max_nu_bound", worst_nu}};
  });
}

inline Criterion oracle_equivalences() {
  return detail::timed(10, "oracle equivalences", [](Criterion& c) {
    double lambda_err = 0.0;
    for (const auto& [lo, hi] : std::vector<std::pair<Point2, Point2>>{{{0, 0}, {1, 1}}, {{-1, -1}, {1, 1}}, {{2, -3}, {2.5, -2.5}}}) {
      const ConvexPolygon sq({lo, {hi.x(), lo.y()}, hi, {lo.x(), hi.y()}});
      const ChristoffelEvaluator ev(sq, 1);
      for (int i = 0; i <= 4; ++i) {
        for (int j = 0; j <= 4; ++j) {
          const Point2 x = lo + Point2((hi - lo).x() * i / 4.0, (hi - lo).y() * j / 4.0);
          const double oracle = static_cast<double>(testing::lambda1_box(lo, hi, x));
          lambda_err = std::max(lambda_err, std::abs(ev(x) - oracle) / oracle);
        }
      }
    }
    double moment_err = 0.0;
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
      std::vector<Point2> v{{uniform(rng, -2, 2), uniform(rng, -2, 2)},
                            {uniform(rng, -2, 2), uniform(rng, -2, 2)},
                            {uniform(rng, -2, 2), uniform(rng, -2, 2)}};
      if (std::abs(cross(v[1] - v[0], v[2] - v[0])) < 0.1) continue;
      const ConvexPolygon tri = ConvexPolygon::from_any_orientation(v);
      const MomentTable m = polygon_moments(tri, 5);
      for (int p = 0; p <= 10; ++p) {
        for (int q = 0; p + q <= 10; ++q) {
          const long double oracle = testing::triangle_moment_dirichlet(v[0], v[1], v[2], p, q);
          moment_err = std::max(moment_err, static_cast<double>(std::abs(m(p, q) - oracle) / std::max(1.0L, std::abs(oracle))));
        }
      }
    }
    const double bf = testing::brute_force_L(unit_disk_polygon(), Point2::Zero(), 32);
    c.pass = lambda_err <= Limits::lambda1_oracle && moment_err <= Limits::dirichlet_oracle && bf >= Limits::brute_force_center;
    c.detail = "lambda_1 vs Gram-Schmidt " + detail::fmt(lambda_err) + " (limit 1e-12), moments vs Dirichlet " +
               detail::fmt(moment_err) + " (limit 1e-13), brute-force L at disk center " + detail::fmt(bf) + " (limit >= 0.9)";
    c.data = {{"lambda1_relative", lambda_err}, {"moment_relative", moment_err}, {"brute_force_L", bf}};
  });
}

/// Runs all ten criteria in order; `report` sees each as soon as it finishes.
inline std::vector<Criterion> run_all(const Config& config, const std::function<void(const Criterion&)>& report = {}) {
  std::vector<Criterion> out;
  auto push = [&](Criterion c, double budget = std::numeric_limits<double>::infinity()) {
    if (c.seconds > budget) {
      c.pass = false;
      c.detail += "; runtime " + detail::fmt(c.seconds) + " s over budget " + detail::fmt(budget) + " s";
    }
    if (report) report(c);
    out.push_back(std::move(c));
  };
  push(disk_behavior(), Limits::disk_seconds);
  CorpusResults corpus;
  try {
    corpus = corpus_experiments(config);
  } catch (const std::exception& e) {
    for (auto [id, name] : std::vector<std::pair<int, const char*>>{{2, "sandwich"}, {3, "certificate ratio"}, {5, "doubling"}, {7, "parabola fit"}}) {
      Criterion c;
      c.id = id;
      c.name = name;
      c.detail = std::string("exception: ") + e.what();
      (id == 2 ? corpus.sandwich : id == 3 ? corpus.certificates : id == 5 ? corpus.doubling : corpus.fit) = c;
    }
  }
  push(corpus.sandwich, Limits::corpus_seconds);
  push(corpus.certificates);
  push(trapezoid_experiment(), Limits::trapezoid_seconds);
  push(corpus.doubling);
  push(affine_covariance(config.seed));
  push(corpus.fit);
  push(tchakaloff_experiment(config.seed), Limits::tchakaloff_seconds);
  push(mesh_experiment(config.seed, config.mesh_trials), Limits::mesh_seconds);
  push(oracle_equivalences());
  return out;
}

inline json summary_json(const std::vector<Criterion>& results, const Config& config) {
  json crit = json::array();
  bool all = true;
  for (const auto& c : results) {
    all = all && c.pass;
    crit.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}, {"data", c.data}});
  }
  return {{"seed", config.seed}, {"corpus_size", config.corpus_size}, {"all_pass", all}, {"criteria", crit}};
}

}  // namespace christoffel::corpus
