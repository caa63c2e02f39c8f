// Christoffel function, certificates and a norming mesh on a polygon file.
//   usage <polygon.json> [degree]
#include <cstdio>
#include <cstdlib>
#include <exception>

#include "christoffel.hpp"
#include "christoffel/io.hpp"

int main(int argc, char** argv) {
  using namespace christoffel;
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s polygon.json [degree]\n", argv[0]);
    return 2;
  }
  try {
    const ConvexPolygon poly = io::read_polygon(argv[1]);
    const int n = argc > 2 ? std::atoi(argv[2]) : 6;

    // one evaluator serves many points
    const ChristoffelEvaluator ev(poly, n);
    const Point2 c = poly.centroid();
    std::printf("area %.6g, lambda_%d(centroid) = %.6g\n", poly.area(), n, ev(c));

    // lower and upper are L/n^2 and U/n^2; lambda sits between them up to
    // absolute constants, so print the two ratios
    const Point2 near_edge = 0.05 * c + 0.95 * poly.vertex(0);
    for (const Point2& x : {c, near_edge}) {
      const TwoSidedEstimate est = christoffel_two_sided(ev, x);
      std::printf("(%.3f, %.3f): lambda = %.3e, lambda/lower = %.1f, lambda/upper = %.2f, cases %d/%d\n", x.x(), x.y(),
                  est.lambda, est.lambda / est.lower, est.lambda / est.upper, est.case_lower, est.case_upper);
    }

    const PolynomialMesh mesh = build_mesh(poly, 3, 2);
    std::printf("mesh for P_3: %zu points, nu <= %.3f (sampled), observed %.3f\n", mesh.cardinality(), mesh.nu_bound,
                verify_mesh(poly, mesh, 200, 1));
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  }
  return 0;
}
