#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "christoffel.hpp"
#include "christoffel/corpus.hpp"
#include "christoffel/io.hpp"

namespace {

using namespace christoffel;
using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

struct Options {
  std::string polygon;
  std::string shape;
  int vertices = kDefaultPolygonVertices;
  int degree = 0;
  int multiplier = 2;
  std::string grid = "64x64";
  std::uint64_t seed = corpus::Config{}.seed;
  std::string out;
  double tol_moment = kCompressionAcceptance;
  double tol_chol = kDefaultPivotTolerance;
  std::vector<std::string> points;
  std::string mesh;
  int trials = 500;
  int density = kDefaultSampleDensity;
  bool fine = false;
  std::size_t corpus_size = corpus::Config{}.corpus_size;
};

json constants_table() {
  return {{"version", kVersion},
          {"max_christoffel_degree", kMaxChristoffelDegree},
          {"max_mesh_degree", kMaxMeshDegree},
          {"max_grid_cells", kMaxGridCells},
          {"pivot_tolerance", kDefaultPivotTolerance},
          {"compression_target", kCompressionTarget},
          {"compression_acceptance", kCompressionAcceptance},
          {"case1_radius", kCase1Radius},
          {"boundary_guard", kBoundaryGuard},
          {"normalization_slack", kNormalizationSlack},
          {"mvee_tolerance", MveeOptions{}.tolerance},
          {"beta_floor", kBetaFloor},
          {"sample_density", kDefaultSampleDensity},
          {"min_sample_density", kMinSampleDensity},
          {"verify_lattice", kVerifyLattice},
          {"verify_edge_samples", kVerifyEdgeSamples},
          {"polygon_vertices", kDefaultPolygonVertices},
          {"default_seed", corpus::Config{}.seed}};
}

std::vector<double> split_numbers(const std::string& text, char sep, const std::string& what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidArgument, "cannot parse " + what + " '" + text + "'");
    }
  }
  return out;
}

Point2 parse_point_arg(const std::string& text) {
  const auto v = split_numbers(text, ',', "point");
  if (v.size() != 2) fail(ErrorKind::InvalidArgument, "point must be x,y");
  return {v[0], v[1]};
}

GridSpec parse_grid(const std::string& text) {
  const auto v = split_numbers(text, 'x', "grid");
  if (v.size() != 2 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1]) || v[0] < 1 || v[1] < 1 ||
      v[0] > 1e7 || v[1] > 1e7) {
    fail(ErrorKind::InvalidArgument, "grid must be WxH with positive integers");
  }
  return {static_cast<int>(v[0]), static_cast<int>(v[1]), std::nullopt};
}

/// disk | ellipse:a,b | superellipse:a,b,p
ConvexPolygon parse_shape(const std::string& spec, int vertices) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::vector<double> args =
      colon == std::string::npos ? std::vector<double>{} : split_numbers(spec.substr(colon + 1), ',', "shape");
  if (name == "disk" && args.empty()) return disk_polygon(vertices);
  if (name == "ellipse" && args.size() == 2) return ellipse_polygon(args[0], args[1], vertices);
  if (name == "superellipse" && args.size() == 3) return superellipse_polygon(args[0], args[1], args[2], vertices);
  fail(ErrorKind::InvalidArgument, "unknown shape '" + spec + "'");
}

ConvexPolygon load_polygon(const Options& o) {
  if (o.polygon.empty() == o.shape.empty()) fail(ErrorKind::InvalidArgument, "give exactly one of --polygon and --shape");
  if (!o.shape.empty()) return parse_shape(o.shape, o.vertices);
  return io::read_polygon(o.polygon);
}

void check_degree(int n) {
  if (n < 0) fail(ErrorKind::InvalidArgument, "degree must be non-negative");
  if (n > kMaxChristoffelDegree) fail(ErrorKind::DegreeTooLarge, "degree above 30");
}

void check_tolerances(const Options& o) {
  if (!(o.tol_moment > 0.0) || !(o.tol_chol > 0.0) || o.tol_chol >= 1.0) {
    fail(ErrorKind::InvalidArgument, "tolerances must lie in (0, 1)");
  }
}

CompressionOptions compression(const Options& o) {
  CompressionOptions c;
  c.acceptance = o.tol_moment;
  c.target = std::min(kCompressionTarget, o.tol_moment);
  c.pivot_tolerance = o.tol_chol;
  return c;
}

/// Writes to --out, or stdout when unset.
void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) fail(ErrorKind::InvalidArgument, "cannot write " + o.out);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void run_eval(const Options& o) {
  check_degree(o.degree);
  check_tolerances(o);
  const ConvexPolygon poly = load_polygon(o);
  const ChristoffelEvaluator ev(poly, o.degree, EvaluatorOptions{o.tol_chol});
  std::vector<Point2> pts;
  for (const auto& s : o.points) pts.push_back(parse_point_arg(s));
  if (pts.empty()) pts.push_back(poly.centroid());
  json values = json::array();
  for (const auto& p : pts) values.push_back({{"point", io::point_json(p)}, {"lambda", ev(p)}});
  emit(o, dump({{"degree", o.degree}, {"area", poly.area()}, {"values", values}}));
}

void run_field(const Options& o) {
  check_degree(o.degree);
  check_tolerances(o);
  const ConvexPolygon poly = load_polygon(o);
  std::ostringstream s;
  io::write_field_csv(s, christoffel_field(poly, o.degree, parse_grid(o.grid), EvaluatorOptions{o.tol_chol}));
  emit(o, s.str());
}

void run_bounds(const Options& o) {
  check_degree(o.degree);
  if (o.degree < 1) fail(ErrorKind::InvalidArgument, "bounds need degree >= 1");
  check_tolerances(o);
  const ConvexPolygon poly = load_polygon(o);
  const ChristoffelEvaluator ev(poly, o.degree, EvaluatorOptions{o.tol_chol});
  std::vector<Point2> pts;
  for (const auto& s : o.points) pts.push_back(parse_point_arg(s));
  if (pts.empty()) pts.push_back(poly.centroid());
  json reports = json::array();
  for (const auto& p : pts) {
    const CertificatePair certs = certificates_at(ev, p);
    const TwoSidedEstimate est = christoffel_two_sided(ev, p);
    reports.push_back({{"point", io::point_json(p)},
                       {"retracted", io::point_json(est.retracted)},
                       {"lambda", est.lambda},
                       {"lower", est.lower},
                       {"upper", est.upper},
                       {"lambda_over_lower", est.lambda / est.lower},
                       {"upper_over_lambda", est.upper / est.lambda},
                       {"certificates", json::array({io::certificate_json(certs.lower), io::certificate_json(certs.upper)})}});
  }
  emit(o, dump({{"degree", o.degree}, {"reports", reports}}));
}

void run_mesh(const Options& o) {
  check_tolerances(o);
  const ConvexPolygon poly = load_polygon(o);
  const PolynomialMesh mesh = build_mesh(poly, o.degree, o.multiplier, o.density, compression(o));
  json j = io::mesh_json(mesh);
  j["polygon"] = io::polygon_json(poly);
  emit(o, dump(j));
}

void run_quad(const Options& o) {
  check_tolerances(o);
  if (o.degree < 0) fail(ErrorKind::InvalidArgument, "degree must be non-negative");
  const ConvexPolygon poly = load_polygon(o);
  Quadrature rule = fine_quadrature(poly, o.degree);
  if (!o.fine) rule = tchakaloff_compress(rule, poly, o.degree, compression(o));
  std::ostringstream s;
  io::write_quadrature_csv(s, rule);
  emit(o, s.str());
}

void run_verify(const Options& o) {
  if (o.mesh.empty()) fail(ErrorKind::InvalidArgument, "verify needs --mesh");
  const json j = io::read_json_file(o.mesh);
  const PolynomialMesh mesh = io::parse_mesh(j);
  const ConvexPolygon poly =
      o.polygon.empty() && o.shape.empty() && j.contains("polygon") ? io::parse_polygon(j["polygon"]) : load_polygon(o);
  const double measured = verify_mesh(poly, mesh, o.trials, o.seed);
  emit(o, dump({{"n", mesh.n},
                {"m", mesh.m},
                {"cardinality", mesh.cardinality()},
                {"trials", o.trials},
                {"seed", o.seed},
                {"measured", measured},
                {"nu_bound", mesh.nu_bound},
                {"within_bound", measured <= mesh.nu_bound}}));
}

void run_corpus(const Options& o) {
  corpus::Config config;
  config.seed = o.seed;
  config.corpus_size = o.corpus_size;
  config.mesh_trials = o.trials;
  const auto results = corpus::run_all(config, [](const corpus::Criterion& c) {
    std::cerr << (c.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << '\n';
  });
  emit(o, dump(corpus::summary_json(results, config)));
}

int report(ErrorKind kind, const std::string& message, int code) {
  std::cerr << io::error_json(kind, message).dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Christoffel functions, two-sided certificates and polynomial meshes on convex polygons"};
  app.set_version_flag("--version", [] { return constants_table().dump(2); });
  app.require_subcommand(1);
  Options o;

  auto polygon_opts = [&](CLI::App* sub) {
    sub->add_option("--polygon", o.polygon, "Polygon JSON {\"vertices\": [[x, y], ...]}");
    sub->add_option("--shape", o.shape, "disk | ellipse:a,b | superellipse:a,b,p");
    sub->add_option("--vertices", o.vertices, "Vertex count for --shape")->capture_default_str();
    sub->add_option("--out", o.out, "Output file (default stdout)");
  };
  auto tol_opts = [&](CLI::App* sub) {
    sub->add_option("--tol-moment", o.tol_moment, "Accepted relative moment residual of compressed rules")
        ->capture_default_str();
    sub->add_option("--tol-chol", o.tol_chol, "Relative pivot floor of the orthogonalization")->capture_default_str();
  };

  auto* eval = app.add_subcommand("eval", "lambda_n at points (default: centroid)");
  polygon_opts(eval);
  tol_opts(eval);
  eval->add_option("-n,--degree", o.degree)->required();
  eval->add_option("--point", o.points, "x,y (repeatable)");

  auto* field = app.add_subcommand("field", "lambda_n and bounds on the interior points of a grid (CSV)");
  polygon_opts(field);
  tol_opts(field);
  field->add_option("-n,--degree", o.degree)->required();
  field->add_option("--grid", o.grid, "WxH lattice over the bounding box")->capture_default_str();

  auto* bounds = app.add_subcommand("bounds", "Certificate report at points (JSON)");
  polygon_opts(bounds);
  tol_opts(bounds);
  bounds->add_option("-n,--degree", o.degree)->required();
  bounds->add_option("--point", o.points, "x,y (repeatable)");

  auto* mesh = app.add_subcommand("mesh", "Norming mesh for P_n from a compressed rule (JSON)");
  polygon_opts(mesh);
  tol_opts(mesh);
  mesh->add_option("-n,--degree", o.degree)->required();
  mesh->add_option("-m,--multiplier", o.multiplier)->capture_default_str();
  mesh->add_option("--density", o.density, "Lattice density for nu_bound")->capture_default_str();

  auto* quad = app.add_subcommand("quad", "Positive rule exact on P_n (CSV x,y,w)");
  polygon_opts(quad);
  tol_opts(quad);
  quad->add_option("-n,--degree", o.degree)->required();
  quad->add_flag("--fine", o.fine, "Skip compression");

  auto* verify = app.add_subcommand("verify", "Random-polynomial check of a mesh (JSON)");
  polygon_opts(verify);
  verify->add_option("--mesh", o.mesh)->required();
  verify->add_option("--trials", o.trials)->capture_default_str();
  verify->add_option("--seed", o.seed)->capture_default_str();

  auto* corpus_cmd = app.add_subcommand("corpus", "Rerun the acceptance experiments (JSON summary)");
  corpus_cmd->add_option("--seed", o.seed)->capture_default_str();
  corpus_cmd->add_option("--size", o.corpus_size, "Number of random polygons")->capture_default_str();
  corpus_cmd->add_option("--trials", o.trials, "Mesh verification trials")->capture_default_str();
  corpus_cmd->add_option("--out", o.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report(ErrorKind::InvalidArgument, e.what(), 2);
  }

  try {
    if (*eval) run_eval(o);
    if (*field) run_field(o);
    if (*bounds) run_bounds(o);
    if (*mesh) run_mesh(o);
    if (*quad) run_quad(o);
    if (*verify) run_verify(o);
    if (*corpus_cmd) run_corpus(o);
  } catch (const Error& e) {
    return report(e.kind(), e.what(), e.is_numerical() ? 3 : 2);
  } catch (const std::exception& e) {
    return report(ErrorKind::NumericalFailure, e.what(), 3);
  }
  return 0;
}
