#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "christoffel/bounds.hpp"
#include "christoffel/christoffel.hpp"
#include "christoffel/error.hpp"
#include "christoffel/geometry.hpp"
#include "christoffel/mesh.hpp"
#include "christoffel/quadrature.hpp"

namespace christoffel::io {

using nlohmann::json;

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json point_json(const Point2& p) { return json::array({p.x(), p.y()}); }

inline json points_json(const std::vector<Point2>& pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back(point_json(p));
  return out;
}

inline json matrix_json(const Matrix2& m) {
  return json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})});
}

inline Point2 parse_point(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(ErrorKind::InvalidPolygon, "expected a point [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

/// {"vertices": [[x, y], ...]}, counterclockwise and strictly convex.
inline ConvexPolygon parse_polygon(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array()) {
    fail(ErrorKind::InvalidPolygon, "polygon JSON needs a \"vertices\" array");
  }
  std::vector<Point2> v;
  for (const auto& p : j["vertices"]) v.push_back(parse_point(p));
  return ConvexPolygon(std::move(v));
}

inline json polygon_json(const ConvexPolygon& poly) { return {{"vertices", points_json(poly.vertices())}}; }

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::InvalidArgument, path + ": " + e.what());
  }
}

inline ConvexPolygon read_polygon(const std::string& path) { return parse_polygon(read_json_file(path)); }

inline json certificate_json(const BoundCertificate& cert) {
  json witness;
  if (std::holds_alternative<Ellipse>(cert.witness)) {
    const Ellipse& e = cert.ellipse();
    witness = {{"type", "ellipse"}, {"center", point_json(e.center)}, {"axes", matrix_json(e.axes)}};
  } else {
    const AffineMap2& f = cert.frame();
    witness = {{"type", "parallelogram"},
               {"linear", matrix_json(f.linear())},
               {"shift", point_json(f.shift())},
               {"corners", points_json({f(Point2(0, 0)), f(Point2(1, 0)), f(Point2(1, 1)), f(Point2(0, 1))})}};
  }
  return {{"kind", cert.kind == BoundKind::Lower ? "lower" : "upper"},
          {"case", cert.case_tag},
          {"value", cert.value},
          {"witness", witness}};
}

inline json mesh_json(const PolynomialMesh& mesh) {
  return {{"n", mesh.n},
          {"m", mesh.m},
          {"nu_bound", mesh.nu_bound},
          {"sample_density", mesh.sample_density},
          {"points", points_json(mesh.points)},
          {"weights", mesh.weights},
          {"exact_degree", mesh.exact_degree}};
}

inline PolynomialMesh parse_mesh(const json& j) {
  try {
    PolynomialMesh mesh;
    mesh.n = j.at("n").get<int>();
    mesh.m = j.at("m").get<int>();
    mesh.nu_bound = j.at("nu_bound").get<double>();
    mesh.sample_density = j.at("sample_density").get<int>();
    mesh.exact_degree = j.at("exact_degree").get<int>();
    for (const auto& p : j.at("points")) mesh.points.push_back(parse_point(p));
    mesh.weights = j.at("weights").get<std::vector<double>>();
    return mesh;
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("malformed mesh JSON: ") + e.what());
  }
}

inline void write_quadrature_csv(std::ostream& out, const Quadrature& quad) {
  out << "x,y,w\n";
  for (std::size_t i = 0; i < quad.size(); ++i) {
    out << format_double(quad.nodes[i].x()) << ',' << format_double(quad.nodes[i].y()) << ','
        << format_double(quad.weights[i]) << '\n';
  }
}

inline void write_field_csv(std::ostream& out, const std::vector<FieldRow>& rows) {
  out << "x,y,lambda,lower,upper,case_lower,case_upper\n";
  for (const auto& r : rows) {
    out << format_double(r.point.x()) << ',' << format_double(r.point.y()) << ',' << format_double(r.lambda) << ','
        << format_double(r.lower) << ',' << format_double(r.upper) << ',' << r.case_lower << ',' << r.case_upper
        << '\n';
  }
}

inline json error_json(ErrorKind kind, const std::string& message) {
  return {{"error", std::string(to_string(kind))}, {"message", message}};
}

}  // namespace christoffel::io
