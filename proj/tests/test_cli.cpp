#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

using nlohmann::json;

namespace {

struct CliResult {
  int status = -1;
  std::string out;
};

/// Runs the CLI with `args`; stderr is captured instead of stdout when asked.
CliResult cli(const std::string& args, bool capture_stderr = false) {
  const std::string cmd = std::string(CHRISTOFFEL_CLI) + " " + args + (capture_stderr ? " 2>&1 >/dev/null" : " 2>/dev/null");
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string sample(const std::string& name) { return std::string(CHRISTOFFEL_SAMPLES) + "/" + name; }

}  // namespace

TEST(Cli, Version) {
  const CliResult r = cli("--version");
  ASSERT_EQ(r.status, 0);
  const json j = json::parse(r.out);
  EXPECT_TRUE(j.is_object());
  EXPECT_FALSE(j.empty());
}

TEST(Cli, EvalDegreeZeroIsArea) {
  const CliResult r = cli("eval --polygon " + sample("triangle.json") + " -n 0");
  ASSERT_EQ(r.status, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["degree"], 0);
  EXPECT_NEAR(j["area"].get<double>(), 0.5, 1e-15);
  ASSERT_EQ(j["values"].size(), 1u);
  EXPECT_NEAR(j["values"][0]["lambda"].get<double>(), 0.5, 1e-13);
}

TEST(Cli, EvalExplicitPoints) {
  const CliResult r = cli("eval --polygon " + sample("square.json") + " -n 1 --point 0.5,0.5 --point 0.25,0.75");
  ASSERT_EQ(r.status, 0) << r.out;
  const json j = json::parse(r.out);
  ASSERT_EQ(j["values"].size(), 2u);
  EXPECT_NEAR(j["values"][0]["lambda"].get<double>(), 1.0, 1e-12);
  // 1 / (1 + 3 u^2 + 3 v^2) with u, v the centered coordinates doubled
  EXPECT_NEAR(j["values"][1]["lambda"].get<double>(), 1.0 / (1.0 + 0.75 + 0.75), 1e-12);
}

TEST(Cli, FieldOnDiskHasClosedFormCenter) {
  const CliResult r = cli("field --shape disk -n 4 --grid 33x33");
  ASSERT_EQ(r.status, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,lambda,lower,upper,case_lower,case_upper");
  bool seen = false;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    double x = 0.0, y = 0.0, lambda = 0.0, lower = 0.0, upper = 0.0;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &x, &y, &lambda, &lower, &upper), 5);
    EXPECT_GT(lower, 0.0);
    EXPECT_GT(upper, lower);
    if (std::hypot(x, y) < 1e-12) {
      EXPECT_NEAR(lambda, std::numbers::pi / 9.0, 2e-4);
      seen = true;
    }
  }
  EXPECT_TRUE(seen);
  EXPECT_GT(rows, 600);
}

TEST(Cli, BoundsReport) {
  const CliResult r = cli("bounds --polygon " + sample("trapezoid.json") + " -n 6 --point 0,0.5");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("\"lower\""), std::string::npos);
  EXPECT_NE(r.out.find("\"parallelogram\""), std::string::npos);
}

TEST(Cli, MeshAndVerify) {
  const auto path = std::filesystem::temp_directory_path() / "cli_mesh.json";
  const CliResult r = cli("mesh --polygon " + sample("square.json") + " -n 2 -m 2 --out " + path.string());
  ASSERT_EQ(r.status, 0);
  const CliResult v = cli("verify --mesh " + path.string() + " --trials 200 --seed 42");
  ASSERT_EQ(v.status, 0) << v.out;
  const json j = json::parse(v.out);
  EXPECT_LE(j["cardinality"].get<int>(), 45);
  EXPECT_GE(j["measured"].get<double>(), 1.0);
  EXPECT_TRUE(j["within_bound"].get<bool>());
  std::filesystem::remove(path);
}

TEST(Cli, QuadCsvIsCompressed) {
  const CliResult r = cli("quad --polygon " + sample("square.json") + " -n 4");
  ASSERT_EQ(r.status, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,w");
  int rows = 0;
  double total = 0.0;
  while (std::getline(in, line)) {
    double x = 0.0, y = 0.0, w = 0.0;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &w), 3);
    total += w;
    ++rows;
  }
  EXPECT_LE(rows, 15);
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Cli, RepeatedRunsAreIdentical) {
  const std::string args = "mesh --shape ellipse:2,1 --vertices 64 -n 3 -m 2";
  const CliResult a = cli(args);
  const CliResult b = cli(args);
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli("eval --polygon " + sample("square.json")).status, 2);                 // missing degree
  EXPECT_EQ(cli("eval --polygon " + sample("square.json") + " -n 40").status, 2);     // degree too large
  EXPECT_EQ(cli("eval --polygon /nonexistent.json -n 2").status, 2);
  EXPECT_EQ(cli("eval --shape hexagon -n 2").status, 2);
  const CliResult r = cli("bounds --polygon " + sample("square.json") + " -n 2 --point 5,5", true);
  EXPECT_EQ(r.status, 2);
  const json j = json::parse(r.out);
  EXPECT_TRUE(j.contains("error"));
  EXPECT_TRUE(j.contains("message"));
}

TEST(Cli, NumericalFailureExitsThree) {
  EXPECT_EQ(cli("quad --polygon " + sample("square.json") + " -n 6 --tol-moment 1e-300").status, 3);
}
