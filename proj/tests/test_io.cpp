#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "biotsim/run_config.hpp"
#include "biotsim/vtk_writer.hpp"
#include "doctest.h"

using namespace biotsim;

namespace {

// Minimal legacy-VTK reader for the round-trip checks.
struct VtkContent {
  int n_points = 0;
  int n_cells = 0;
  std::vector<std::vector<double>> scalars;
  std::vector<std::vector<Vec2>> vectors;
};

VtkContent parse_vtk(const std::string& text) {
  VtkContent content;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    if (token == "POINTS") {
      in >> content.n_points;
    } else if (token == "CELLS") {
      in >> content.n_cells;
    } else if (token == "SCALARS") {
      std::string name, type;
      int comps;
      in >> name >> type >> comps;
      in >> token >> token;  // LOOKUP_TABLE default
      std::vector<double> values(content.n_points);
      for (double& v : values) in >> v;
      content.scalars.push_back(std::move(values));
    } else if (token == "VECTORS") {
      std::string name, type;
      in >> name >> type;
      std::vector<Vec2> values(content.n_points);
      for (auto& v : values) {
        double z;
        in >> v[0] >> v[1] >> z;
      }
      content.vectors.push_back(std::move(values));
    }
  }
  return content;
}

}  // namespace

TEST_CASE("vtk writer emits the grid and zero scalars") {
  const Mesh mesh = unit_square_mesh(1);
  const FeSpace p1(mesh, Family::P1Scalar);
  const CoefficientVector zero(p1);

  std::ostringstream out;
  write_vtk(out, mesh, {{"pressure", &zero}}, {});
  const std::string text = out.str();
  CHECK(text.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
  CHECK(text.find("POINTS 4 double") != std::string::npos);
  CHECK(text.find("CELLS 2 8") != std::string::npos);

  const VtkContent content = parse_vtk(text);
  CHECK(content.n_points == 4);
  CHECK(content.n_cells == 2);
  REQUIRE(content.scalars.size() == 1);
  for (double v : content.scalars[0]) CHECK(v == 0.0);
}

TEST_CASE("vtk round trip recovers vertex values exactly") {
  const Mesh mesh = refine_uniform(unit_square_mesh(2));
  const FeSpace p1(mesh, Family::P1Scalar);
  const FeSpace p2(mesh, Family::P2Vector2);

  const CoefficientVector pressure = interpolate(
      p1, [](double x, double y, double) { return 0.1 + 1.7 * x - 0.3 * y * y; }, 0.0);
  const CoefficientVector displacement = interpolate(
      p2, [](double x, double y, double) -> Vec2 { return {x * y + 0.25, x - y / 3.0}; }, 0.0);

  std::ostringstream out;
  write_vtk(out, mesh, {{"p", &pressure}}, {{"u", &displacement}});
  const VtkContent content = parse_vtk(out.str());
  REQUIRE(content.scalars.size() == 1);
  REQUIRE(content.vectors.size() == 1);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    CHECK(content.scalars[0][v] == pressure.values[v]);
    CHECK(content.vectors[0][v][0] == displacement.values[2 * v]);
    CHECK(content.vectors[0][v][1] == displacement.values[2 * v + 1]);
  }
}

TEST_CASE("constant vector fields are written as constant tuples") {
  const Mesh mesh = unit_square_mesh(1);
  const FeSpace p2(mesh, Family::P2Vector2);
  const CoefficientVector ones =
      interpolate(p2, [](double, double, double) -> Vec2 { return {1.0, 0.0}; }, 0.0);
  std::ostringstream out;
  write_vtk(out, mesh, {}, {{"u", &ones}});
  CHECK(out.str().find("1 0 0") != std::string::npos);
  const VtkContent content = parse_vtk(out.str());
  for (const auto& v : content.vectors[0]) {
    CHECK(v[0] == 1.0);
    CHECK(v[1] == 0.0);
  }
}

TEST_CASE("fields from another mesh are rejected") {
  const Mesh a = unit_square_mesh(1);
  const Mesh b = unit_square_mesh(2);
  const FeSpace p1(b, Family::P1Scalar);
  const CoefficientVector field(p1);
  std::ostringstream out;
  CHECK_THROWS_AS(write_vtk(out, a, {{"p", &field}}, {}), std::invalid_argument);
}

TEST_CASE("config defaults and typed access") {
  const RunConfig cfg = RunConfig::defaults();
  CHECK(cfg.get_real("E") == 9010.0);
  CHECK(cfg.get_real("nu") == 0.35);
  CHECK(cfg.get_int("target_elements") == 9155);
  CHECK(cfg.get("algorithm") == "coupled");
  const std::vector<double> rates = cfg.get_list("rates");
  REQUIRE(rates.size() == 5);
  CHECK(rates[2] == 0.009);
}

TEST_CASE("config parsing accepts comments and rejects bad input") {
  const RunConfig cfg = RunConfig::from_string(
      "# comment line\n"
      "E = 584\n"
      "rates = 1,2,4   # trailing comment\n"
      "\n"
      "sweep_param = nu\n");
  CHECK(cfg.get_real("E") == 584.0);
  CHECK(cfg.get_list("rates") == std::vector<double>{1.0, 2.0, 4.0});
  CHECK(cfg.get("sweep_param") == "nu");
  CHECK(cfg.get_real("nu") == 0.35);  // untouched default

  CHECK_THROWS_WITH_AS(RunConfig::from_string("unknown_key = 3\n"),
                       doctest::Contains("unknown config key"), std::runtime_error);
  CHECK_THROWS_AS(RunConfig::from_string("E = not-a-number\n"), std::runtime_error);
  CHECK_THROWS_AS(RunConfig::from_string("E 584\n"), std::runtime_error);
}

TEST_CASE("help text enumerates every key with its default") {
  const std::string help = config_help_text();
  for (const ConfigKey& key : config_schema()) {
    CAPTURE(key.name);
    CHECK(help.find(std::string("  ") + key.name + " (default ") != std::string::npos);
    CHECK(help.find(std::string("(default ") + key.default_value + ")") != std::string::npos);
  }
}

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

// Runs the installed CLI (path via BIOTSIM_CLI) capturing stdout+stderr.
CommandResult run_cli(const std::string& args) {
  const char* cli = std::getenv("BIOTSIM_CLI");
  REQUIRE_MESSAGE(cli != nullptr, "BIOTSIM_CLI must point at the biotsim binary");
  const std::string cmd = std::string(cli) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CommandResult result;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof(buf), pipe)) result.output.append(buf, n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

}  // namespace

TEST_CASE("cli help lists every configuration key") {
  const CommandResult result = run_cli("edema --help");
  CHECK(result.exit_code == 0);
  for (const ConfigKey& key : config_schema()) {
    CAPTURE(key.name);
    CHECK(result.output.find(key.name) != std::string::npos);
  }
}

TEST_CASE("cli rejects bad flag values with exit code 1") {
  CHECK(run_cli("verify --levels 1").exit_code == 1);
  CHECK(run_cli("verify --nu 0.6 --levels 2").exit_code == 1);
  CHECK(run_cli("verify --algorithm sideways").exit_code == 1);
  CHECK(run_cli("edema --mode normal --mesh /nonexistent/mesh.txt").exit_code == 1);
  const CommandResult missing = run_cli("edema --mode normal --mesh /nonexistent/mesh.txt");
  CHECK(missing.output.find("/nonexistent/mesh.txt") != std::string::npos);
}

TEST_CASE("cli verify output is bitwise reproducible") {
  const std::string args = "verify --algorithm coupled --nu 0.3 --K 1 --dt 1e-4 --levels 2";
  const CommandResult first = run_cli(args);
  const CommandResult second = run_cli(args);
  CHECK(first.exit_code == 0);
  CHECK(first.output == second.output);
  CHECK(first.output.find("elements,h1_u") != std::string::npos);
}
