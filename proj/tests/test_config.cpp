#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "fld/config.hpp"
#include "fld/io.hpp"

using namespace fld;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("every preset validates") {
  for (const std::string& name : preset_names()) {
    CAPTURE(name);
    const ScenarioConfig c = preset(name);
    CHECK_NOTHROW(c.validate());
    CHECK_FALSE(c.initial().empty());
  }
  CHECK(kind_of([] { preset("nope"); }) == ErrorKind::ConfigError);
}

TEST_CASE("nested objects and dotted keys mean the same thing") {
  const ScenarioConfig a = parse_config(R"({"flux": {"variant": "relativistic", "rho": 2.5}, "newton": {"tol": 1e-10},
                                             "initial": "self_similar"})");
  const ScenarioConfig b = parse_config(R"({"flux.variant": "relativistic", "flux.rho": 2.5, "newton.tol": 1e-10,
                                             "initial": "self_similar"})");
  CHECK(a.flux.variant == FluxVariant::Relativistic);
  CHECK(a.flux.rho == 2.5);
  CHECK(b.flux.rho == 2.5);
  CHECK(a.scheme.newton.tol == b.scheme.newton.tol);
}

TEST_CASE("a preset seeds defaults that other keys override") {
  const ScenarioConfig c = parse_config(R"({"preset": "riemann", "cells": 900, "stepper": "explicit"})");
  CHECK(c.cells == 900);
  CHECK(c.x_min == -16.0);
  CHECK(c.scheme.stepper == Stepper::ExplicitEuler);
  CHECK(c.scheme.boundary == Boundary::NeumannZeroFlux);
}

TEST_CASE("config errors") {
  const char* bad[] = {
      R"({"m": 2, "flux": {"delt": 1}})",                      // unknown nested key
      R"({"cell": 10})",                                       // unknown key
      R"({"m": "two"})",                                       // wrong type
      R"({"cells": 10.5})",                                    // not an integer
      R"({"boundary": "periodic"})",                           // bad enum value
      R"({"m": 2,)",                                           // not JSON
      R"([1, 2])",                                             // not an object
      R"({"x_min": 1, "x_max": 0})",                           // empty domain
      R"({"t_end": 1, "output_times": [0.5, 2]})",             // output after t_end
      R"({"dim": 2, "geometry": "radial", "x_min": -1})",      // radial grid must start at 0
      R"({"dim": 2, "geometry": "line"})",                     // geometry vs dim
      R"({"m": 0.5})",                                         // m must exceed 1
      R"({"cfl_h": 2})",                                       // CFL out of range
      R"({"seed": -1})",                                       // negative seed
      R"({"initial": "example82", "m": 3})",                   // datum precondition
      R"({"initial": {"breakpoints": [0, 1], "pieces": [{"quadratic": 1}]}})",
      R"({"initial": {"breakpoints": [1, 0], "pieces": [{"constant": 1}]}})",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK(kind_of([&] { parse_config(text); }) == ErrorKind::ConfigError);
  }
  CHECK(kind_of([] { load_config("/nonexistent/scenario.json"); }) == ErrorKind::ConfigError);
}

TEST_CASE("load_config reads a file") {
  const auto path = std::filesystem::temp_directory_path() / "fld_config_test.json";
  std::ofstream(path) << R"({"preset": "barrier_sandwich", "t_end": 0.3, "output_times": [0.1, 0.2]})";
  const ScenarioConfig c = load_config(path.string());
  CHECK(c.t_end == 0.3);
  CHECK(c.output_times.size() == 2);
  CHECK(c.initial()(0.5) == doctest::Approx(0.5));
  CHECK(c.initial()(-1.5) == 1.0);
  std::filesystem::remove(path);
}

TEST_CASE("inline profiles round-trip through JSON (property)") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    std::vector<double> bp{-1.0 + unit(rng)};
    std::vector<Piece> pieces;
    for (int k = 0; k < n; ++k) {
      bp.push_back(bp.back() + 0.1 + unit(rng));
      pieces.push_back(k % 2 ? Piece::constant(0.1 + unit(rng)) : Piece::linear(0.0, 0.5 + unit(rng)));
    }
    std::vector<JumpMarker> jumps;
    for (int k = 1; k < n; ++k) jumps.push_back({bp[k], pieces[k - 1](bp[k]), pieces[k](bp[k])});
    const PiecewiseProfile p(bp, pieces, false, jumps);
    const PiecewiseProfile q = profile_from_json_text(profile_to_json_text(p));
    CHECK(q.breakpoints() == p.breakpoints());
    CHECK(q.jumps().size() == p.jumps().size());
    for (double x = bp.front() - 0.5; x < bp.back() + 0.5; x += 0.01) CHECK(q(x) == p(x));
  }
}

TEST_CASE("parse_times") {
  CHECK(parse_times("0.5,1,3.5") == std::vector<double>{0.5, 1.0, 3.5});
  CHECK(parse_times(" 2 ") == std::vector<double>{2.0});
  CHECK(kind_of([] { parse_times(""); }) == ErrorKind::ConfigError);
  CHECK(kind_of([] { parse_times("1,x"); }) == ErrorKind::ConfigError);
  CHECK(kind_of([] { parse_times("1.5abc"); }) == ErrorKind::ConfigError);
}

TEST_CASE("format_real keeps 17 significant digits and round-trips (property)") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(2.0) == "2");
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> exponent(-300.0, 300.0);
  std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double x = mantissa(rng) * std::pow(10.0, exponent(rng));
    CHECK(std::stod(format_real(x)) == x);
  }
}

TEST_CASE("json_dump prints floats like the CSV files") {
  const nlohmann::json doc = {{"a", 0.1}, {"b", {1, 2.5}}, {"c", std::numeric_limits<double>::infinity()},
                              {"d", "text"}, {"e", nlohmann::json::array()}};
  const std::string s = json_dump(doc);
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  const auto back = nlohmann::json::parse(s);
  CHECK(back["a"].get<double>() == 0.1);
  CHECK(back["b"][1].get<double>() == 2.5);
  CHECK(back["c"].is_null());
  CHECK(back["d"] == "text");
  CHECK(back["e"].empty());
}

TEST_CASE("CSV writers") {
  const GridField f(0.0, 0.5, Eigen::Vector2d(1.0, 0.25));
  CHECK(field_csv(f) == "x,u\n0.25,1\n0.75,0.25\n");
  DiagnosticsRecord d;
  d.t = 0.5;
  d.mass = 2.0;
  d.support_radius = 1.0;
  d.max_value = 3.0;
  CHECK(diagnostics_csv({d}) == "t,mass,support_radius,min,max\n0.5,2,1,0,3\n");
  CHECK(cell_centers(0.0, 1.0, 4) == std::vector<double>{0.125, 0.375, 0.625, 0.875});
}

TEST_CASE("write_file_atomic creates directories and leaves no temporary") {
  const auto dir = std::filesystem::temp_directory_path() / "fld_io_test";
  std::filesystem::remove_all(dir);
  const std::string path = (dir / "sub" / "out.csv").string();
  write_file_atomic(path, "x,u\n");
  write_file_atomic(path, "x,u\n1,2\n");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "x,u\n1,2\n");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove_all(dir);
}
