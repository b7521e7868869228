#include "fld/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fld/exact.hpp"
#include "json.hpp"

namespace fld {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "preset", "solver",      "m",           "dim",   "geometry",  "x_min",          "x_max",
      "cells",  "flux.variant", "flux.delta", "flux.rho", "stepper", "cfl_h",         "cfl_p",
      "boundary", "implicit_cfl", "newton.tol", "newton.max_iterations", "t_end", "output_times",
      "initial", "seed"};
  return keys;
}

void flatten(const json& obj, const std::string& prefix, std::map<std::string, json>& out) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it.value().is_object() && key != "initial") {
      flatten(it.value(), key, out);
    } else {
      out[key] = it.value();
    }
  }
}

template <typename T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    config_error("config key '" + key + "' has the wrong type");
  }
}

double get_real(const json& v, const std::string& key) {
  if (!v.is_number()) config_error("config key '" + key + "' must be a number");
  return v.get<double>();
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) config_error("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

template <typename Enum>
Enum pick(const std::string& key, const std::string& value, const std::map<std::string, Enum>& options) {
  const auto it = options.find(value);
  if (it == options.end()) {
    std::string names;
    for (const auto& [name, _] : options) names += (names.empty() ? "" : ", ") + name;
    config_error("config key '" + key + "': unknown value '" + value + "' (expected one of " + names + ")");
  }
  return it->second;
}

PiecewiseProfile profile_from_json(const json& j) {
  if (!j.is_object()) config_error("inline profile must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "breakpoints" && it.key() != "pieces" && it.key() != "symmetric" && it.key() != "jumps") {
      config_error("inline profile: unknown key '" + it.key() + "'");
    }
  }
  if (!j.contains("breakpoints") || !j.contains("pieces")) config_error("inline profile needs breakpoints and pieces");
  const auto breakpoints = get_as<std::vector<double>>(j.at("breakpoints"), "initial.breakpoints");
  std::vector<Piece> pieces;
  for (const json& p : j.at("pieces")) {
    if (p.is_object() && p.size() == 1 && p.contains("constant")) {
      pieces.push_back(Piece::constant(get_real(p.at("constant"), "initial.pieces")));
    } else if (p.is_object() && p.size() == 1 && p.contains("linear")) {
      const auto ab = get_as<std::vector<double>>(p.at("linear"), "initial.pieces");
      if (ab.size() != 2) config_error("inline profile: linear piece needs [slope, intercept]");
      pieces.push_back(Piece::linear(ab[0], ab[1]));
    } else {
      config_error("inline profile: each piece is {\"constant\": h} or {\"linear\": [a, b]}");
    }
  }
  const bool symmetric = j.contains("symmetric") ? get_as<bool>(j.at("symmetric"), "initial.symmetric") : false;
  std::vector<JumpMarker> jumps;
  if (j.contains("jumps")) {
    for (const auto& t : get_as<std::vector<std::vector<double>>>(j.at("jumps"), "initial.jumps")) {
      if (t.size() != 3) config_error("inline profile: jumps are [x, left, right]");
      jumps.push_back({t[0], t[1], t[2]});
    }
  }
  try {
    return PiecewiseProfile(breakpoints, pieces, symmetric, jumps);
  } catch (const Error& e) {
    config_error(std::string("inline profile: ") + e.what());
  }
}

json profile_to_json(const PiecewiseProfile& profile) {
  json pieces = json::array();
  for (const Piece& p : profile.pieces()) {
    if (p.kind == Piece::Kind::Constant) {
      pieces.push_back({{"constant", p.a}});
    } else {
      pieces.push_back({{"linear", {p.a, p.b}}});
    }
  }
  json jumps = json::array();
  for (const JumpMarker& m : profile.jumps()) jumps.push_back({m.x, m.left, m.right});
  return {{"breakpoints", profile.breakpoints()}, {"pieces", pieces}, {"symmetric", profile.symmetric()},
          {"jumps", jumps}};
}

std::vector<double> steps(double dt, int count) {
  std::vector<double> ts;
  for (int k = 1; k <= count; ++k) ts.push_back(dt * k);
  return ts;
}

void apply_keys(ScenarioConfig& c, const std::map<std::string, json>& kv) {
  for (const auto& [key, v] : kv) {
    if (!known_keys().count(key)) config_error("unknown config key '" + key + "'");
    if (key == "preset") continue;
    if (key == "solver") {
      c.solver = pick<Solver>(key, get_string(v, key),
                              {{"fvm", Solver::Fvm}, {"tracker", Solver::Tracker}, {"exact", Solver::Exact}});
    } else if (key == "m") {
      c.m = get_real(v, key);
    } else if (key == "dim") {
      if (!v.is_number_integer()) config_error("config key 'dim' must be an integer");
      c.dim = v.get<int>();
    } else if (key == "geometry") {
      const std::string g = get_string(v, key);
      if (g != "line" && g != "radial") config_error("config key 'geometry': expected line or radial");
      if ((g == "line") != (kv.count("dim") ? kv.at("dim").get<int>() == 1 : c.dim == 1)) {
        config_error("geometry '" + g + "' does not match dim");
      }
    } else if (key == "x_min") {
      c.x_min = get_real(v, key);
    } else if (key == "x_max") {
      c.x_max = get_real(v, key);
    } else if (key == "cells") {
      if (!v.is_number_integer()) config_error("config key 'cells' must be an integer");
      c.cells = v.get<Eigen::Index>();
    } else if (key == "flux.variant") {
      c.flux.variant = pick<FluxVariant>(
          key, get_string(v, key),
          {{"smoothed_sign", FluxVariant::SmoothedSign}, {"relativistic", FluxVariant::Relativistic}});
    } else if (key == "flux.delta") {
      c.flux.delta = get_real(v, key);
    } else if (key == "flux.rho") {
      c.flux.rho = get_real(v, key);
    } else if (key == "stepper") {
      c.scheme.stepper =
          pick<Stepper>(key, get_string(v, key), {{"explicit", Stepper::ExplicitEuler}, {"implicit", Stepper::ImplicitEuler}});
    } else if (key == "cfl_h") {
      c.scheme.cfl_hyperbolic = get_real(v, key);
    } else if (key == "cfl_p") {
      c.scheme.cfl_parabolic = get_real(v, key);
    } else if (key == "implicit_cfl") {
      c.scheme.implicit_cfl = get_real(v, key);
    } else if (key == "boundary") {
      c.scheme.boundary = pick<Boundary>(key, get_string(v, key),
                                         {{"neumann", Boundary::NeumannZeroFlux},
                                          {"dirichlet", Boundary::DirichletZeroAbsorbing},
                                          {"free", Boundary::FreeLargeDomain}});
    } else if (key == "newton.tol") {
      c.scheme.newton.tol = get_real(v, key);
    } else if (key == "newton.max_iterations") {
      if (!v.is_number_integer()) config_error("config key 'newton.max_iterations' must be an integer");
      c.scheme.newton.max_iterations = v.get<int>();
    } else if (key == "t_end") {
      c.t_end = get_real(v, key);
    } else if (key == "output_times") {
      c.output_times = get_as<std::vector<double>>(v, key);
    } else if (key == "initial") {
      if (v.is_string()) {
        c.initial_name = v.get<std::string>();
        c.initial_profile = PiecewiseProfile{};
      } else {
        c.initial_name.clear();
        c.initial_profile = profile_from_json(v);
      }
    } else if (key == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        config_error("config key 'seed' must be a nonnegative integer");
      }
      c.seed = v.get<std::uint64_t>();
    }
  }
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"self_similar",     "waiting_time",     "example82",
                                                 "burgers_compare", "barrier_sandwich", "riemann"};
  return names;
}

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig c;
  c.preset = name;
  c.initial_name = name;
  c.scheme.stepper = Stepper::ImplicitEuler;
  c.flux = FluxConfig::smoothed_sign(1e-3);
  if (name == "self_similar") {
    c.x_min = -4.0;
    c.x_max = 4.0;
    c.cells = 4096;
    c.scheme.boundary = Boundary::FreeLargeDomain;
    c.t_end = 1.0;
    c.output_times = steps(0.05, 19);
  } else if (name == "waiting_time") {
    c.solver = Solver::Tracker;
    c.x_min = -3.0;
    c.x_max = 3.0;
    c.cells = 3072;
    c.scheme.boundary = Boundary::FreeLargeDomain;
    c.t_end = 0.8;
    c.output_times = steps(0.05, 15);
  } else if (name == "example82" || name == "burgers_compare") {
    c.solver = name == "example82" ? Solver::Tracker : Solver::Exact;
    c.initial_name = "example82";
    c.x_min = -10.0;
    c.x_max = 10.0;
    c.cells = 5120;
    c.scheme.boundary = Boundary::FreeLargeDomain;
    c.t_end = 3.5;
    c.output_times = steps(0.5, 6);
  } else if (name == "barrier_sandwich") {
    c.x_min = -2.0;
    c.x_max = 2.0;
    c.cells = 2048;
    c.scheme.boundary = Boundary::NeumannZeroFlux;
    c.t_end = 0.7;
    c.output_times = steps(0.05, 13);
  } else if (name == "riemann") {
    c.x_min = -16.0;
    c.x_max = 2.0;
    c.cells = 9216;
    c.scheme.boundary = Boundary::NeumannZeroFlux;
    c.t_end = 0.25;
    c.output_times = steps(0.025, 9);
  } else {
    config_error("unknown preset '" + name + "'");
  }
  return c;
}

PiecewiseProfile named_datum(const std::string& name, const Params& params) {
  auto need_21 = [&] {
    if (params.m() != 2.0 || params.dim() != 1) config_error("datum '" + name + "' needs m = 2 and dim = 1");
  };
  if (name == "self_similar") return self_similar_profile(SelfSimilarSpec{}, params, 0.0);
  if (name == "waiting_time") {
    need_21();
    return waiting_time_datum(WaitingTimeSpec{}, params);
  }
  if (name == "example82") {
    need_21();
    return example82_datum();
  }
  if (name == "riemann") {
    if (params.dim() != 1) config_error("datum 'riemann' needs dim = 1");
    return PiecewiseProfile({-16.0, 0.0}, {Piece::constant(2.0)}, false);
  }
  if (name == "barrier_sandwich") {
    if (params.dim() != 1) config_error("datum 'barrier_sandwich' needs dim = 1");
    return PiecewiseProfile({0.0, 1.0, 2.0}, {Piece::linear(1.0, 0.0), Piece::constant(1.0)}, true);
  }
  config_error("unknown initial datum '" + name + "'");
}

PiecewiseProfile ScenarioConfig::initial() const {
  if (!initial_name.empty()) return named_datum(initial_name, params());
  if (initial_profile.empty()) config_error("config has no initial datum");
  return initial_profile;
}

void ScenarioConfig::validate() const {
  try {
    const Params p = params();
    (void)p;
    flux.validate();
    scheme.validate();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    config_error(e.what());
  }
  if (cells < 2) config_error("cells must be at least 2");
  if (!(x_max > x_min)) config_error("x_max must exceed x_min");
  if (dim > 1 && x_min != 0.0) config_error("radial geometry needs x_min = 0");
  if (!(t_end > 0.0)) config_error("t_end must be positive");
  for (double t : output_times) {
    if (!(t > 0.0 && t <= t_end)) config_error("output times must lie in (0, t_end]");
  }
  (void)initial();
}

ScenarioConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) config_error("config must be a JSON object");
  std::map<std::string, json> kv;
  flatten(doc, "", kv);
  ScenarioConfig c;
  if (kv.count("preset")) c = preset(get_string(kv.at("preset"), "preset"));
  apply_keys(c, kv);
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

PiecewiseProfile profile_from_json_text(const std::string& text) {
  try {
    return profile_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    config_error(std::string("profile is not valid JSON: ") + e.what());
  }
}

std::string profile_to_json_text(const PiecewiseProfile& profile) { return profile_to_json(profile).dump(); }

std::vector<double> parse_times(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) config_error("bad time '" + item + "'");
    } catch (const std::logic_error&) {
      config_error("bad time '" + item + "'");
    }
  }
  if (out.empty()) config_error("empty time list");
  return out;
}

}  // namespace fld
