#ifndef FLD_CONFIG_HPP
#define FLD_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fld/fvm.hpp"
#include "fld/model.hpp"

namespace fld {

// Scenario configuration for the command line. The document is JSON; nested
// objects are read as dotted keys ("flux": {"delta": 1e-3} is flux.delta),
// except `initial`, which may hold an inline profile. Unknown keys are errors.

enum class Solver { Fvm, Tracker, Exact };

struct ScenarioConfig {
  std::string preset;  // empty for a fully inline scenario
  Solver solver = Solver::Fvm;
  double m = 2.0;
  int dim = 1;
  double x_min = -4.0;
  double x_max = 4.0;
  Eigen::Index cells = 4096;
  FluxConfig flux;
  SchemeConfig scheme;
  double t_end = 1.0;
  std::vector<double> output_times;
  std::string initial_name;   // named datum, or empty when initial_profile is set
  PiecewiseProfile initial_profile;
  std::uint64_t seed = 0;

  Params params() const { return Params(m, dim); }
  Geometry geometry() const { return dim == 1 ? Geometry::line() : Geometry::radial(dim); }
  /// Throws ConfigError.
  void validate() const;
  /// The initial datum, resolving a named one.
  PiecewiseProfile initial() const;
};

const std::vector<std::string>& preset_names();

/// Throws ConfigError for an unknown name.
ScenarioConfig preset(const std::string& name);

/// Parses a JSON document; a `preset` key seeds the defaults that the other
/// keys override. Throws ConfigError.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Named initial data: self_similar, waiting_time, example82, riemann, barrier_sandwich.
PiecewiseProfile named_datum(const std::string& name, const Params& params);

/// Inline profile: {"breakpoints": [...], "pieces": [{"constant": h} | {"linear": [a, b]}],
/// "symmetric": bool, "jumps": [[x, left, right], ...]}.
PiecewiseProfile profile_from_json_text(const std::string& text);
std::string profile_to_json_text(const PiecewiseProfile& profile);

/// Comma-separated list of reals, e.g. "0.5,1,3.5". Throws ConfigError.
std::vector<double> parse_times(const std::string& list);

}  // namespace fld

#endif  // FLD_CONFIG_HPP
