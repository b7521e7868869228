// fldlab: exact solutions, finite-volume and front-tracking runs, reports.
//
// Exit codes: 0 success, 1 verification failure, 2 config error, 3 solver failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fld/acceptance.hpp"
#include "fld/compare.hpp"
#include "fld/config.hpp"
#include "fld/diagnostics.hpp"
#include "fld/exact.hpp"
#include "fld/fvm.hpp"
#include "fld/io.hpp"
#include "fld/tracker.hpp"
#include "json.hpp"

namespace {

using namespace fld;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kConfigError = 2;
constexpr int kSolverError = 3;

struct Options {
  std::string config;
  std::string out = "out";
  std::string preset;
  std::string times;
  std::optional<std::uint64_t> seed;
};

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

ScenarioConfig resolve(const Options& o, bool required = true) {
  if (!o.config.empty() && !o.preset.empty()) config_error("give either --config or --preset, not both");
  ScenarioConfig c;
  if (!o.config.empty()) {
    c = load_config(o.config);
  } else if (!o.preset.empty()) {
    c = preset(o.preset);
  } else if (required) {
    config_error("a scenario is required: --config PATH or --preset NAME");
  }
  if (!o.times.empty()) {
    c.output_times = parse_times(o.times);
    std::sort(c.output_times.begin(), c.output_times.end());
    if (c.output_times.back() > 0.0) c.t_end = c.output_times.back();
    std::erase_if(c.output_times, [](double t) { return t <= 0.0; });
  }
  if (o.seed) c.seed = *o.seed;
  c.validate();
  return c;
}

std::string path_in(const Options& o, const std::string& name) { return (std::filesystem::path(o.out) / name).string(); }

// Times for sampled output: the initial time plus the output times.
std::vector<double> sample_times(const ScenarioConfig& c, const Options& o) {
  std::vector<double> ts;
  if (!o.times.empty()) {
    ts = parse_times(o.times);
  } else {
    ts = c.output_times;
    ts.insert(ts.begin(), 0.0);
    ts.push_back(c.t_end);
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  if (ts.front() < 0.0) config_error("times must be nonnegative");
  return ts;
}

// Exact solution of the scenario's datum family, as u(t, x).
std::function<double(double, double)> exact_solution(const ScenarioConfig& c) {
  const Params p = c.params();
  const std::string& name = c.initial_name;
  if (name == "self_similar") {
    const SelfSimilarSpec ss;
    return [ss, p](double t, double x) { return self_similar_eval(ss, p, t, std::abs(x)); };
  }
  if (name == "waiting_time") {
    const auto sol = std::make_shared<WaitingTimeSolution>(wt_construct(WaitingTimeSpec{}, p));
    return [sol](double t, double x) { return wt_eval(*sol, t, std::abs(x)); };
  }
  if (name == "example82") {
    if (p.m() != 2.0 || p.dim() != 1) config_error("example82 needs m = 2 and dim = 1");
    const auto sol = std::make_shared<Example82Solution>(example82_solve());
    return [sol](double t, double x) { return example82_eval(*sol, t, x); };
  }
  if (name == "riemann") {
    if (p.m() != 2.0 || p.dim() != 1) config_error("riemann needs m = 2 and dim = 1");
    // Plateau 2 on [-L, 0] between walls drains into the front: D (L + x_s) = 2L, x_s' = D.
    return [](double t, double x) {
      const double L = 16.0;
      const double xs = std::sqrt(L * L + 4.0 * L * t) - L;
      return x >= -L && x <= xs ? 2.0 * L / (L + xs) : 0.0;
    };
  }
  config_error("no closed-form solution for initial datum '" + (name.empty() ? std::string("inline") : name) + "'");
}

std::string tx_csv(const std::vector<double>& ts, const std::vector<double>& xs,
                   const std::function<double(double, double)>& u) {
  std::string out = "t,x,u\n";
  for (double t : ts) {
    for (double x : xs) out += format_real(t) + "," + format_real(x) + "," + format_real(u(t, x)) + "\n";
  }
  return out;
}

int cmd_exact(const Options& o) {
  const ScenarioConfig c = resolve(o);
  const auto u = exact_solution(c);
  const auto ts = sample_times(c, o);
  write_file_atomic(path_in(o, "exact.csv"), tx_csv(ts, cell_centers(c.x_min, c.x_max, c.cells), u));
  std::printf("wrote %s (%zu times)\n", path_in(o, "exact.csv").c_str(), ts.size());
  return kOk;
}

int run_tracker(const ScenarioConfig& c, const Options& o) {
  const TrackerResult res = tracker_evolve(tracker_init(c.initial(), c.params()), c.t_end, {}, c.output_times);
  const auto xs = cell_centers(c.x_min, c.x_max, c.cells);
  std::string csv = "t,x,u\n";
  for (std::size_t k = 0; k < res.trajectory.size(); ++k) {
    const PiecewiseProfile& prof = res.trajectory.states[k];
    for (double x : xs) csv += format_real(res.trajectory.times[k]) + "," + format_real(x) + "," + format_real(prof(x)) + "\n";
  }
  nlohmann::json events = nlohmann::json::array();
  for (const TrackerEvent& e : res.events) {
    events.push_back({{"kind", to_string(e.kind)}, {"time", e.time}, {"location", e.location}});
  }
  write_file_atomic(path_in(o, "trajectory.csv"), csv);
  write_file_atomic(path_in(o, "events.json"), json_dump(events));
  for (const TrackerEvent& e : res.events) {
    std::printf("%-16s t = %.17g  x = %.17g\n", to_string(e.kind), e.time, e.location);
  }
  return kOk;
}

int cmd_track(const Options& o) { return run_tracker(resolve(o), o); }

int run_fvm(const ScenarioConfig& c, const Options& o) {
  const PiecewiseProfile u0 = c.initial();
  const auto tr = run_scenario(u0, c.x_min, c.x_max, c.cells, c.params(), c.flux, c.scheme, c.t_end, c.output_times);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    write_file_atomic(path_in(o, "u_" + std::to_string(k) + ".csv"), field_csv(tr.states[k]));
  }
  write_file_atomic(path_in(o, "diagnostics.csv"), diagnostics_csv(tr.diagnostics));

  // Shock report when a sharp front is present.
  if (c.dim == 1 && tr.size() >= 3) {
    const double h = (c.x_max - c.x_min) / static_cast<double>(c.cells);
    try {
      const auto records = shock_track(tr, u0.max_value() / (16.0 * h), c.m, tr.times[1]);
      std::string csv = "t,mass,support_radius,shock_pos,shock_speed\n";
      for (const ShockRecord& rec : records) {
        for (std::size_t j = 0; j < rec.times.size(); ++j) {
          const auto k = static_cast<std::size_t>(
              std::find(tr.times.begin(), tr.times.end(), rec.times[j]) - tr.times.begin());
          csv += format_real(rec.times[j]) + "," + format_real(tr.diagnostics[k].mass) + "," +
                 format_real(tr.diagnostics[k].support_radius) + "," + format_real(rec.positions[j]) + "," +
                 format_real(rec.speed) + "\n";
        }
      }
      write_file_atomic(path_in(o, "shocks.csv"), csv);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoShockFound) throw;
    }
  }
  const auto& last = tr.diagnostics.back();
  std::printf("t = %.17g  mass = %.17g  support = %.17g  (%zu outputs in %s)\n", last.t, last.mass,
              last.support_radius, tr.size(), o.out.c_str());
  return kOk;
}

int cmd_simulate(const Options& o) {
  const ScenarioConfig c = resolve(o);
  switch (c.solver) {
    case Solver::Tracker:
      return run_tracker(c, o);
    case Solver::Exact:
      return cmd_exact(o);
    case Solver::Fvm:
      break;
  }
  return run_fvm(c, o);
}

int cmd_convergence(const Options& o) {
  if (!o.config.empty() || (!o.preset.empty() && o.preset != "self_similar")) {
    config_error("the refinement study runs on the self_similar preset only");
  }
  const ConvergenceReport rep = convergence_study();
  write_file_atomic(path_in(o, "convergence.json"), convergence_report_json(rep));
  for (const auto& l : rep.levels) std::printf("h = %-10.6g delta = %-8.3g L1 = %.6e  Linf = %.6e\n", l.h, l.delta, l.L1, l.Linf);
  std::printf("order = %.4f\n", rep.order);
  return kOk;
}

int cmd_compare_burgers(const Options& o) {
  if (!o.config.empty() || (!o.preset.empty() && o.preset != "burgers_compare")) {
    config_error("compare-burgers runs a fixed scenario; only --preset burgers_compare is accepted");
  }
  const std::vector<double> ts = o.times.empty() ? std::vector<double>{0.25, 0.5, 1.0, 2.0, 3.0, 3.5} : parse_times(o.times);
  for (double t : ts) {
    if (t < 0.0) config_error("times must be nonnegative");
  }
  const Example82Solution sol = example82_solve();
  const BurgersReport rep = compare_burgers(sol, ts);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    std::string csv = "x,u,v\n";
    for (int i = 0; i <= 2400; ++i) {
      const double x = 12.0 * i / 2400.0;
      csv += format_real(x) + "," + format_real(example82_eval(sol, ts[k], x)) + "," +
             format_real(burgers_example_eval(ts[k], x)) + "\n";
    }
    write_file_atomic(path_in(o, "uv_" + std::to_string(k) + ".csv"), csv);
  }
  write_file_atomic(path_in(o, "burgers.json"), burgers_report_json(rep));
  for (const auto& s : rep.snapshots) {
    std::printf("t = %-6g u plateau %.10f  v plateau %.10f  u jumps %zu  v jumps %zu\n", s.t, s.u_plateau,
                s.v_plateau, s.u_jumps.size(), s.v_jumps.size());
  }
  return kOk;
}

int cmd_verify(const Options& o) {
  int failed = 0;
  run_acceptance(o.seed.value_or(0), [&](const CriterionResult& r) {
    std::printf("%s\n", format_result(r).c_str());
    std::fflush(stdout);
    failed += r.passed ? 0 : 1;
  });
  std::printf("%d of 11 criteria failed\n", failed);
  return failed == 0 ? kOk : kVerifyFailed;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::fprintf(stderr, "fldlab: %s\n", e.what());
    return e.kind() == ErrorKind::ConfigError || e.kind() == ErrorKind::UnsupportedProfile ? kConfigError
                                                                                            : kSolverError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fldlab: %s\n", e.what());
    return kSolverError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flux-saturated diffusion: exact solutions, solvers and checks"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Scenario file (JSON)");
    sub->add_option("--out", o.out, "Output directory")->capture_default_str();
    sub->add_option("--preset", o.preset, "Named scenario");
    sub->add_option("--times", o.times, "Comma-separated output times");
    sub->add_option("--seed", seed, "Seed for randomized suites");
  };

  std::function<int()> chosen;
  const std::pair<const char*, std::pair<const char*, int (*)(const Options&)>> commands[] = {
      {"exact", {"Sample a closed-form solution", cmd_exact}},
      {"simulate", {"Run the scenario's solver", cmd_simulate}},
      {"track", {"Run the front tracker", cmd_track}},
      {"convergence", {"Dyadic refinement study", cmd_convergence}},
      {"compare-burgers", {"Bulk-jump example against its Burgers counterpart", cmd_compare_burgers}},
      {"verify", {"Run the acceptance suite", cmd_verify}},
  };
  for (const auto& [name, spec] : commands) {
    CLI::App* sub = app.add_subcommand(name, spec.first);
    add_common(sub);
    const auto fn = spec.second;
    sub->callback([&, fn, sub] {
      if (sub->count("--seed")) o.seed = seed;
      chosen = [&, fn] { return fn(o); };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  return guarded(chosen);
}
