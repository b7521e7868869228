#include "fld/compare.hpp"

#include <cmath>

#include "fld/io.hpp"

namespace fld {

std::vector<Discontinuity> example82_jumps(const Example82Solution& sol, double t) {
  std::vector<Discontinuity> out;
  if (t >= 0.5 && t < sol.t_star()) {
    const double s = t - 0.5;
    const double r = sol.r(s);
    out.push_back({r, example82_D(s, r), example82_C(s, r)});
  } else if (t > 3.5) {
    const double a = 32.0 / 49.0 + 2.0 * t / 7.0;
    out.push_back({7.0 * std::sqrt(a), 1.0 / std::sqrt(a), 0.0});
  }
  return out;
}

std::vector<Discontinuity> burgers_jumps(double t) {
  if (t < 0.5) return {};
  if (t < kBurgersMergeTime) {
    const double r = burgers_shock_radius(t);
    return {{r, 2.0, (9.0 - r) / (7.0 - 2.0 * t)}};
  }
  return {{9.0 + 2.0 * (t - kBurgersMergeTime), 2.0, 0.0}};
}

BurgersReport compare_burgers(const Example82Solution& sol, const std::vector<double>& times, double x_max,
                              int samples, double tol) {
  if (samples < 2 || !(x_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "compare_burgers: bad sampling");
  BurgersReport report;
  report.u_bulk_shock_end = sol.t_star();
  report.tol = tol;
  for (double t : times) {
    if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "compare_burgers: negative time");
    BurgersSnapshot snap;
    snap.t = t;
    snap.u_plateau = example82_eval(sol, t, 0.0);
    snap.v_plateau = burgers_example_eval(t, 0.0);
    snap.u_jumps = example82_jumps(sol, t);
    snap.v_jumps = burgers_jumps(t);

    const double dx = x_max / (samples - 1);
    int state = -1;  // 1 agree, 0 differ
    for (int i = 0; i < samples; ++i) {
      const double x = i * dx;
      const int now = std::abs(example82_eval(sol, t, x) - burgers_example_eval(t, x)) <= tol ? 1 : 0;
      auto& list = now ? snap.agree : snap.differ;
      if (now != state) {
        list.push_back({x, x});
      } else {
        list.back().b = x;
      }
      state = now;
    }
    report.snapshots.push_back(std::move(snap));
  }
  return report;
}

namespace {

nlohmann::json jumps_json(const std::vector<Discontinuity>& jumps) {
  auto out = nlohmann::json::array();
  for (const auto& j : jumps) out.push_back({{"x", j.x}, {"left", j.left}, {"right", j.right}, {"bulk", j.bulk()}});
  return out;
}

nlohmann::json intervals_json(const std::vector<Interval>& list) {
  auto out = nlohmann::json::array();
  for (const auto& iv : list) out.push_back({iv.a, iv.b});
  return out;
}

}  // namespace

std::string burgers_report_json(const BurgersReport& report) {
  nlohmann::json snaps = nlohmann::json::array();
  for (const auto& s : report.snapshots) {
    snaps.push_back({{"t", s.t},
                     {"u_plateau", s.u_plateau},
                     {"v_plateau", s.v_plateau},
                     {"u_jumps", jumps_json(s.u_jumps)},
                     {"v_jumps", jumps_json(s.v_jumps)},
                     {"agree", intervals_json(s.agree)},
                     {"differ", intervals_json(s.differ)}});
  }
  nlohmann::json doc = {{"u_bulk_shock", {report.u_bulk_shock_begin, report.u_bulk_shock_end}},
                        {"v_bulk_shock", {report.v_bulk_shock_begin, report.v_bulk_shock_end}},
                        {"tol", report.tol},
                        {"snapshots", snaps}};
  return json_dump(doc);
}

}  // namespace fld
