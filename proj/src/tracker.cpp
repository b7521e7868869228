#include "fld/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fld/hyperbolic.hpp"

namespace fld {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Events closer than this (relative) to a horizon are the horizon itself.
constexpr double kMergeWindow = 1e-7;
constexpr double kMassTol = 1e-8;

// Segment j of `s` advected from s.t to t.
double seg_g(const TailSegment& seg, const TrackerState& s, double t) { return 1.0 + 2.0 * seg.slope * (t - s.t); }

double seg_value(const TailSegment& seg, const TrackerState& s, double t, double x) {
  return (seg.slope * x + seg.intercept) / seg_g(seg, s, t);
}

double seg_horizon(const TailSegment& seg, const TrackerState& s) {
  return seg.slope < 0.0 ? s.t - 0.5 / seg.slope : kInf;
}

// Right end of segment j at time t: junction with j + 1, or the fixed zero.
double seg_right(const TrackerState& s, std::size_t j, double t) {
  const TailSegment& a = s.segments[j];
  if (j + 1 == s.segments.size()) return -a.intercept / a.slope;
  const TailSegment& b = s.segments[j + 1];
  const double ga = seg_g(a, s, t);
  const double gb = seg_g(b, s, t);
  return (b.intercept * ga - a.intercept * gb) / (a.slope * gb - b.slope * ga);
}

double line_integral(double slope, double intercept, double p, double q) {
  return 0.5 * slope * (q * q - p * p) + intercept * (q - p);
}

// Integral of the tail over [x, support end] at time t; x lies in segment 0.
double tail_integral(const TrackerState& s, double t, double x) {
  double sum = 0.0;
  double left = x;
  for (std::size_t j = 0; j < s.segments.size(); ++j) {
    const TailSegment& seg = s.segments[j];
    const double right = seg_right(s, j, t);
    const double g = seg_g(seg, s, t);
    sum += line_integral(seg.slope / g, seg.intercept / g, left, right);
    left = right;
  }
  return sum;
}

// Segments re-referenced at time t, dropping the first `drop`.
std::vector<TailSegment> rebase(const TrackerState& s, double t, std::size_t drop) {
  std::vector<TailSegment> out;
  for (std::size_t j = drop; j < s.segments.size(); ++j) {
    const TailSegment& seg = s.segments[j];
    const double g = seg_g(seg, s, t);
    out.push_back({seg.slope / g, seg.intercept / g, seg_right(s, j, t)});
  }
  return out;
}

double plateau_radius(const TrackerState& s, double t) {
  return std::sqrt(s.r * s.r + 2.0 * s.half_mass * (t - s.t));
}

// Full state at time t inside a phase.
TrackerState phase_state(const TrackerPhase& phase, double t) {
  const TrackerState& s = phase.start;
  TrackerState out;
  out.t = t;
  out.mode = s.mode;
  out.half_mass = s.half_mass;
  switch (s.mode) {
    case EdgeMode::Plateau:
      out.r = plateau_radius(s, t);
      out.D = s.half_mass / out.r;
      break;
    case EdgeMode::Continuous: {
      const TailSegment& f = s.segments.front();
      out.D = phase.solution(t)[0];
      out.r = (out.D * seg_g(f, s, t) - f.intercept) / f.slope;
      out.segments = rebase(s, t, 0);
      out.C = out.D;
      break;
    }
    case EdgeMode::Jump:
      out.r = phase.solution(t)[0];
      out.C = seg_value(s.segments.front(), s, t, out.r);
      out.D = (s.half_mass - tail_integral(s, t, out.r)) / out.r;
      out.segments = rebase(s, t, 0);
      break;
  }
  return out;
}

void check_mass(const TrackerState& s) {
  const double m = tracker_half_mass(s);
  if (std::abs(m - s.half_mass) > kMassTol * s.half_mass) {
    throw Error(ErrorKind::InvariantViolation,
                "tracker: half-mass drift " + std::to_string((m - s.half_mass) / s.half_mass) + " at t = " +
                    std::to_string(s.t));
  }
}

// State right after segment 0 disappears at time t with the edge at x.
// Returns the events raised by the re-assembly.
std::vector<TrackerEvent> reassemble_after_blowup(TrackerState& s, double t, double x) {
  std::vector<TrackerEvent> events;
  events.push_back({TrackerEventKind::GradientBlowup, t, x});
  TrackerState next;
  next.t = t;
  next.half_mass = s.half_mass;
  next.segments = rebase(s, t, 1);
  next.r = x;
  next.D = (s.half_mass - (next.segments.empty() ? 0.0 : tail_integral(next, t, x))) / x;
  const double C = next.segments.empty() ? 0.0 : seg_value(next.segments.front(), next, t, x);
  if (next.D > C * (1.0 + 1e-9)) {
    events.push_back({TrackerEventKind::EdgeJumpOnset, t, x});
    next.C = C;
    next.mode = EdgeMode::Jump;
  } else if (next.D >= C * (1.0 - 1e-9)) {
    next.D = C;
    next.C = C;
    next.mode = EdgeMode::Continuous;
  } else {
    throw Error(ErrorKind::InvariantViolation, "tracker: plateau fell below the outer trace");
  }
  if (next.segments.empty()) {
    events.push_back({TrackerEventKind::SupportMerge, t, x});
    next.mode = EdgeMode::Plateau;
    next.C = 0.0;
  }
  s = next;
  return events;
}

DiagnosticsRecord record_of(const TrackerState& s) {
  DiagnosticsRecord d;
  d.t = s.t;
  d.mass = 2.0 * tracker_half_mass(s);
  d.support_radius = s.segments.empty() ? s.r : s.segments.back().right;
  if (s.mode != EdgeMode::Continuous) d.shock_positions.push_back(s.r);
  d.plateau_height = s.D;
  d.max_value = s.D;
  d.min_value = 0.0;
  return d;
}

}  // namespace

const char* to_string(TrackerEventKind kind) {
  switch (kind) {
    case TrackerEventKind::SegmentCollapse: return "SegmentCollapse";
    case TrackerEventKind::GradientBlowup: return "GradientBlowup";
    case TrackerEventKind::EdgeJumpOnset: return "EdgeJumpOnset";
    case TrackerEventKind::JumpClosure: return "JumpClosure";
    case TrackerEventKind::SupportMerge: return "SupportMerge";
  }
  return "?";
}

double tracker_half_mass(const TrackerState& s) {
  double m = s.D * s.r;
  double left = s.r;
  for (const TailSegment& seg : s.segments) {
    m += line_integral(seg.slope, seg.intercept, left, seg.right);
    left = seg.right;
  }
  return m;
}

TrackerState tracker_init(const PiecewiseProfile& profile, const Params& params) {
  auto reject = [](const std::string& why) { throw Error(ErrorKind::UnsupportedProfile, "tracker_init: " + why); };
  if (params.m() != 2.0 || params.dim() != 1) reject("only m = 2, N = 1");
  if (!profile.symmetric()) reject("profile must be symmetric");
  const auto& bp = profile.breakpoints();
  const auto& pieces = profile.pieces();
  if (pieces.empty()) reject("empty profile");
  if (bp.front() != 0.0) reject("first breakpoint must be the origin");
  if (pieces.front().kind != Piece::Kind::Constant || !(pieces.front().a > 0.0)) {
    reject("profile must start with a positive plateau");
  }

  TrackerState s;
  s.D = pieces.front().a;
  s.r = bp[1];
  for (std::size_t j = 1; j < pieces.size(); ++j) {
    if (pieces[j].kind != Piece::Kind::Linear || !(pieces[j].a < 0.0)) {
      reject("tail pieces must be strictly decreasing lines");
    }
    s.segments.push_back({pieces[j].a, pieces[j].b, bp[j + 1]});
  }
  for (const JumpMarker& j : profile.jumps()) {
    const bool at_edge = j.x == s.r;
    const bool at_end = j.x == bp.back() && s.segments.empty();
    if (!at_edge && !at_end) reject("jumps are only allowed at the plateau edge");
  }
  s.half_mass = profile.integral(0.0, bp.back());

  if (s.segments.empty()) {
    s.mode = EdgeMode::Plateau;
    return s;
  }
  const TailSegment& last = s.segments.back();
  if (std::abs(last.slope * last.right + last.intercept) > 1e-12 * s.D) reject("tail must end at zero");
  s.C = s.segments.front().slope * s.r + s.segments.front().intercept;
  if (s.C > s.D * (1.0 + 1e-12)) reject("tail rises above the plateau");
  s.mode = s.D - s.C > 1e-12 * s.D ? EdgeMode::Jump : EdgeMode::Continuous;
  if (s.mode == EdgeMode::Continuous) s.C = s.D;
  return s;
}

PiecewiseProfile tracker_to_profile(const TrackerState& s) {
  std::vector<double> bp{0.0, s.r};
  std::vector<Piece> pieces{Piece::constant(s.D)};
  std::vector<JumpMarker> jumps;
  for (const TailSegment& seg : s.segments) {
    bp.push_back(seg.right);
    pieces.push_back(Piece::linear(seg.slope, seg.intercept));
  }
  if (s.mode == EdgeMode::Jump) jumps.push_back({s.r, s.D, s.C});
  if (s.mode == EdgeMode::Plateau) jumps.push_back({s.r, s.D, 0.0});
  return PiecewiseProfile(std::move(bp), std::move(pieces), true, std::move(jumps));
}

TrackerState TrackerResult::state_at(double t) const {
  // Later phases win at shared event times.
  for (auto it = phases.rbegin(); it != phases.rend(); ++it) {
    if (t >= it->start.t && t <= it->t_end) return phase_state(*it, t);
  }
  throw Error(ErrorKind::InvalidArgument, "tracker: time outside the evolved window");
}

const TrackerEvent* TrackerResult::first(TrackerEventKind kind) const {
  for (const TrackerEvent& e : events) {
    if (e.kind == kind) return &e;
  }
  return nullptr;
}

TrackerResult tracker_evolve(const TrackerState& initial, double t_end, const Tolerances& tol,
                             const std::vector<double>& output_times) {
  tol.validate();
  if (!(t_end >= initial.t)) throw Error(ErrorKind::InvalidArgument, "tracker_evolve: t_end before start");
  check_mass(initial);

  TrackerResult result;
  result.tol = tol;
  TrackerState s = initial;

  while (true) {
    TrackerPhase phase;
    phase.start = s;

    if (s.mode == EdgeMode::Plateau) {
      phase.t_end = t_end;
      result.phases.push_back(std::move(phase));
      break;
    }

    // The integration window stops at the first blow-up horizon.
    double window = t_end;
    std::size_t horizon_index = s.segments.size();
    for (std::size_t j = 0; j < s.segments.size(); ++j) {
      const double h = seg_horizon(s.segments[j], s);
      if (h < window) {
        window = h;
        horizon_index = j;
      }
    }

    OdeProblem problem;
    problem.t0 = s.t;
    const bool jump = s.mode == EdgeMode::Jump;
    const TrackerState ref = s;
    if (jump) {
      problem.y0 = OdeState::Constant(1, s.r);
      problem.rhs = [ref](double t, const OdeState& y) {
        const double r = y[0];
        const double C = seg_value(ref.segments.front(), ref, t, r);
        const double D = (ref.half_mass - tail_integral(ref, t, r)) / r;
        return OdeState::Constant(1, rh_speed(D, C, 2.0));
      };
      problem.events.push_back({"closure",
                                [ref](double t, const OdeState& y) {
                                  const double r = y[0];
                                  const double C = seg_value(ref.segments.front(), ref, t, r);
                                  return (ref.half_mass - tail_integral(ref, t, r)) / r - C;
                                },
                                true, -1});
      problem.events.push_back(
          {"collapse", [ref](double t, const OdeState& y) { return seg_right(ref, 0, t) - y[0]; }, true, -1});
    } else {
      problem.y0 = OdeState::Constant(1, s.D);
      const TailSegment f = s.segments.front();
      auto edge = [ref, f](double t, double D) { return (D * seg_g(f, ref, t) - f.intercept) / f.slope; };
      problem.rhs = [edge](double t, const OdeState& y) { return OdeState::Constant(1, -y[0] * y[0] / edge(t, y[0])); };
      if (s.segments.size() > 1) {
        problem.events.push_back(
            {"collapse", [ref, edge](double t, const OdeState& y) { return seg_right(ref, 0, t) - edge(t, y[0]); },
             true, -1});
      }
    }

    OdeResult res = ode_solve(problem, window, tol);
    phase.solution = std::move(res.solution);
    double t_stop = res.t_final;
    const double horizon0 = s.segments.empty() ? kInf : seg_horizon(s.segments.front(), s);
    bool at_horizon0 = false;
    std::string hit;
    if (res.terminated) {
      hit = res.events.back().name;
      if (hit == "collapse" && std::abs(horizon0 - t_stop) <= kMergeWindow * std::max(1.0, horizon0)) {
        at_horizon0 = true;
      }
    } else if (window < t_end) {
      at_horizon0 = horizon_index == 0;
      if (!at_horizon0) {
        throw Error(ErrorKind::Unsupported, "tracker: a tail segment steepens into an interior shock");
      }
    }
    if (at_horizon0) t_stop = horizon0;
    phase.t_end = t_stop;
    result.phases.push_back(std::move(phase));
    const TrackerPhase& done = result.phases.back();
    if (!res.terminated && !at_horizon0) break;  // reached t_end

    if (at_horizon0) {
      if (jump) throw Error(ErrorKind::Unsupported, "tracker: the edge segment blows up inside a jump phase");
      const double pivot = -s.segments.front().intercept / s.segments.front().slope;
      TrackerState before = s;
      for (const TrackerEvent& e : reassemble_after_blowup(before, t_stop, pivot)) result.events.push_back(e);
      s = before;
      check_mass(s);
      continue;
    }

    TrackerState now = phase_state(done, t_stop);
    if (hit == "closure") {
      result.events.push_back({TrackerEventKind::JumpClosure, t_stop, now.r});
      now.mode = EdgeMode::Continuous;
      now.D = now.C;
      check_mass(now);
      s = now;
      continue;
    }
    // Collapse of segment 0: the edge reached its right end.
    result.events.push_back({TrackerEventKind::SegmentCollapse, t_stop, now.r});
    TrackerState next;
    next.t = t_stop;
    next.half_mass = s.half_mass;
    next.segments = rebase(s, t_stop, 1);
    next.r = seg_right(s, 0, t_stop);
    next.D = now.D;
    if (next.segments.empty()) {
      result.events.push_back({TrackerEventKind::SupportMerge, t_stop, next.r});
      next.mode = EdgeMode::Plateau;
      next.D = s.half_mass / next.r;
    } else if (jump) {
      next.mode = EdgeMode::Jump;
      next.C = seg_value(next.segments.front(), next, t_stop, next.r);
      next.D = (s.half_mass - tail_integral(next, t_stop, next.r)) / next.r;
    } else {
      next.mode = EdgeMode::Continuous;
      next.C = next.D;
    }
    check_mass(next);
    s = next;
  }

  // Trajectory: the start state and every requested output time.
  result.trajectory.metadata["solver"] = "tracker";
  auto push = [&](const TrackerState& st) {
    result.trajectory.push(st.t, tracker_to_profile(st));
    result.trajectory.diagnostics.push_back(record_of(st));
  };
  push(initial);
  std::vector<double> times = output_times;
  std::sort(times.begin(), times.end());
  for (double t : times) {
    if (t <= initial.t || t > t_end) continue;
    if (!result.trajectory.times.empty() && t <= result.trajectory.times.back()) continue;
    const TrackerState st = result.state_at(t);
    check_mass(st);
    push(st);
  }
  return result;
}

RhResidual tracker_rh_residual(const TrackerResult& result) {
  RhResidual out;
  for (const TrackerPhase& p : result.phases) {
    if (p.start.mode != EdgeMode::Jump) continue;
    const auto& ts = p.solution.step_times();
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
      const double t = ts[k];
      const TrackerState st = phase_state(p, t);
      const double speed = p.solution.derivative(t)[0];
      const double rh = rh_speed(st.D, st.C, 2.0);
      const double err = std::abs(speed - rh);
      out.max_abs = std::max(out.max_abs, err);
      out.max_scaled = std::max(out.max_scaled, err / (result.tol.abs_tol + result.tol.rel_tol * std::abs(rh)));
      ++out.samples;
    }
  }
  return out;
}

}  // namespace fld
