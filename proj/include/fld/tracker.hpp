#ifndef FLD_TRACKER_HPP
#define FLD_TRACKER_HPP

#include <string>
#include <vector>

#include "fld/model.hpp"
#include "fld/numerics.hpp"

namespace fld {

// Exact front dynamics for m = 2, N = 1 and symmetric data made of one central
// plateau followed by nonincreasing linear segments. On x > 0 the tail solves
// u_t + (u^2)_x = 0, so every segment stays linear.

/// Segment a x + b of the tail at the state's time. `right` is the current right
/// end (a junction with the next segment, or the zero of the last one).
struct TailSegment {
  double slope = 0.0;
  double intercept = 0.0;
  double right = 0.0;
};

enum class EdgeMode { Continuous, Jump, Plateau };

struct TrackerState {
  double t = 0.0;
  double D = 0.0;  // plateau height
  double r = 0.0;  // plateau edge
  EdgeMode mode = EdgeMode::Continuous;
  double C = 0.0;  // outer trace at the edge (Jump mode)
  std::vector<TailSegment> segments;
  double half_mass = 0.0;
};

enum class TrackerEventKind { SegmentCollapse, GradientBlowup, EdgeJumpOnset, JumpClosure, SupportMerge };

const char* to_string(TrackerEventKind kind);

struct TrackerEvent {
  TrackerEventKind kind = TrackerEventKind::SegmentCollapse;
  double time = 0.0;
  double location = 0.0;
};

/// Half-mass D r + integral of the tail, recomputed from a state.
double tracker_half_mass(const TrackerState& state);

/// Validates the profile class; the edge mode follows from the plateau-edge trace.
TrackerState tracker_init(const PiecewiseProfile& profile, const Params& params = Params(2.0, 1));

PiecewiseProfile tracker_to_profile(const TrackerState& state);

/// One stretch of the evolution between events. The ODE variable is D in
/// Continuous mode and r in Jump mode; Plateau mode is closed form.
struct TrackerPhase {
  TrackerState start;
  double t_end = 0.0;
  DenseSolution solution;
};

struct TrackerResult {
  std::vector<TrackerPhase> phases;
  std::vector<TrackerEvent> events;
  Trajectory<PiecewiseProfile> trajectory;
  Tolerances tol;

  TrackerState state_at(double t) const;
  const TrackerEvent* first(TrackerEventKind kind) const;
};

/// Evolves to t_end, recording profiles at `output_times` (the start state is
/// always the first trajectory entry). Throws Unsupported when an interior
/// shock would form in the tail and InvariantViolation on half-mass drift.
TrackerResult tracker_evolve(const TrackerState& state, double t_end, const Tolerances& tol = {},
                             const std::vector<double>& output_times = {});

struct RhResidual {
  double max_abs = 0.0;     // largest |r' - rh_speed(D, C)| over Jump-mode steps
  double max_scaled = 0.0;  // same, divided by abs_tol + rel_tol |rh_speed|
  std::size_t samples = 0;
};

/// Compares the edge velocity of the dense output with the jump speed of the
/// reconstructed traces at every accepted Jump-mode step.
RhResidual tracker_rh_residual(const TrackerResult& result);

}  // namespace fld

#endif  // FLD_TRACKER_HPP
