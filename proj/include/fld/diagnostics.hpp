#ifndef FLD_DIAGNOSTICS_HPP
#define FLD_DIAGNOSTICS_HPP

#include <functional>
#include <limits>
#include <vector>

#include "fld/model.hpp"

namespace fld {

/// h * sum(u) on a line, |S^{N-1}| * sum(V_i u_i) on radial shells.
double mass(const GridField& field, const Params& params);

/// Largest |x_i - center| over cells with u_i > threshold; 0 if none.
double support_radius(const GridField& field, double threshold, double center = 0.0);

/// First output time at which the support radius exceeds edge0 + tol, or +inf.
/// The support threshold is `relative_threshold` times the initial maximum.
double waiting_time_estimate(const Trajectory<GridField>& trajectory, double edge0, double tol,
                             double relative_threshold = 1e-8, double center = 0.0);

/// How far the support has advanced into a hole at x0 (a zero of u with
/// nonnegative values rising on both sides). The right flank is located at the
/// levels lo and hi times the maximum, and the line through these two level
/// crossings is extrapolated to zero. The displacement is x0 minus that zero,
/// clamped at 0. Returns +inf once the hole has closed (no flank crossing).
double hole_displacement(const GridField& field, double x0, double lo = 0.1, double hi = 0.3);

/// Waiting time of an interior hole: first output time at which
/// hole_displacement exceeds tol, or +inf.
double hole_filling_time(const Trajectory<GridField>& trajectory, double x0, double tol);

struct ShockRecord {
  std::vector<double> times;
  std::vector<double> positions;  // |du|-weighted face centroid of the steep cluster
  std::vector<double> left_traces;
  std::vector<double> right_traces;
  double speed = 0.0;  // least-squares slope of positions over times
};

/// Tracks clusters of faces with |du|/h > gradient_threshold through a 1D
/// trajectory. Clusters are linked to the nearest record within a gate of
/// 2 max|char speed| dt + 5h; records shorter than three samples are dropped.
/// Traces are means over the three cells just outside the cluster.
/// Throws NoShockFound when no record survives.
std::vector<ShockRecord> shock_track(const Trajectory<GridField>& trajectory, double gradient_threshold,
                                     double m, double t_from = 0.0,
                                     double t_to = std::numeric_limits<double>::infinity());

struct ErrorNorms {
  double L1 = 0.0;
  double Linf = 0.0;
};

/// Cell-center discrepancies against oracle(t, x); L1 is weighted by the cell
/// measure (times |S^{N-1}| on shells, so it is comparable to mass).
ErrorNorms error_norms(const GridField& field, const std::function<double(double, double)>& oracle, double t);

/// Least-squares slope of log(error) against log(h). Throws DegenerateInput
/// for fewer than two levels, mismatched sizes, non-decreasing hs or
/// nonpositive values.
double convergence_order(const std::vector<double>& errors, const std::vector<double>& hs);

}  // namespace fld

#endif  // FLD_DIAGNOSTICS_HPP
