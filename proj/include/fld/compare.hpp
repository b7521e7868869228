#ifndef FLD_COMPARE_HPP
#define FLD_COMPARE_HPP

#include <string>
#include <vector>

#include "fld/exact.hpp"

namespace fld {

// Side-by-side evaluation of the symmetric m = 2 bulk-jump example u and the
// Burgers solution v started from the same datum, on x >= 0.

struct Discontinuity {
  double x = 0.0;
  double left = 0.0;
  double right = 0.0;
  bool bulk() const { return right > 0.0; }  // inside the support, not the front
};

struct Interval {
  double a = 0.0;
  double b = 0.0;
};

struct BurgersSnapshot {
  double t = 0.0;
  double u_plateau = 0.0;
  double v_plateau = 0.0;
  std::vector<Discontinuity> u_jumps;
  std::vector<Discontinuity> v_jumps;
  std::vector<Interval> agree;   // sampled points with |u - v| <= tol, merged
  std::vector<Interval> differ;
};

struct BurgersReport {
  double u_bulk_shock_begin = 0.5;
  double u_bulk_shock_end = 0.0;  // t_*
  double v_bulk_shock_begin = 0.5;
  double v_bulk_shock_end = kBurgersMergeTime;
  double tol = 0.0;
  std::vector<BurgersSnapshot> snapshots;
};

/// Discontinuities of u at time t, from the closed forms.
std::vector<Discontinuity> example82_jumps(const Example82Solution& sol, double t);
std::vector<Discontinuity> burgers_jumps(double t);

/// Samples both solutions at `samples` points of [0, x_max].
BurgersReport compare_burgers(const Example82Solution& sol, const std::vector<double>& times, double x_max = 12.0,
                              int samples = 2401, double tol = 1e-10);

std::string burgers_report_json(const BurgersReport& report);

}  // namespace fld

#endif  // FLD_COMPARE_HPP
