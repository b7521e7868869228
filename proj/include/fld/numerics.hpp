#ifndef FLD_NUMERICS_HPP
#define FLD_NUMERICS_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fld/model.hpp"

namespace fld {

struct Tolerances {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  long max_steps = 1'000'000;

  void validate() const;
  Tolerances halved() const { return {0.5 * rel_tol, 0.5 * abs_tol, max_steps}; }
};

using OdeState = Eigen::VectorXd;
using OdeRhs = std::function<OdeState(double, const OdeState&)>;
using EventFunction = std::function<double(double, const OdeState&)>;

struct OdeEvent {
  std::string name;
  EventFunction g;
  bool terminal = true;
  int direction = 0;  // +1: only upward crossings, -1: only downward, 0: both
};

struct OdeProblem {
  OdeRhs rhs;
  double t0 = 0.0;
  OdeState y0;
  std::vector<OdeEvent> events;
};

struct EventHit {
  std::size_t index = 0;
  std::string name;
  double t = 0.0;
  OdeState y;
};

/// Piecewise quartic interpolant produced by the Dormand-Prince pair. Can be
/// evaluated (and differentiated) anywhere in [t_begin, t_end].
class DenseSolution {
 public:
  OdeState operator()(double t) const;
  OdeState derivative(double t) const;

  double t_begin() const { return t_.front(); }
  double t_end() const { return t_.back(); }
  std::size_t steps() const { return t_.size() - 1; }
  const std::vector<double>& step_times() const { return t_; }
  const OdeState& step_state(std::size_t k) const { return y_[k]; }

  void start(double t0, OdeState y0);
  void append(double t1, OdeState y1, const Eigen::MatrixXd& coefficients);
  /// Drops everything after t (used at terminal events).
  void truncate(double t);

 private:
  std::size_t locate(double t) const;

  std::vector<double> t_;
  std::vector<OdeState> y_;
  std::vector<double> h_;  // step widths, kept when the last step is truncated
  std::vector<Eigen::MatrixXd> coefficients_;  // columns: rcont1..rcont5 for each step
};

struct OdeResult {
  DenseSolution solution;
  std::vector<EventHit> events;
  bool terminated = false;  // stopped by a terminal event
  double t_final = 0.0;
  OdeState y_final;
};

/// Adaptive Dormand-Prince 5(4) with PI step control, dense output and
/// event location. Throws StepFailure when the step size underflows and
/// MaxSteps when the step budget runs out.
OdeResult ode_solve(const OdeProblem& problem, double t_end, const Tolerances& tol);

/// Brent's method on a sign-changing bracket.
double find_root(const std::function<double(double)>& f, double a, double b, const Tolerances& tol);

/// Adaptive Gauss-Kronrod (7/15) quadrature.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

}  // namespace fld

#endif  // FLD_NUMERICS_HPP
