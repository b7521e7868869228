#ifndef FLD_FVM_HPP
#define FLD_FVM_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "fld/model.hpp"

namespace fld {

// Finite volumes for u_t = (phi(u) q(u_x))_x with phi(u) = u^m and q a bounded
// regularization of sign(u_x); radial shells use the r^{N-1} weighted form.

enum class FluxVariant { SmoothedSign, Relativistic };

struct FluxConfig {
  FluxVariant variant = FluxVariant::SmoothedSign;
  double delta = 1e-3;  // SmoothedSign: q(g) = g / sqrt(g^2 + delta^2)
  double rho = 1.0;     // Relativistic: q = rho g / sqrt(ubar^2 + rho^2 g^2)

  static FluxConfig smoothed_sign(double delta) { return {FluxVariant::SmoothedSign, delta, 1.0}; }
  static FluxConfig relativistic(double rho) { return {FluxVariant::Relativistic, 1e-3, rho}; }
  void validate() const;
};

enum class Stepper { ExplicitEuler, ImplicitEuler };
enum class Boundary { NeumannZeroFlux, DirichletZeroAbsorbing, FreeLargeDomain };

struct NewtonOptions {
  // Converged when the sup-norm residual or the Newton update is below
  // tol * max(1, |u^n|_inf).
  double tol = 1e-12;
  int max_iterations = 50;
};

struct SchemeConfig {
  Stepper stepper = Stepper::ExplicitEuler;
  // The explicit update is monotone while 2 cfl_hyperbolic + cfl_parabolic <= 1.
  double cfl_hyperbolic = 0.2;
  double cfl_parabolic = 0.4;
  Boundary boundary = Boundary::NeumannZeroFlux;
  NewtonOptions newton;
  // Implicit runs cap dt at implicit_cfl * h / max wave speed for accuracy.
  double implicit_cfl = 0.5;
  // FreeLargeDomain fails once a boundary cell exceeds this fraction of max u.
  double free_threshold = 1e-10;

  void validate() const;
};

/// Interface flux F(u_left, u_right); positive values move mass to the right.
template <typename Scalar>
Scalar numerical_flux(const Scalar& u_left, const Scalar& u_right, double h, const FluxConfig& flux, double m) {
  using std::pow;
  using std::sqrt;
  const Scalar g = (u_right - u_left) / h;
  const Scalar up = g <= Scalar(0) ? u_left : u_right;
  const Scalar phi = pow(up, m);
  if (flux.variant == FluxVariant::SmoothedSign) return -phi * g / sqrt(g * g + flux.delta * flux.delta);
  const Scalar ubar = Scalar(0.5) * (u_left + u_right);
  const Scalar den = sqrt(ubar * ubar + flux.rho * flux.rho * g * g);
  if (den == Scalar(0)) return Scalar(0);
  return -phi * flux.rho * g / den;
}

struct FluxJacobian {
  double F = 0.0;
  double dF_left = 0.0;   // >= 0 (monotone)
  double dF_right = 0.0;  // <= 0
};

FluxJacobian numerical_flux_jacobian(double u_left, double u_right, double h, const FluxConfig& flux, double m);

/// Largest explicit step keeping the update monotone; `requested` for implicit
/// stepping or a field without wave speed.
double stable_dt(const GridField& field, const FluxConfig& flux, const SchemeConfig& scheme, double m,
                 double requested = std::numeric_limits<double>::infinity());

/// Interface fluxes including the boundary faces (size n + 1).
Eigen::VectorXd interface_fluxes(const GridField& field, const FluxConfig& flux, const SchemeConfig& scheme,
                                 double m);

/// Throws CflViolation when dt exceeds stable_dt.
GridField step_explicit(const GridField& field, const FluxConfig& flux, const SchemeConfig& scheme, double m,
                        double dt);

/// Backward Euler with damped Newton on the tridiagonal system, started from
/// u^n. The accepted state is re-derived from the converged fluxes so the step
/// is conservative to rounding. Throws NewtonDivergence.
GridField step_implicit(const GridField& field, const FluxConfig& flux, const SchemeConfig& scheme, double m,
                        double dt);

struct RunOptions {
  /// Called after every accepted step with (t, field).
  std::function<void(double, const GridField&)> on_step;
  /// Support threshold relative to max u0.
  double support_threshold = 1e-8;
  double center = 0.0;
  long max_steps = 50'000'000;
};

/// Integrates to t_end, recording the initial field and the state at every
/// output time (t_end is always included) with a diagnostics record each.
Trajectory<GridField> run_scenario(const GridField& initial, const Params& params, const FluxConfig& flux,
                                   const SchemeConfig& scheme, double t_end, std::vector<double> output_times,
                                   const RunOptions& options = {});

Trajectory<GridField> run_scenario(const PiecewiseProfile& initial, double x_min, double x_max, Eigen::Index cells,
                                   const Params& params, const FluxConfig& flux, const SchemeConfig& scheme,
                                   double t_end, std::vector<double> output_times, const RunOptions& options = {});

}  // namespace fld

#endif  // FLD_FVM_HPP
