#ifndef FLD_EXACT_HPP
#define FLD_EXACT_HPP

#include <limits>

#include "fld/model.hpp"
#include "fld/numerics.hpp"

namespace fld {

// ---------------------------------------------------------------------------
// Self-similar source-type solutions: a plateau r(t)^{-N} (scaled) on a ball
// of radius X^{-1} T^alpha r(t), with r(t) = (alpha^{-1}(t0 + t))^alpha.

struct SelfSimilarSpec {
  double x0 = 0.0;
  double X = 1.0;
  double T = 1.0;
  double t0 = 1.0;

  void validate() const;
};

double self_similar_r(const SelfSimilarSpec& spec, const Params& params, double t);
double self_similar_height(const SelfSimilarSpec& spec, const Params& params, double t);
double self_similar_radius(const SelfSimilarSpec& spec, const Params& params, double t);

/// `dist` is |x - x0|.
double self_similar_eval(const SelfSimilarSpec& spec, const Params& params, double t, double dist);
double self_similar_eval(const SelfSimilarSpec& spec, const Params& params, double t,
                         const Eigen::Ref<const Eigen::VectorXd>& x);

/// Exact profile (1D centred at x0 = 0, or radial) at time t.
PiecewiseProfile self_similar_profile(const SelfSimilarSpec& spec, const Params& params, double t);

/// Support bound R (1 + t / alpha)^alpha for data supported in a ball of radius R.
double fsp_radius(double R, double t, const Params& params);

/// Barrier (|x| / ((N(m-1)+1)(tau - t)))^{1/(m-1)}; throws TimeBeyondBlowup for t >= tau.
double barrier_eval(double tau, const Params& params, double t, double dist);

struct WaitingBounds {
  double tau_low = 0.0;
  double tau_up = 0.0;
};

/// tau = L^{1-m} / (N(m-1)+1) for each side; infinite inputs map to zero.
WaitingBounds waiting_bounds(double L, double ell, const Params& params);

// ---------------------------------------------------------------------------
// Waiting-time family: plateau D(t) on B_rho(t), C(t) psi(r) on the annulus
// up to R, stationary support until tau*.

struct WaitingTimeSpec {
  double x0 = 0.0;
  double D0 = 1.0;
  double C0 = 1.0;
  double R = 2.0;
  double rho0 = 1.0;

  void validate() const;
};

class WaitingTimeSolution {
 public:
  const WaitingTimeSpec& spec() const { return spec_; }
  const Params& params() const { return params_; }
  double p() const { return params_.p(); }
  double K() const { return K_; }
  double tau_star() const { return tau_star_; }
  double D_star() const { return D_star_; }
  double mass() const { return mass_; }

  double psi(double r) const;
  double rho(double t) const;
  double D(double t) const;
  double C(double t) const;  // diverges at tau*
  double support_radius(double t) const;
  double operator()(double t, double dist) const;

  /// Radial integral of the solution at time t (quadrature on the annulus).
  double mass_at(double t) const;

  /// Tabulated integration in sigma = -log(1 - t/tau*): columns rho, D^{1-m}.
  const DenseSolution& table() const { return table_; }
  double sigma_end() const { return sigma_end_; }

 private:
  friend WaitingTimeSolution wt_construct(const WaitingTimeSpec&, const Params&, const Tolerances&);
  WaitingTimeSolution(WaitingTimeSpec spec, Params params) : spec_(spec), params_(params) {}

  double sigma_of(double t) const;

  WaitingTimeSpec spec_;
  Params params_;
  double K_ = 0.0;
  double tau_star_ = 0.0;
  double D_star_ = 0.0;
  double mass_ = 0.0;
  double sigma_end_ = 0.0;
  DenseSolution table_;
};

WaitingTimeSolution wt_construct(const WaitingTimeSpec& spec, const Params& params,
                                 const Tolerances& tol = {});
double wt_eval(const WaitingTimeSolution& sol, double t, double dist);

/// Initial datum of the waiting-time family as a piecewise profile (needs psi
/// linear, i.e. m = 2 and N = 1).
PiecewiseProfile waiting_time_datum(const WaitingTimeSpec& spec, const Params& params);

// ---------------------------------------------------------------------------
// The symmetric m = 2, N = 1 example with a bulk jump (datum
// 2 on [0,1], 3-x on [1,2], (9-x)/7 on [2,9]). Time s = t - 1/2 runs the
// jump phase.

class Example82Solution {
 public:
  double s_star() const { return s_star_; }
  double t_star() const { return s_star_ + 0.5; }
  double r_star() const { return r_star_; }
  double s1() const { return s1_; }

  double r(double s) const;
  double D(double s) const;
  double C(double s) const;
  double C_prime(double s) const;

  const DenseSolution& table() const { return table_; }

 private:
  friend Example82Solution example82_solve(const Tolerances&);

  double s_star_ = 0.0;
  double r_star_ = 0.0;
  double s1_ = 0.0;
  DenseSolution table_;
};

inline constexpr double kExample82HalfMass = 7.0;

PiecewiseProfile example82_datum();
Example82Solution example82_solve(const Tolerances& tol = {});
double example82_eval(const Example82Solution& sol, double t, double x);
PiecewiseProfile example82_profile(const Example82Solution& sol, double t);

/// Plateau D and edge C = (9-r)/(2(3-s)) as functions of (s, r) from the mass relation.
double example82_D(double s, double r);
double example82_C(double s, double r);

double example82_f(double s);
/// Residual of the implicit integral relation for C(s).
double example82_implicit_residual(double s, double C);

/// The Burgers comparator v(t, x) with r_v(t) = sqrt(42-12t) + 4t - 5.
double burgers_shock_radius(double t);
double burgers_example_eval(double t, double x);
inline constexpr double kBurgersMergeTime = 11.0 / 4.0;

}  // namespace fld

#endif  // FLD_EXACT_HPP
