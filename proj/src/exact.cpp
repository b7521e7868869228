#include "fld/exact.hpp"

#include <algorithm>
#include <cmath>

namespace fld {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Self-similar family

void SelfSimilarSpec::validate() const {
  if (!(X > 0.0) || !(T > 0.0) || !(t0 > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "self-similar spec: X, T, t0 must be positive");
  }
}

double self_similar_r(const SelfSimilarSpec& spec, const Params& params, double t) {
  const double a = params.alpha();
  return std::pow((spec.t0 + t) / a, a);
}

double self_similar_height(const SelfSimilarSpec& spec, const Params& params, double t) {
  const double k = 1.0 / (params.m() - 1.0);
  const int n = params.dim();
  return std::pow(spec.T, k - params.alpha() * n) * std::pow(spec.X, -k) *
         std::pow(self_similar_r(spec, params, t), -n);
}

double self_similar_radius(const SelfSimilarSpec& spec, const Params& params, double t) {
  return std::pow(spec.T, params.alpha()) * self_similar_r(spec, params, t) / spec.X;
}

double self_similar_eval(const SelfSimilarSpec& spec, const Params& params, double t, double dist) {
  spec.validate();
  if (t < 0.0) throw Error(ErrorKind::InvalidArgument, "self_similar_eval: t must be nonnegative");
  return std::abs(dist) < self_similar_radius(spec, params, t) ? self_similar_height(spec, params, t) : 0.0;
}

double self_similar_eval(const SelfSimilarSpec& spec, const Params& params, double t,
                         const Eigen::Ref<const Eigen::VectorXd>& x) {
  Eigen::VectorXd centre = Eigen::VectorXd::Zero(x.size());
  centre[0] = spec.x0;
  return self_similar_eval(spec, params, t, (x - centre).norm());
}

PiecewiseProfile self_similar_profile(const SelfSimilarSpec& spec, const Params& params, double t) {
  spec.validate();
  const double radius = self_similar_radius(spec, params, t);
  const double height = self_similar_height(spec, params, t);
  return PiecewiseProfile({0.0, radius}, {Piece::constant(height)}, true, {{radius, height, 0.0}});
}

double fsp_radius(double R, double t, const Params& params) {
  if (!(R > 0.0) || t < 0.0) throw Error(ErrorKind::InvalidArgument, "fsp_radius: need R > 0, t >= 0");
  const double a = params.alpha();
  return R * std::pow(1.0 + t / a, a);
}

double barrier_eval(double tau, const Params& params, double t, double dist) {
  if (!(t < tau)) throw Error(ErrorKind::TimeBeyondBlowup, "barrier_eval: t must precede tau");
  const double q = params.dim() * (params.m() - 1.0) + 1.0;
  return std::pow(std::abs(dist) / (q * (tau - t)), 1.0 / (params.m() - 1.0));
}

WaitingBounds waiting_bounds(double L, double ell, const Params& params) {
  if (!(L > 0.0) || !(ell > 0.0)) throw Error(ErrorKind::InvalidArgument, "waiting_bounds: L, ell > 0");
  if (L < ell) throw Error(ErrorKind::OrderViolation, "waiting_bounds: need L >= ell");
  const double q = params.dim() * (params.m() - 1.0) + 1.0;
  auto tau = [&](double v) { return std::isinf(v) ? 0.0 : std::pow(v, 1.0 - params.m()) / q; };
  return {tau(L), tau(ell)};
}

// ---------------------------------------------------------------------------
// Waiting-time family

void WaitingTimeSpec::validate() const {
  if (!(D0 > 0.0) || !(C0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "waiting-time spec: D0, C0 > 0");
  if (!(rho0 > 0.0) || !(rho0 < R)) throw Error(ErrorKind::InvalidArgument, "waiting-time spec: 0 < rho0 < R");
}

double WaitingTimeSolution::psi(double r) const {
  const double m = params_.m();
  const double p = params_.p();
  const double R = spec_.R;
  if (r >= R) return 0.0;
  const double ratio = (r / spec_.rho0) * (std::pow(R / r, p) - 1.0) / (std::pow(R / spec_.rho0, p) - 1.0);
  return (spec_.D0 / spec_.C0) * std::pow(std::max(0.0, ratio), 1.0 / (m - 1.0));
}

double WaitingTimeSolution::sigma_of(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= tau_star_) return kInf;
  return -std::log1p(-t / tau_star_);
}

double WaitingTimeSolution::rho(double t) const {
  const double s = sigma_of(t);
  if (s >= sigma_end_) return spec_.R;
  return std::min(table_(s)[0], spec_.R);
}

double WaitingTimeSolution::D(double t) const {
  if (t >= tau_star_) {
    const double radius = support_radius(t);
    return D_star_ * std::pow(spec_.R / radius, params_.dim());
  }
  const double s = sigma_of(t);
  if (s >= sigma_end_) return D_star_;
  return std::pow(table_(s)[1], -1.0 / (params_.m() - 1.0));
}

double WaitingTimeSolution::C(double t) const {
  const double m = params_.m();
  if (t >= tau_star_) return kInf;
  return std::pow(std::pow(spec_.C0, 1.0 - m) * (1.0 - t / tau_star_), -1.0 / (m - 1.0));
}

double WaitingTimeSolution::support_radius(double t) const {
  if (t <= tau_star_) return spec_.R;
  // Self-similar continuation through (tau*, R) with front speed D^{m-1}.
  const double a = params_.alpha();
  const double t1 = a * spec_.R / std::pow(D_star_, params_.m() - 1.0);
  return spec_.R * std::pow(1.0 + (t - tau_star_) / t1, a);
}

double WaitingTimeSolution::operator()(double t, double dist) const {
  const double r = std::abs(dist);
  if (t >= tau_star_) return r < support_radius(t) ? D(t) : 0.0;
  const double edge = rho(t);
  if (r < edge) return D(t);
  if (r < spec_.R) return C(t) * psi(r);
  return 0.0;
}

double WaitingTimeSolution::mass_at(double t) const {
  const int n = params_.dim();
  const double omega = unit_sphere_measure(n);
  if (t >= tau_star_) {
    const double radius = support_radius(t);
    return omega * D(t) * std::pow(radius, n) / n;
  }
  const double edge = rho(t);
  const double tail = integrate([&](double r) { return psi(r) * std::pow(r, n - 1); }, edge, spec_.R, 1e-13);
  return omega * (D(t) * std::pow(edge, n) / n + C(t) * tail);
}

WaitingTimeSolution wt_construct(const WaitingTimeSpec& spec, const Params& params, const Tolerances& tol) {
  spec.validate();
  tol.validate();
  WaitingTimeSolution sol(spec, params);
  const double m = params.m();
  const double p = params.p();
  const int n = params.dim();
  const double q = std::pow(spec.R / spec.rho0, p) - 1.0;

  sol.K_ = std::pow(spec.D0 / spec.C0, m - 1.0) * m * p / ((m - 1.0) * spec.rho0) / q;
  sol.tau_star_ = spec.rho0 * std::pow(spec.D0, 1.0 - m) / (m * p) * q;
  const double tau_check = std::pow(spec.C0, 1.0 - m) / ((m - 1.0) * sol.K_);
  if (std::abs(tau_check - sol.tau_star_) > 1e-12 * sol.tau_star_) {
    throw Error(ErrorKind::ConsistencyFailure, "wt_construct: tau* and K disagree");
  }

  const double K = sol.K_;
  const double tau = sol.tau_star_;
  const double R = spec.R;
  // psi^{m-1} as a function of rho.
  auto w = [&](double rho) {
    return rho >= R ? 0.0 : K * (m - 1.0) / (m * p) * rho * (std::pow(R / rho, p) - 1.0);
  };

  OdeProblem problem;
  problem.t0 = 0.0;
  problem.y0 = Eigen::Vector2d(spec.rho0, std::pow(spec.D0, 1.0 - m));
  problem.rhs = [&, n](double sigma, const OdeState& y) {
    const double rho = std::min(y[0], R);
    const double wr = w(rho);
    OdeState dy(2);
    dy[0] = m * (n * wr / rho + K) * wr / ((m - 1.0) * K * ((n - 1.0) * wr / rho + K));
    dy[1] = tau * std::exp(-sigma) * n * (m - 1.0) / rho;
    return dy;
  };
  // e^{-sigma_end} is below double resolution of t / tau*.
  sol.sigma_end_ = 40.0;
  OdeResult res = ode_solve(problem, sol.sigma_end_, tol);
  sol.table_ = std::move(res.solution);

  const OdeState end = sol.table_(sol.sigma_end_);
  if (std::abs(end[0] - R) > 1e-6 * R) {
    throw Error(ErrorKind::ConsistencyFailure, "wt_construct: rho(tau*) does not reach R");
  }
  sol.D_star_ = std::pow(end[1], -1.0 / (m - 1.0));

  // Invariants: rho increasing, D decreasing, continuity D = C psi(rho).
  double prev_rho = 0.0;
  double prev_D = kInf;
  for (int k = 0; k <= 200; ++k) {
    const double t = tau * (1.0 - std::exp(-sol.sigma_end_ * k / 200.0));
    const double r = sol.rho(t);
    const double d = sol.D(t);
    // Monotone up to the integration error.
    const double slack = 10.0 * (tol.abs_tol + tol.rel_tol * R);
    if (r < prev_rho - slack || d > prev_D * (1.0 + 10.0 * tol.rel_tol) + 10.0 * tol.abs_tol) {
      throw Error(ErrorKind::ConsistencyFailure, "wt_construct: monotonicity of rho or D violated");
    }
    prev_rho = r;
    prev_D = d;
    if (t <= 0.9 * tau) {
      const double cont = sol.C(t) * sol.psi(r);
      if (std::abs(cont - d) > 1e-6 * d) {
        throw Error(ErrorKind::ConsistencyFailure, "wt_construct: continuity D = C psi(rho) violated");
      }
    }
  }
  if (!(sol.D_star_ > 0.0)) throw Error(ErrorKind::ConsistencyFailure, "wt_construct: D(tau*) <= 0");
  sol.mass_ = sol.mass_at(0.0);
  return sol;
}

double wt_eval(const WaitingTimeSolution& sol, double t, double dist) { return sol(t, dist); }

PiecewiseProfile waiting_time_datum(const WaitingTimeSpec& spec, const Params& params) {
  spec.validate();
  if (params.m() != 2.0 || params.dim() != 1) {
    throw Error(ErrorKind::Unsupported, "waiting_time_datum: psi is linear only for m = 2, N = 1");
  }
  const double slope = -spec.D0 / (spec.R - spec.rho0);
  return PiecewiseProfile({0.0, spec.rho0, spec.R},
                          {Piece::constant(spec.D0), Piece::linear(slope, -slope * spec.R)}, true);
}

// ---------------------------------------------------------------------------
// Example with a bulk jump

double example82_D(double s, double r) { return (7.0 - (9.0 - r) * (9.0 - r) / (4.0 * (3.0 - s))) / r; }
double example82_C(double s, double r) { return (9.0 - r) / (2.0 * (3.0 - s)); }

double Example82Solution::r(double s) const { return table_(std::clamp(s, 0.0, s_star_))[0]; }
double Example82Solution::D(double s) const { return example82_D(s, r(s)); }
double Example82Solution::C(double s) const { return example82_C(s, r(s)); }
double Example82Solution::C_prime(double s) const {
  const double rp = table_.derivative(std::clamp(s, 0.0, s_star_))[0];
  return (2.0 * C(s) - rp) / (2.0 * (3.0 - s));
}

PiecewiseProfile example82_datum() {
  return PiecewiseProfile({0.0, 1.0, 2.0, 9.0},
                          {Piece::constant(2.0), Piece::linear(-1.0, 3.0), Piece::linear(-1.0 / 7.0, 9.0 / 7.0)},
                          true);
}

double example82_f(double s) {
  if (!(s >= 0.0) || s > 3.0) throw Error(ErrorKind::DomainError, "example82_f: s outside [0, 3]");
  return std::atanh(std::sqrt((3.0 - s) / 7.0)) - std::atanh(std::sqrt(3.0 / 7.0)) -
         5.0 * std::sqrt(7.0 * (3.0 - s)) / (36.0 + 9.0 * s) + 5.0 * std::sqrt(21.0) / 36.0;
}

double example82_implicit_residual(double s, double C) {
  const double a = 3.0 - s;
  const double arg = std::sqrt(a / 7.0) * C;
  if (!(s >= 0.0) || !(s < 3.0) || !(std::abs(arg) < 1.0)) {
    throw Error(ErrorKind::DomainError, "example82_implicit_residual: arctanh argument out of range");
  }
  const double lhs = std::atanh(arg) - std::sqrt(7.0 * a) * (14.0 - 9.0 * C) / (63.0 - 9.0 * a * C * C);
  const double rhs = std::atanh(std::sqrt(3.0 / 7.0)) - 5.0 * std::sqrt(21.0) / 36.0;
  return lhs - rhs;
}

Example82Solution example82_solve(const Tolerances& tol) {
  tol.validate();
  Example82Solution sol;
  OdeProblem problem;
  problem.t0 = 0.0;
  problem.y0 = OdeState::Constant(1, 3.0);
  problem.rhs = [](double s, const OdeState& y) {
    return OdeState::Constant(1, example82_D(s, y[0]) + example82_C(s, y[0]));
  };
  problem.events.push_back({"jump_closure",
                            [](double s, const OdeState& y) { return example82_D(s, y[0]) - example82_C(s, y[0]); },
                            true, -1});
  OdeResult res = ode_solve(problem, 3.0 - 1e-9, tol);
  if (!res.terminated || res.events.empty()) {
    throw Error(ErrorKind::EventNotFound, "example82_solve: D = C not reached in (0, 3)");
  }
  sol.s_star_ = res.events.front().t;
  sol.r_star_ = res.events.front().y[0];
  sol.table_ = std::move(res.solution);
  sol.s1_ = find_root(example82_f, 0.1, 3.0, {1e-14, 1e-14, 500});

  const double t_star = sol.t_star();
  if (!(t_star > 0.5 && t_star < 3.5) || !(sol.s_star_ < sol.s1_)) {
    throw Error(ErrorKind::ConsistencyFailure, "example82_solve: t* outside (1/2, 7/2)");
  }
  if (std::abs(sol.r_star_ * sol.r_star_ - (28.0 * t_star - 17.0)) > 1e-6) {
    throw Error(ErrorKind::ConsistencyFailure, "example82_solve: r*^2 != 28 t* - 17");
  }
  if (std::abs(example82_implicit_residual(sol.s_star_, sol.C(sol.s_star_))) > 1e-6) {
    throw Error(ErrorKind::ConsistencyFailure, "example82_solve: implicit relation for C violated");
  }
  return sol;
}

double example82_eval(const Example82Solution& sol, double t, double x) {
  if (t < 0.0) throw Error(ErrorKind::InvalidArgument, "example82_eval: t must be nonnegative");
  x = std::abs(x);
  if (t < 0.5) {
    const double edge = std::sqrt(16.0 * t + 1.0);
    if (x < edge) return 8.0 / (3.0 + edge);
    if (x <= 2.0 + 2.0 * t) return (3.0 - x) / (1.0 - 2.0 * t);
    if (x <= 9.0) return (9.0 - x) / (7.0 - 2.0 * t);
    return 0.0;
  }
  if (t < sol.t_star()) {
    const double s = t - 0.5;
    const double r = sol.r(s);
    const double D = example82_D(s, r);
    if (x < r) return D;
    if (x == r) return 0.5 * (D + example82_C(s, r));
    if (x <= 9.0) return (9.0 - x) / (7.0 - 2.0 * t);
    return 0.0;
  }
  if (t <= 3.5) {
    const double edge = std::sqrt(28.0 * t - 17.0);
    if (x <= edge) return x == 9.0 ? 7.0 / 18.0 : 14.0 / (9.0 + edge);
    if (x < 9.0) return (9.0 - x) / (7.0 - 2.0 * t);
    return 0.0;
  }
  const double a = 32.0 / 49.0 + 2.0 * t / 7.0;
  const double edge = 7.0 * std::sqrt(a);
  if (x < edge) return 1.0 / std::sqrt(a);
  if (x == edge) return 0.5 / std::sqrt(a);
  return 0.0;
}

PiecewiseProfile example82_profile(const Example82Solution& sol, double t) {
  if (t < 0.5) {
    const double edge = std::sqrt(16.0 * t + 1.0);
    const double c1 = 1.0 / (1.0 - 2.0 * t);
    const double c2 = 1.0 / (7.0 - 2.0 * t);
    return PiecewiseProfile({0.0, edge, 2.0 + 2.0 * t, 9.0},
                            {Piece::constant(8.0 / (3.0 + edge)), Piece::linear(-c1, 3.0 * c1),
                             Piece::linear(-c2, 9.0 * c2)},
                            true);
  }
  if (t < sol.t_star()) {
    const double s = t - 0.5;
    const double r = sol.r(s);
    const double D = example82_D(s, r);
    const double c2 = 1.0 / (7.0 - 2.0 * t);
    const double C = (9.0 - r) * c2;
    return PiecewiseProfile({0.0, r, 9.0}, {Piece::constant(D), Piece::linear(-c2, 9.0 * c2)}, true,
                            {{r, D, C}});
  }
  if (t < 3.5) {
    const double edge = std::sqrt(28.0 * t - 17.0);
    const double c2 = 1.0 / (7.0 - 2.0 * t);
    return PiecewiseProfile({0.0, edge, 9.0}, {Piece::constant(14.0 / (9.0 + edge)), Piece::linear(-c2, 9.0 * c2)},
                            true);
  }
  const double a = 32.0 / 49.0 + 2.0 * t / 7.0;
  const double edge = 7.0 * std::sqrt(a);
  const double height = 1.0 / std::sqrt(a);
  return PiecewiseProfile({0.0, edge}, {Piece::constant(height)}, true, {{edge, height, 0.0}});
}

// ---------------------------------------------------------------------------
// Burgers comparator

double burgers_shock_radius(double t) {
  if (t < 0.5 || t > kBurgersMergeTime) {
    throw Error(ErrorKind::DomainError, "burgers_shock_radius: defined on [1/2, 11/4]");
  }
  return std::sqrt(42.0 - 12.0 * t) + 4.0 * t - 5.0;
}

double burgers_example_eval(double t, double x) {
  if (t < 0.0) throw Error(ErrorKind::InvalidArgument, "burgers_example_eval: t must be nonnegative");
  if (t < 0.5) {
    if (x <= 1.0 + 4.0 * t) return 2.0;
    if (x <= 2.0 + 2.0 * t) return (3.0 - x) / (1.0 - 2.0 * t);
    if (x <= 9.0) return (9.0 - x) / (7.0 - 2.0 * t);
    return 0.0;
  }
  if (t < kBurgersMergeTime) {
    if (x <= burgers_shock_radius(t)) return 2.0;
    if (x <= 9.0) return (9.0 - x) / (7.0 - 2.0 * t);
    return 0.0;
  }
  return x <= 9.0 + 2.0 * (t - kBurgersMergeTime) ? 2.0 : 0.0;
}

}  // namespace fld
