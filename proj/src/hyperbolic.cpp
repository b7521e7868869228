#include "fld/hyperbolic.hpp"

#include <algorithm>

namespace fld {

bool jump_admissible(const JumpState& jump, double front_speed, double m, double tol, JumpContext context,
                     int flux_sign) {
  if (jump.u_minus < 0.0 || jump.u_plus < 0.0) return false;
  const double expected =
      context == JumpContext::ConservationLaw ? flux_sign * rh_speed(jump, m) : rh_speed(jump, m);
  if (std::abs(front_speed * jump.orientation - expected) > tol * std::max(1.0, std::abs(expected))) return false;
  if (context == JumpContext::FullEquation) {
    // The flux traces (u^m)^{+-} sign(u+ - u-) always exist for a convex power,
    // so upward jumps into vacuum are allowed here.
    return true;
  }
  // Oleinik for s (u^m): compressive jumps only.
  const double left = jump.orientation > 0 ? jump.u_minus : jump.u_plus;
  const double right = jump.orientation > 0 ? jump.u_plus : jump.u_minus;
  return flux_sign > 0 ? left >= right : left <= right;
}

AdvectedLine advect_linear_piece(double slope, double intercept, double t, int flux_sign, double m) {
  if (m != 2.0) throw Error(ErrorKind::Unsupported, "advect_linear_piece: lines stay lines only for m = 2");
  if (flux_sign != 1 && flux_sign != -1) throw Error(ErrorKind::InvalidArgument, "advect_linear_piece: sign is +-1");
  AdvectedLine out;
  const double rate = 2.0 * flux_sign * slope;
  if (rate < 0.0) out.horizon = -1.0 / rate;
  const double g = 1.0 + rate * t;
  if (!(g > 0.0)) throw Error(ErrorKind::TimeBeyondBlowup, "advect_linear_piece: t beyond the blow-up horizon");
  out.slope = slope / g;
  out.intercept = intercept / g;
  return out;
}

namespace {

double godunov(double a, double b, double m, int s) { return s > 0 ? std::pow(a, m) : -std::pow(b, m); }

double entropy_flux(double a, double b, double k, double m, int s) {
  return godunov(std::max(a, k), std::max(b, k), m, s) - godunov(std::min(a, k), std::min(b, k), m, s);
}

}  // namespace

Eigen::VectorXd kruzhkov_residual(const GridField& before, const GridField& after, double dt, double k, double m,
                                  int flux_sign) {
  if (!before.same_grid(after)) throw Error(ErrorKind::GridMismatch, "kruzhkov_residual: fields on different grids");
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "kruzhkov_residual: dt must be positive");
  const Eigen::Index n = before.size();
  const Eigen::VectorXd& u = before.values;
  // Zero-gradient ghost cells.
  auto cell = [&](Eigen::Index i) { return u[std::clamp<Eigen::Index>(i, 0, n - 1)]; };
  Eigen::VectorXd q(n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) q[i] = entropy_flux(cell(i - 1), cell(i), k, m, flux_sign);
  Eigen::VectorXd res(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    res[i] = (std::abs(after.values[i] - k) - std::abs(u[i] - k)) / dt + (q[i + 1] - q[i]) / before.h;
  }
  return res;
}

}  // namespace fld
