#ifndef FLD_HYPERBOLIC_HPP
#define FLD_HYPERBOLIC_HPP

#include <cmath>
#include <limits>

#include <Eigen/Core>

#include "fld/model.hpp"

namespace fld {

/// Traces of a jump; orientation is the direction (+1 or -1) the front
/// normal points, from the u_minus side to the u_plus side.
struct JumpState {
  double u_minus = 0.0;
  double u_plus = 0.0;
  int orientation = 1;
};

template <typename Scalar>
Scalar char_speed(const Scalar& u, double m) {
  using std::pow;
  return m * pow(u, m - 1.0);
}

/// ((u+)^m - (u-)^m) / (u+ - u-), with the characteristic limit for equal traces.
template <typename Scalar>
Scalar rh_speed(const Scalar& u_minus, const Scalar& u_plus, double m) {
  using std::abs;
  using std::pow;
  const Scalar diff = u_plus - u_minus;
  const Scalar scale = abs(u_plus) > abs(u_minus) ? abs(u_plus) : abs(u_minus);
  if (abs(diff) <= 1e-12 * scale || scale == Scalar(0)) return char_speed(Scalar(0.5) * (u_plus + u_minus), m);
  return (pow(u_plus, m) - pow(u_minus, m)) / diff;
}

inline double rh_speed(const JumpState& jump, double m) { return rh_speed(jump.u_minus, jump.u_plus, m); }

enum class JumpContext {
  FullEquation,     // jump of the flux-limited equation: RH only
  ConservationLaw,  // embedded law u_t + s (u^m)_x = 0: RH and Oleinik
};

/// `front_speed` is measured along the jump orientation. In the conservation-law
/// context the flux sign s selects the law; the expected speed is s times the
/// RH quotient and the admissible jumps are the compressive ones.
bool jump_admissible(const JumpState& jump, double front_speed, double m, double tol,
                     JumpContext context = JumpContext::FullEquation, int flux_sign = 1);

struct AdvectedLine {
  double slope = 0.0;
  double intercept = 0.0;
  double horizon = std::numeric_limits<double>::infinity();  // time at which the slope blows up
};

/// Exact evolution of u0 = slope x + intercept under u_t + s (u^2)_x = 0:
/// (slope x + intercept) / (1 + 2 s slope t). Only m = 2 keeps lines linear.
AdvectedLine advect_linear_piece(double slope, double intercept, double t, int flux_sign, double m = 2.0);

/// Cell-wise discrete Kruzhkov residual
///   (|after - k| - |before - k|) / dt + (Q_{i+1/2} - Q_{i-1/2}) / h
/// for u_t + s (u^m)_x = 0 with the Godunov flux and its Crandall-Majda entropy
/// flux, evaluated on `before`. Admissible evolutions give residual <= 0.
Eigen::VectorXd kruzhkov_residual(const GridField& before, const GridField& after, double dt, double k, double m,
                                  int flux_sign);

}  // namespace fld

#endif  // FLD_HYPERBOLIC_HPP
