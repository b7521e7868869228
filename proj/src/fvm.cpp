#include "fld/fvm.hpp"

#include <algorithm>
#include <cmath>

#include "fld/diagnostics.hpp"

namespace fld {

void FluxConfig::validate() const {
  if (variant == FluxVariant::SmoothedSign && !(delta > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "flux: delta must be positive");
  }
  if (variant == FluxVariant::Relativistic && !(rho > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "flux: rho must be positive");
  }
}

void SchemeConfig::validate() const {
  auto in_unit = [](double c) { return c > 0.0 && c <= 1.0; };
  if (!in_unit(cfl_hyperbolic) || !in_unit(cfl_parabolic) || !in_unit(implicit_cfl)) {
    throw Error(ErrorKind::InvalidArgument, "scheme: CFL numbers must lie in (0, 1]");
  }
  if (!(newton.tol > 0.0) || newton.max_iterations <= 0) {
    throw Error(ErrorKind::InvalidArgument, "scheme: invalid Newton options");
  }
}

FluxJacobian numerical_flux_jacobian(double uL, double uR, double h, const FluxConfig& flux, double m) {
  FluxJacobian out;
  const double g = (uR - uL) / h;
  const bool left_up = g <= 0.0;
  const double up = left_up ? uL : uR;
  const double phi = std::pow(up, m);
  const double dphi = up > 0.0 ? m * std::pow(up, m - 1.0) : 0.0;
  double s = 0.0;
  double ds_dL = 0.0;
  double ds_dR = 0.0;
  if (flux.variant == FluxVariant::SmoothedSign) {
    const double q = g * g + flux.delta * flux.delta;
    s = g / std::sqrt(q);
    const double ds_dg = flux.delta * flux.delta / (q * std::sqrt(q));
    ds_dL = -ds_dg / h;
    ds_dR = ds_dg / h;
  } else {
    const double ubar = 0.5 * (uL + uR);
    const double q = ubar * ubar + flux.rho * flux.rho * g * g;
    if (q > 0.0) {
      const double root = std::sqrt(q);
      s = flux.rho * g / root;
      const double ds_dg = flux.rho * ubar * ubar / (q * root);
      const double ds_du = -flux.rho * g * ubar / (q * root);
      ds_dL = -ds_dg / h + 0.5 * ds_du;
      ds_dR = ds_dg / h + 0.5 * ds_du;
    }
  }
  out.F = -phi * s;
  out.dF_left = -phi * ds_dL - (left_up ? dphi * s : 0.0);
  out.dF_right = -phi * ds_dR - (left_up ? 0.0 : dphi * s);
  return out;
}

double stable_dt(const GridField& field, const FluxConfig& flux, const SchemeConfig& scheme, double m,
                 double requested) {
  if (scheme.stepper == Stepper::ImplicitEuler) return requested;
  const double umax = field.values.size() ? field.values.maxCoeff() : 0.0;
  if (!(umax > 0.0)) return requested;
  const double h = field.h;
  const double speed = m * std::pow(umax, m - 1.0);
  double dt = scheme.cfl_hyperbolic * h / speed;
  if (flux.variant == FluxVariant::SmoothedSign) {
    dt = std::min(dt, scheme.cfl_parabolic * h * h * flux.delta / (2.0 * std::pow(umax, m)));
  } else {
    dt = std::min(dt, scheme.cfl_parabolic * h * h / (8.0 * flux.rho * std::pow(umax, m - 1.0)));
  }
  // Shell weights r^{N-1}/V are at most N/h.
  if (field.geometry.radial_shells()) dt /= field.geometry.dim;
  return std::min(dt, requested);
}

namespace {

double face_weight(const GridField& f, Eigen::Index i) {
  if (!f.geometry.radial_shells()) return 1.0;
  return std::pow(f.face(i), f.geometry.dim - 1);
}

// Boundary flux at face 0 (left) or n (right) and its derivative w.r.t. the
// adjacent cell value.
std::pair<double, double> boundary_flux(const GridField& f, const SchemeConfig& scheme, double m, bool right) {
  const Eigen::Index n = f.size();
  if (!right && f.geometry.radial_shells()) return {0.0, 0.0};  // symmetry at the origin
  if (scheme.boundary != Boundary::DirichletZeroAbsorbing) return {0.0, 0.0};
  const double u = right ? f.values[n - 1] : f.values[0];
  const double phi = std::pow(u, m);
  const double dphi = u > 0.0 ? m * std::pow(u, m - 1.0) : 0.0;
  return right ? std::make_pair(phi, dphi) : std::make_pair(-phi, -dphi);
}

void check_free_boundary(const GridField& f, const SchemeConfig& scheme) {
  if (scheme.boundary != Boundary::FreeLargeDomain) return;
  const double umax = f.values.maxCoeff();
  const double limit = scheme.free_threshold * umax;
  const bool left_hit = !f.geometry.radial_shells() && f.values[0] > limit;
  if (umax > 0.0 && (left_hit || f.values[f.size() - 1] > limit)) {
    throw Error(ErrorKind::InvariantViolation, "free boundary: the support reached the edge of the domain");
  }
}

// Conservative divergence (w F)_{i+1/2} - (w F)_{i-1/2} over the cell measure.
Eigen::VectorXd divergence(const GridField& f, const Eigen::VectorXd& F) {
  const Eigen::Index n = f.size();
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d[i] = (face_weight(f, i + 1) * F[i + 1] - face_weight(f, i) * F[i]) / f.cell_measure(i);
  }
  return d;
}

// Thomas algorithm; the Jacobian is an M-matrix so no pivoting is needed.
Eigen::VectorXd solve_tridiagonal(Eigen::VectorXd lower, Eigen::VectorXd diag, Eigen::VectorXd upper,
                                  Eigen::VectorXd rhs) {
  const Eigen::Index n = diag.size();
  for (Eigen::Index i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  Eigen::VectorXd x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (Eigen::Index i = n - 2; i >= 0; --i) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
  return x;
}

}  // namespace

Eigen::VectorXd interface_fluxes(const GridField& f, const FluxConfig& flux, const SchemeConfig& scheme, double m) {
  const Eigen::Index n = f.size();
  Eigen::VectorXd F(n + 1);
  for (Eigen::Index i = 1; i < n; ++i) F[i] = numerical_flux(f.values[i - 1], f.values[i], f.h, flux, m);
  F[0] = boundary_flux(f, scheme, m, false).first;
  F[n] = boundary_flux(f, scheme, m, true).first;
  return F;
}

GridField step_explicit(const GridField& field, const FluxConfig& flux, const SchemeConfig& scheme, double m,
                        double dt) {
  flux.validate();
  scheme.validate();
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "step_explicit: dt must be positive");
  SchemeConfig explicit_scheme = scheme;
  explicit_scheme.stepper = Stepper::ExplicitEuler;
  const double limit = stable_dt(field, flux, explicit_scheme, m);
  if (dt > limit * (1.0 + 1e-12)) {
    throw Error(ErrorKind::CflViolation, "step_explicit: dt " + std::to_string(dt) + " exceeds the stable step " +
                                             std::to_string(limit));
  }
  const Eigen::VectorXd F = interface_fluxes(field, flux, scheme, m);
  Eigen::VectorXd u = field.values - dt * divergence(field, F);
  u = u.cwiseMax(0.0);  // rounding only: the update is monotone
  GridField out(field.x_min, field.h, std::move(u), field.geometry);
  check_free_boundary(out, scheme);
  return out;
}

GridField step_implicit(const GridField& field, const FluxConfig& flux, const SchemeConfig& scheme, double m,
                        double dt) {
  flux.validate();
  scheme.validate();
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "step_implicit: dt must be positive");
  const Eigen::Index n = field.size();
  const Eigen::VectorXd& un = field.values;
  const double scale = std::max(1.0, un.cwiseAbs().maxCoeff());
  const double tol = scheme.newton.tol * scale;

  Eigen::VectorXd measure(n);
  Eigen::VectorXd weight(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) measure[i] = field.cell_measure(i);
  for (Eigen::Index i = 0; i <= n; ++i) weight[i] = face_weight(field, i);

  GridField work = field;
  auto residual = [&](const Eigen::VectorXd& u, Eigen::VectorXd* F_out) {
    work.values = u;
    const Eigen::VectorXd F = interface_fluxes(work, flux, scheme, m);
    if (F_out) *F_out = F;
    return Eigen::VectorXd(u - un + dt * divergence(work, F));
  };

  Eigen::VectorXd u = un;
  Eigen::VectorXd G = residual(u, nullptr);
  double norm = G.cwiseAbs().maxCoeff();
  Eigen::VectorXd lower(n), diag(n), upper(n);
  int it = 0;
  while (norm > tol) {
    if (++it > scheme.newton.max_iterations) {
      throw Error(ErrorKind::NewtonDivergence, "step_implicit: no convergence within the iteration budget");
    }
    // Jacobian rows: dt/V_i (w_{i+1} dF_{i+1} - w_i dF_i).
    diag.setOnes();
    lower.setZero();
    upper.setZero();
    for (Eigen::Index f = 1; f < n; ++f) {
      const FluxJacobian J = numerical_flux_jacobian(u[f - 1], u[f], field.h, flux, m);
      const double cl = dt * weight[f] / measure[f - 1];  // cell f-1, face on its right
      const double cr = dt * weight[f] / measure[f];      // cell f, face on its left
      diag[f - 1] += cl * J.dF_left;
      upper[f - 1] += cl * J.dF_right;
      diag[f] -= cr * J.dF_right;
      lower[f] -= cr * J.dF_left;
    }
    work.values = u;
    diag[0] -= dt * weight[0] / measure[0] * boundary_flux(work, scheme, m, false).second;
    diag[n - 1] += dt * weight[n] / measure[n - 1] * boundary_flux(work, scheme, m, true).second;
    const Eigen::VectorXd step = solve_tridiagonal(lower, diag, upper, -G);
    // With a stiff limiter (small delta) the Jacobian reaches dt phi / (h^2 delta),
    // so the residual floor sits far above rounding in u. A Newton update below
    // tol is taken as convergence.
    if (step.cwiseAbs().maxCoeff() <= tol) {
      u = (u + step).cwiseMax(0.0);
      break;
    }

    // Damped update with nonnegativity clamp.
    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k) {
      const Eigen::VectorXd trial = (u + lambda * step).cwiseMax(0.0);
      const Eigen::VectorXd Gt = residual(trial, nullptr);
      const double nt = Gt.cwiseAbs().maxCoeff();
      if (nt < (1.0 - 1e-4 * lambda) * norm || nt <= tol) {
        u = trial;
        G = Gt;
        norm = nt;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) throw Error(ErrorKind::NewtonDivergence, "step_implicit: line search failed");
  }

  // Conservative finalization from the converged fluxes.
  Eigen::VectorXd F;
  residual(u, &F);
  work.values = u;
  Eigen::VectorXd next = un - dt * divergence(work, F);
  const double floor = -1e3 * tol;
  if (next.minCoeff() < floor) {
    throw Error(ErrorKind::NewtonDivergence, "step_implicit: converged state lost positivity");
  }
  next = next.cwiseMax(0.0);
  GridField out(field.x_min, field.h, std::move(next), field.geometry);
  check_free_boundary(out, scheme);
  return out;
}

namespace {

DiagnosticsRecord record(double t, const GridField& f, const Params& params, double threshold, double center) {
  DiagnosticsRecord d;
  d.t = t;
  d.mass = mass(f, params);
  d.support_radius = support_radius(f, threshold, center);
  d.min_value = f.values.minCoeff();
  d.max_value = f.values.maxCoeff();
  return d;
}

}  // namespace

Trajectory<GridField> run_scenario(const GridField& initial, const Params& params, const FluxConfig& flux,
                                   const SchemeConfig& scheme, double t_end, std::vector<double> output_times,
                                   const RunOptions& options) {
  flux.validate();
  scheme.validate();
  if (!(t_end > 0.0)) throw Error(ErrorKind::InvalidArgument, "run_scenario: t_end must be positive");
  if (initial.geometry.radial_shells() ? initial.geometry.dim != params.dim() : params.dim() != 1) {
    throw Error(ErrorKind::InvalidArgument, "run_scenario: geometry does not match the dimension");
  }
  const double m = params.m();
  std::sort(output_times.begin(), output_times.end());
  std::erase_if(output_times, [&](double t) { return !(t > 0.0) || t >= t_end; });
  output_times.erase(std::unique(output_times.begin(), output_times.end()), output_times.end());
  output_times.push_back(t_end);

  const double threshold = options.support_threshold * std::max(initial.values.maxCoeff(), 0.0);
  Trajectory<GridField> traj;
  traj.metadata["solver"] = "fvm";
  traj.metadata["stepper"] = scheme.stepper == Stepper::ExplicitEuler ? "explicit" : "implicit";
  traj.push(0.0, initial);
  traj.diagnostics.push_back(record(0.0, initial, params, threshold, options.center));

  GridField u = initial;
  double t = 0.0;
  long steps = 0;
  for (double target : output_times) {
    while (t < target) {
      if (++steps > options.max_steps) throw Error(ErrorKind::MaxSteps, "run_scenario: step budget exhausted");
      const double remaining = target - t;
      double dt;
      if (scheme.stepper == Stepper::ExplicitEuler) {
        dt = stable_dt(u, flux, scheme, m, remaining);
        if (dt >= remaining) dt = remaining;
        u = step_explicit(u, flux, scheme, m, dt);
      } else {
        const double umax = u.values.maxCoeff();
        dt = remaining;
        if (umax > 0.0) {
          const double cap = scheme.implicit_cfl * u.h / (m * std::pow(umax, m - 1.0));
          dt = std::min(dt, cap);
        }
        for (int attempt = 0;; ++attempt) {
          try {
            u = step_implicit(u, flux, scheme, m, dt);
            break;
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::NewtonDivergence || attempt >= 30) throw;
            dt *= 0.5;
          }
        }
      }
      t = (dt == remaining) ? target : t + dt;
      if (options.on_step) options.on_step(t, u);
    }
    traj.push(t, u);
    traj.diagnostics.push_back(record(t, u, params, threshold, options.center));
  }
  return traj;
}

Trajectory<GridField> run_scenario(const PiecewiseProfile& initial, double x_min, double x_max, Eigen::Index cells,
                                   const Params& params, const FluxConfig& flux, const SchemeConfig& scheme,
                                   double t_end, std::vector<double> output_times, const RunOptions& options) {
  const Geometry geometry = params.dim() == 1 ? Geometry::line() : Geometry::radial(params.dim());
  const GridField field = sample_cell_averages(initial, x_min, x_max, cells, geometry);
  return run_scenario(field, params, flux, scheme, t_end, std::move(output_times), options);
}

}  // namespace fld
