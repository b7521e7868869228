#include "fld/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fld {

void Tolerances::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tolerances must be positive");
  }
  if (max_steps <= 0) throw Error(ErrorKind::InvalidArgument, "max_steps must be positive");
}

// ---------------------------------------------------------------------------
// Dense output

void DenseSolution::start(double t0, OdeState y0) {
  t_.assign(1, t0);
  y_.assign(1, std::move(y0));
  h_.clear();
  coefficients_.clear();
}

void DenseSolution::append(double t1, OdeState y1, const Eigen::MatrixXd& coefficients) {
  h_.push_back(t1 - t_.back());
  t_.push_back(t1);
  y_.push_back(std::move(y1));
  coefficients_.push_back(coefficients);
}

void DenseSolution::truncate(double t) {
  if (coefficients_.empty() || !(t < t_.back())) return;
  const std::size_t k = locate(t);
  const OdeState yt = (*this)(t);
  t_.resize(k + 2);
  y_.resize(k + 2);
  h_.resize(k + 1);
  coefficients_.resize(k + 1);
  t_.back() = t;
  y_.back() = yt;
}

std::size_t DenseSolution::locate(double t) const {
  if (coefficients_.empty()) return 0;
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t k = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
  return std::min(k, coefficients_.size() - 1);
}

OdeState DenseSolution::operator()(double t) const {
  if (coefficients_.empty()) return y_.front();
  const std::size_t k = locate(t);
  const double h = h_[k];
  const double s = std::clamp((t - t_[k]) / h, 0.0, (t_[k + 1] - t_[k]) / h);
  const double s1 = 1.0 - s;
  const auto& c = coefficients_[k];
  return c.col(0) + s * (c.col(1) + s1 * (c.col(2) + s * (c.col(3) + s1 * c.col(4))));
}

OdeState DenseSolution::derivative(double t) const {
  if (coefficients_.empty()) return OdeState::Zero(y_.front().size());
  const std::size_t k = locate(t);
  const double h = h_[k];
  const double s = std::clamp((t - t_[k]) / h, 0.0, (t_[k + 1] - t_[k]) / h);
  const double s1 = 1.0 - s;
  const auto& c = coefficients_[k];
  const OdeState a = c.col(3) + s1 * c.col(4);
  const OdeState da = -c.col(4);
  const OdeState b = c.col(2) + s * a;
  const OdeState db = a + s * da;
  const OdeState q = c.col(1) + s1 * b;
  const OdeState dq = -b + s1 * db;
  return (q + s * dq) / h;
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)

namespace {

constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

bool all_finite(const OdeState& y) { return y.allFinite(); }

double error_norm(const OdeState& err, const OdeState& y0, const OdeState& y1, const Tolerances& tol) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = tol.abs_tol + tol.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(std::max<Eigen::Index>(1, err.size())));
}

bool crosses(double g0, double g1, int direction) {
  if (g0 == 0.0) return false;
  const bool up = g0 < 0.0 && g1 >= 0.0;
  const bool down = g0 > 0.0 && g1 <= 0.0;
  if (direction > 0) return up;
  if (direction < 0) return down;
  return up || down;
}

}  // namespace

OdeResult ode_solve(const OdeProblem& problem, double t_end, const Tolerances& tol) {
  tol.validate();
  if (!problem.rhs) throw Error(ErrorKind::InvalidArgument, "ode_solve: missing right-hand side");
  if (!(t_end >= problem.t0)) throw Error(ErrorKind::InvalidArgument, "ode_solve: t_end before t0");

  OdeResult result;
  double t = problem.t0;
  OdeState y = problem.y0;
  result.solution.start(t, y);
  result.t_final = t;
  result.y_final = y;
  if (t_end == t) return result;

  const Eigen::Index n = y.size();
  OdeState k1 = problem.rhs(t, y);
  if (!all_finite(k1)) throw Error(ErrorKind::StepFailure, "ode_solve: right-hand side not finite at t0");

  std::vector<double> g_prev(problem.events.size());
  for (std::size_t e = 0; e < problem.events.size(); ++e) g_prev[e] = problem.events[e].g(t, y);

  // Initial step (Hairer-Wanner heuristic).
  double h;
  {
    const double sc0 = tol.abs_tol + tol.rel_tol * y.cwiseAbs().maxCoeff();
    const double dnf = k1.norm() / std::sqrt(static_cast<double>(std::max<Eigen::Index>(1, n))) / sc0;
    const double dny = y.norm() / std::sqrt(static_cast<double>(std::max<Eigen::Index>(1, n))) / sc0;
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
    h = std::min(h, t_end - t);
  }

  const double beta = 0.04;
  const double expo1 = 0.2 - beta * 0.75;
  double err_old = 1e-4;
  bool last_rejected = false;
  long steps = 0;

  OdeState k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y1(n), yerr(n);
  Eigen::MatrixXd cont(n, 5);

  while (t < t_end) {
    if (++steps > tol.max_steps) throw Error(ErrorKind::MaxSteps, "ode_solve: step budget exhausted");
    if (t + h > t_end) h = t_end - t;
    if (h <= 1e-14 * std::max(1.0, std::abs(t))) {
      throw Error(ErrorKind::StepFailure, "ode_solve: step size underflow near t = " + std::to_string(t));
    }

    k2 = problem.rhs(t + c2 * h, y + h * a21 * k1);
    k3 = problem.rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    k4 = problem.rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = problem.rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = problem.rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    k7 = problem.rhs(t + h, y1);

    bool finite = all_finite(k2) && all_finite(k3) && all_finite(k4) && all_finite(k5) &&
                  all_finite(k6) && all_finite(y1) && all_finite(k7);
    double err = std::numeric_limits<double>::infinity();
    if (finite) {
      yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      err = error_norm(yerr, y, y1, tol);
    }

    if (!(err <= 1.0)) {
      const double shrink = finite ? std::max(0.2, 0.9 * std::pow(err, -expo1)) : 0.25;
      h *= last_rejected ? std::min(shrink, 0.5) : shrink;
      last_rejected = true;
      continue;
    }

    // Accepted: build the continuous extension.
    const OdeState ydiff = y1 - y;
    const OdeState bspl = h * k1 - ydiff;
    cont.col(0) = y;
    cont.col(1) = ydiff;
    cont.col(2) = bspl;
    cont.col(3) = ydiff - h * k7 - bspl;
    cont.col(4) = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
    const double t1 = t + h;
    result.solution.append(t1, y1, cont);

    // Event location on the new step.
    double t_stop = std::numeric_limits<double>::infinity();
    std::vector<EventHit> hits;
    for (std::size_t e = 0; e < problem.events.size(); ++e) {
      const auto& ev = problem.events[e];
      const double g1 = ev.g(t1, y1);
      if (crosses(g_prev[e], g1, ev.direction)) {
        const auto& sol = result.solution;
        auto g = [&](double s) { return ev.g(s, sol(s)); };
        double te = t1;
        if (g1 != 0.0) {
          Tolerances rt{tol.rel_tol, tol.abs_tol * 1e-3, 200};
          te = find_root(g, t, t1, rt);
        }
        hits.push_back({e, ev.name, te, sol(te)});
      }
      g_prev[e] = g1;
    }
    std::sort(hits.begin(), hits.end(), [](const EventHit& a, const EventHit& b) {
      return a.t < b.t || (a.t == b.t && a.index < b.index);
    });
    for (const auto& hit : hits) {
      if (hit.t > t_stop) break;
      result.events.push_back(hit);
      if (problem.events[hit.index].terminal) t_stop = hit.t;
    }
    if (std::isfinite(t_stop)) {
      // Drop non-terminal hits recorded past the terminal one.
      std::erase_if(result.events, [&](const EventHit& hit) { return hit.t > t_stop; });
      result.terminated = true;
      result.t_final = t_stop;
      result.y_final = result.solution(t_stop);
      result.solution.truncate(t_stop);
      return result;
    }

    t = t1;
    y = y1;
    k1 = k7;
    result.t_final = t;
    result.y_final = y;

    const double fac11 = std::pow(err, expo1);
    double fac = fac11 / std::pow(err_old, beta);
    fac = std::clamp(fac / 0.9, 1.0 / 10.0, 1.0 / 0.2);
    double h_new = h / fac;
    if (last_rejected) h_new = std::min(h_new, h);
    err_old = std::max(err, 1e-4);
    last_rejected = false;
    h = h_new;
  }
  return result;
}

// ---------------------------------------------------------------------------

double find_root(const std::function<double(double)>& f, double a, double b, const Tolerances& tol) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (!std::isfinite(fa) || !std::isfinite(fb) || fa * fb > 0.0) {
    throw Error(ErrorKind::NoBracket, "find_root: f(a) and f(b) have the same sign");
  }
  double c = a, fc = fa, d = b - a, e = d;
  for (long iter = 0; iter < std::max<long>(tol.max_steps, 200); ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double t1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * tol.abs_tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= t1 || fb == 0.0) return b;
    if (std::abs(e) >= t1 && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(t1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > t1 ? d : (m > 0.0 ? t1 : -t1);
    fb = f(b);
  }
  return b;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

double gk15(const std::function<double(double)>& f, double a, double b, double& err) {
  const double c = 0.5 * (a + b);
  const double hl = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = hl * kXgk[j];
    const double fs = f(c - dx) + f(c + dx);
    kron += kWgk[j] * fs;
    if (j % 2 == 1) gauss += kWg[j / 2] * fs;
  }
  err = std::abs((kron - gauss) * hl);
  return kron * hl;
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth) {
  double err = 0.0;
  const double value = gk15(f, a, b, err);
  if (err <= tol || depth >= 40) return value;
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, 0.5 * tol, depth + 1) + adapt(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, tol);
  return adapt(f, a, b, tol, 0);
}

}  // namespace fld
