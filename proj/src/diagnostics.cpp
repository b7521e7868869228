#include "fld/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace fld {

double mass(const GridField& field, const Params& params) {
  // Neumaier summation: long runs compare masses at the rounding level.
  double sum = 0.0;
  double carry = 0.0;
  for (Eigen::Index i = 0; i < field.size(); ++i) {
    const double term = field.cell_measure(i) * field.values[i];
    const double next = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - next) + term : (term - next) + sum;
    sum = next;
  }
  sum += carry;
  if (field.geometry.radial_shells()) sum *= unit_sphere_measure(params.dim());
  return sum;
}

double support_radius(const GridField& field, double threshold, double center) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < field.size(); ++i) {
    if (field.values[i] > threshold) r = std::max(r, std::abs(field.center(i) - center));
  }
  return r;
}

double waiting_time_estimate(const Trajectory<GridField>& trajectory, double edge0, double tol,
                             double relative_threshold, double center) {
  if (trajectory.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "waiting_time_estimate: need at least two samples");
  }
  const double threshold = relative_threshold * trajectory.states.front().values.maxCoeff();
  if (!(threshold > 0.0)) return std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    if (support_radius(trajectory.states[k], threshold, center) > edge0 + tol) return trajectory.times[k];
  }
  return std::numeric_limits<double>::infinity();
}

double hole_displacement(const GridField& field, double x0, double lo, double hi) {
  if (!(lo > 0.0 && hi > lo && hi < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "hole_displacement: need 0 < lo < hi < 1");
  }
  const double inf = std::numeric_limits<double>::infinity();
  const Eigen::Index n = field.size();
  const double top = field.values.maxCoeff();
  if (!(top > 0.0)) return inf;
  auto start = static_cast<Eigen::Index>(std::floor((x0 - field.x_min) / field.h));
  start = std::clamp<Eigen::Index>(start, 0, n - 1);
  const double level_lo = lo * top;
  const double level_hi = hi * top;
  if (field.values[start] >= level_lo) return inf;

  // Linear interpolation between cell centers at the first upward crossing.
  auto crossing = [&](double level) {
    for (Eigen::Index i = start + 1; i < n; ++i) {
      if (field.values[i] >= level) {
        const double a = field.values[i - 1];
        const double b = field.values[i];
        return field.center(i - 1) + (level - a) / (b - a) * field.h;
      }
    }
    return inf;
  };
  const double x_lo = crossing(level_lo);
  const double x_hi = crossing(level_hi);
  if (!std::isfinite(x_lo) || !std::isfinite(x_hi) || !(x_hi > x_lo)) return inf;
  const double zero = x_lo - level_lo * (x_hi - x_lo) / (level_hi - level_lo);
  return std::max(0.0, x0 - zero);
}

double hole_filling_time(const Trajectory<GridField>& trajectory, double x0, double tol) {
  if (trajectory.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "hole_filling_time: need at least two samples");
  }
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    if (hole_displacement(trajectory.states[k], x0) > tol) return trajectory.times[k];
  }
  return std::numeric_limits<double>::infinity();
}

namespace {

struct Cluster {
  double position;
  double left;
  double right;
};

std::vector<Cluster> steep_clusters(const GridField& f, double threshold) {
  std::vector<Cluster> out;
  const Eigen::Index n = f.size();
  Eigen::Index i = 1;
  while (i < n) {
    if (std::abs(f.values[i] - f.values[i - 1]) / f.h <= threshold) {
      ++i;
      continue;
    }
    // Faces i..j-1 form one cluster.
    Eigen::Index j = i;
    double weight = 0.0;
    double moment = 0.0;
    while (j < n && std::abs(f.values[j] - f.values[j - 1]) / f.h > threshold) {
      const double w = std::abs(f.values[j] - f.values[j - 1]);
      weight += w;
      moment += w * f.face(j);
      ++j;
    }
    // Cells i-1 and j-1 border the cluster; traces use the three beyond them.
    auto mean = [&](Eigen::Index from, Eigen::Index to) {
      from = std::max<Eigen::Index>(from, 0);
      to = std::min<Eigen::Index>(to, n - 1);
      double s = 0.0;
      for (Eigen::Index k = from; k <= to; ++k) s += f.values[k];
      return to >= from ? s / static_cast<double>(to - from + 1) : 0.0;
    };
    out.push_back({moment / weight, mean(i - 4, i - 2), mean(j, j + 2)});
    i = j;
  }
  return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

std::vector<ShockRecord> shock_track(const Trajectory<GridField>& trajectory, double gradient_threshold, double m,
                                     double t_from, double t_to) {
  if (!(gradient_threshold > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "shock_track: threshold must be positive");
  }
  std::vector<ShockRecord> records;
  std::vector<bool> open;
  double t_prev = 0.0;
  bool have_prev = false;
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const double t = trajectory.times[k];
    if (t < t_from || t > t_to) continue;
    const GridField& f = trajectory.states[k];
    if (f.geometry.radial_shells()) throw Error(ErrorKind::InvalidArgument, "shock_track: 1D fields only");
    const double umax = f.values.maxCoeff();
    const double speed = umax > 0.0 ? m * std::pow(umax, m - 1.0) : 0.0;
    const double gate = (have_prev ? 2.0 * speed * (t - t_prev) : 0.0) + 5.0 * f.h;

    std::vector<bool> extended(records.size(), false);
    for (const Cluster& c : steep_clusters(f, gradient_threshold)) {
      std::size_t best = records.size();
      double best_dist = gate;
      for (std::size_t r = 0; r < records.size(); ++r) {
        if (!open[r] || extended[r]) continue;
        const double d = std::abs(records[r].positions.back() - c.position);
        if (d <= best_dist) {
          best = r;
          best_dist = d;
        }
      }
      if (best == records.size()) {
        records.emplace_back();
        open.push_back(true);
        extended.push_back(false);
      }
      ShockRecord& rec = records[best];
      rec.times.push_back(t);
      rec.positions.push_back(c.position);
      rec.left_traces.push_back(c.left);
      rec.right_traces.push_back(c.right);
      extended[best] = true;
    }
    // A record that misses a sample is closed.
    for (std::size_t r = 0; r < records.size(); ++r) open[r] = open[r] && extended[r];
    t_prev = t;
    have_prev = true;
  }

  std::vector<ShockRecord> out;
  for (ShockRecord& rec : records) {
    if (rec.times.size() < 3) continue;
    rec.speed = fit_slope(rec.times, rec.positions);
    out.push_back(std::move(rec));
  }
  if (out.empty()) throw Error(ErrorKind::NoShockFound, "shock_track: no steep cluster persists over 3 samples");
  return out;
}

ErrorNorms error_norms(const GridField& field, const std::function<double(double, double)>& oracle, double t) {
  ErrorNorms e;
  const double scale = field.geometry.radial_shells() ? unit_sphere_measure(field.geometry.dim) : 1.0;
  for (Eigen::Index i = 0; i < field.size(); ++i) {
    const double d = std::abs(field.values[i] - oracle(t, field.center(i)));
    e.L1 += scale * field.cell_measure(i) * d;
    e.Linf = std::max(e.Linf, d);
  }
  return e;
}

double convergence_order(const std::vector<double>& errors, const std::vector<double>& hs) {
  if (errors.size() < 2 || errors.size() != hs.size()) {
    throw Error(ErrorKind::DegenerateInput, "convergence_order: need at least two matching levels");
  }
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < hs.size(); ++k) {
    if (!(hs[k] > 0.0) || !(errors[k] > 0.0) || (k > 0 && !(hs[k] < hs[k - 1]))) {
      throw Error(ErrorKind::DegenerateInput, "convergence_order: hs must decrease and values be positive");
    }
    lx.push_back(std::log(hs[k]));
    ly.push_back(std::log(errors[k]));
  }
  return fit_slope(lx, ly);
}

}  // namespace fld
