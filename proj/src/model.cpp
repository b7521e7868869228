#include "fld/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fld {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::MaxSteps: return "MaxSteps";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ConsistencyFailure: return "ConsistencyFailure";
    case ErrorKind::EventNotFound: return "EventNotFound";
    case ErrorKind::OrderViolation: return "OrderViolation";
    case ErrorKind::TimeBeyondBlowup: return "TimeBeyondBlowup";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::UnsupportedProfile: return "UnsupportedProfile";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::CflViolation: return "CflViolation";
    case ErrorKind::NewtonDivergence: return "NewtonDivergence";
    case ErrorKind::NoShockFound: return "NoShockFound";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

Params::Params(double m, int dim) : m_(m), dim_(dim) {
  if (!(m > 1.0) || !std::isfinite(m)) throw Error(ErrorKind::InvalidArgument, "m must exceed 1");
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be at least 1");
  const double q = static_cast<double>(dim) * (m - 1.0) + 1.0;
  alpha_ = 1.0 / q;
  p_ = q / m;
}

double unit_sphere_measure(int dim) {
  if (dim < 1 || dim > 10) throw Error(ErrorKind::InvalidArgument, "unit_sphere_measure: 1 <= N <= 10");
  // 2 pi^{N/2} / Gamma(N/2), tabulated to avoid tgamma rounding.
  static constexpr double pi = std::numbers::pi;
  static const double table[11] = {0.0,
                                   2.0,
                                   2.0 * pi,
                                   4.0 * pi,
                                   2.0 * pi * pi,
                                   8.0 * pi * pi / 3.0,
                                   pi * pi * pi,
                                   16.0 * pi * pi * pi / 15.0,
                                   pi * pi * pi * pi / 3.0,
                                   32.0 * pi * pi * pi * pi / 105.0,
                                   pi * pi * pi * pi * pi / 12.0};
  return table[dim];
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kContinuityTol = 1e-9;

bool near(double a, double b, double scale) {
  return std::abs(a - b) <= kContinuityTol * std::max(1.0, scale);
}

// int_c^d (s x + i) |x|^p dx on an interval that does not straddle zero.
double linear_moment_one_sign(double s, double i, double c, double d, int p) {
  if (c >= 0.0) {
    const double q1 = p + 1.0;
    const double q2 = p + 2.0;
    return s * (std::pow(d, q2) - std::pow(c, q2)) / q2 + i * (std::pow(d, q1) - std::pow(c, q1)) / q1;
  }
  // x = -y maps [c, d] onto [-d, -c] with slope -s.
  return linear_moment_one_sign(-s, i, -d, -c, p);
}

double linear_moment(double s, double i, double c, double d, int p) {
  if (!(d > c)) return 0.0;
  if (c < 0.0 && d > 0.0) {
    return linear_moment_one_sign(s, i, c, 0.0, p) + linear_moment_one_sign(s, i, 0.0, d, p);
  }
  return linear_moment_one_sign(s, i, c, d, p);
}

}  // namespace

PiecewiseProfile::PiecewiseProfile(std::vector<double> breakpoints, std::vector<Piece> pieces,
                                   bool symmetric, std::vector<JumpMarker> jumps)
    : breakpoints_(std::move(breakpoints)),
      pieces_(std::move(pieces)),
      symmetric_(symmetric),
      jumps_(std::move(jumps)) {
  if (pieces_.empty()) {
    if (!breakpoints_.empty() && breakpoints_.size() != 1) {
      throw Error(ErrorKind::InvalidArgument, "profile: breakpoints without pieces");
    }
    breakpoints_.clear();
    jumps_.clear();
    return;
  }
  if (breakpoints_.size() != pieces_.size() + 1) {
    throw Error(ErrorKind::InvalidArgument, "profile: need one more breakpoint than pieces");
  }
  for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
    if (!(breakpoints_[k + 1] > breakpoints_[k])) {
      throw Error(ErrorKind::InvalidArgument, "profile: breakpoints must be strictly ascending");
    }
  }
  if (symmetric_ && breakpoints_.front() < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "profile: symmetric profiles start at x >= 0");
  }
  double scale = 0.0;
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const double l = pieces_[k](breakpoints_[k]);
    const double r = pieces_[k](breakpoints_[k + 1]);
    scale = std::max({scale, std::abs(l), std::abs(r)});
    if (l < -kContinuityTol || r < -kContinuityTol) {
      throw Error(ErrorKind::InvalidArgument, "profile: negative values");
    }
  }
  for (const auto& j : jumps_) {
    const auto it = std::find_if(breakpoints_.begin(), breakpoints_.end(),
                                 [&](double b) { return near(b, j.x, std::abs(b)); });
    if (it == breakpoints_.end()) {
      throw Error(ErrorKind::InvalidArgument, "profile: jump marker off any breakpoint");
    }
  }
  for (std::size_t k = 1; k + 1 < breakpoints_.size(); ++k) {
    const double x = breakpoints_[k];
    const double l = pieces_[k - 1](x);
    const double r = pieces_[k](x);
    if (const JumpMarker* j = jump_at(x)) {
      if (!near(j->left, l, scale) || !near(j->right, r, scale)) {
        throw Error(ErrorKind::InvalidArgument, "profile: jump traces disagree with pieces");
      }
    } else if (!near(l, r, scale)) {
      throw Error(ErrorKind::InvalidArgument, "profile: discontinuity without jump marker");
    }
  }
}

PiecewiseProfile PiecewiseProfile::zero() { return PiecewiseProfile({}, {}, true); }

const JumpMarker* PiecewiseProfile::jump_at(double x) const {
  for (const auto& j : jumps_) {
    if (near(j.x, x, std::abs(x))) return &j;
  }
  return nullptr;
}

double PiecewiseProfile::eval_half(double x) const {
  if (pieces_.empty()) return 0.0;
  const double first = breakpoints_.front();
  const double last = breakpoints_.back();
  if (x < first || x > last) return 0.0;
  if (x == last) {
    if (const JumpMarker* j = jump_at(x)) return 0.5 * (j->left + j->right);
    return 0.5 * pieces_.back()(x);
  }
  if (x == first) {
    if (symmetric_ && first == 0.0) return pieces_.front()(x);
    if (const JumpMarker* j = jump_at(x)) return 0.5 * (j->left + j->right);
    return 0.5 * pieces_.front()(x);
  }
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto k = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  if (x == breakpoints_[k] && k > 0) {
    if (const JumpMarker* j = jump_at(x)) return 0.5 * (j->left + j->right);
  }
  return std::max(0.0, pieces_[k](x));
}

double PiecewiseProfile::operator()(double x) const {
  return eval_half(symmetric_ ? std::abs(x) : x);
}

double PiecewiseProfile::integral_half(double a, double b, int power) const {
  double total = 0.0;
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const double c = std::max(a, breakpoints_[k]);
    const double d = std::min(b, breakpoints_[k + 1]);
    if (d > c) total += linear_moment(pieces_[k].slope(), pieces_[k].intercept(), c, d, power);
  }
  return total;
}

double PiecewiseProfile::integral(double a, double b, int power) const {
  if (!(b > a) || pieces_.empty()) return 0.0;
  if (!symmetric_) return integral_half(a, b, power);
  if (a >= 0.0) return integral_half(a, b, power);
  if (b <= 0.0) return integral_half(-b, -a, power);
  return integral_half(0.0, -a, power) + integral_half(0.0, b, power);
}

double PiecewiseProfile::support_begin() const {
  if (pieces_.empty()) return 0.0;
  return symmetric_ ? -breakpoints_.back() : breakpoints_.front();
}

double PiecewiseProfile::support_end() const {
  return pieces_.empty() ? 0.0 : breakpoints_.back();
}

double PiecewiseProfile::max_value() const {
  double best = 0.0;
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    best = std::max({best, pieces_[k](breakpoints_[k]), pieces_[k](breakpoints_[k + 1])});
  }
  return best;
}

PiecewiseProfile PiecewiseProfile::split(std::size_t index, double x) const {
  if (index >= pieces_.size() || !(x > breakpoints_[index]) || !(x < breakpoints_[index + 1])) {
    throw Error(ErrorKind::InvalidArgument, "split: point not interior to the piece");
  }
  auto bps = breakpoints_;
  auto pcs = pieces_;
  bps.insert(bps.begin() + static_cast<std::ptrdiff_t>(index) + 1, x);
  pcs.insert(pcs.begin() + static_cast<std::ptrdiff_t>(index) + 1, pieces_[index]);
  return PiecewiseProfile(std::move(bps), std::move(pcs), symmetric_, jumps_);
}

double profile_mass(const PiecewiseProfile& profile, const Params& params) {
  if (profile.empty()) return 0.0;
  if (params.dim() == 1) {
    const double lo = profile.symmetric() ? -profile.support_end() : profile.support_begin();
    return profile.integral(lo, profile.support_end(), 0);
  }
  if (!profile.symmetric()) {
    throw Error(ErrorKind::InvalidArgument, "profile_mass: radial mass needs a symmetric profile");
  }
  return unit_sphere_measure(params.dim()) *
         profile.integral(0.0, profile.support_end(), params.dim() - 1);
}

// ---------------------------------------------------------------------------

GridField::GridField(double x_min_, double h_, Eigen::VectorXd values_, Geometry geometry_)
    : x_min(x_min_), h(h_), values(std::move(values_)), geometry(geometry_) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid field: h must be positive");
  if (geometry.radial_shells() && x_min != 0.0) {
    throw Error(ErrorKind::InvalidArgument, "grid field: radial shells start at r = 0");
  }
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
      throw Error(ErrorKind::InvalidArgument, "grid field: values must be finite and nonnegative");
    }
  }
}

double GridField::cell_measure(Eigen::Index i) const {
  if (!geometry.radial_shells()) return h;
  const double a = face(i);
  const double b = face(i + 1);
  const int n = geometry.dim;
  return (std::pow(b, n) - std::pow(a, n)) / n;
}

bool GridField::same_grid(const GridField& other) const {
  return size() == other.size() && geometry == other.geometry &&
         std::abs(h - other.h) <= 1e-14 * h && std::abs(x_min - other.x_min) <= 1e-14 * std::max(1.0, std::abs(x_min));
}

GridField sample_cell_averages(const PiecewiseProfile& profile, double x_min, double x_max,
                               Eigen::Index cells, Geometry geometry) {
  if (cells <= 0 || !(x_max > x_min)) {
    throw Error(ErrorKind::InvalidArgument, "sample_cell_averages: empty grid");
  }
  const double h = (x_max - x_min) / static_cast<double>(cells);
  Eigen::VectorXd values(cells);
  const int power = geometry.radial_shells() ? geometry.dim - 1 : 0;
  for (Eigen::Index i = 0; i < cells; ++i) {
    const double a = x_min + static_cast<double>(i) * h;
    const double b = a + h;
    const double measure =
        power == 0 ? h : (std::pow(b, power + 1) - std::pow(a, power + 1)) / (power + 1);
    values[i] = std::max(0.0, profile.integral(a, b, power) / measure);
  }
  return GridField(x_min, h, std::move(values), geometry);
}

}  // namespace fld
