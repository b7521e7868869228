#ifndef FLD_MODEL_HPP
#define FLD_MODEL_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fld {

enum class ErrorKind {
  InvalidArgument,
  StepFailure,
  MaxSteps,
  NoBracket,
  DomainError,
  ConsistencyFailure,
  EventNotFound,
  OrderViolation,
  TimeBeyondBlowup,
  Unsupported,
  UnsupportedProfile,
  InvariantViolation,
  GridMismatch,
  CflViolation,
  NewtonDivergence,
  NoShockFound,
  DegenerateInput,
  ConfigError,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Nonlinearity exponent m and spatial dimension N with the derived
/// constants alpha = 1/(N(m-1)+1) and p = (N(m-1)+1)/m.
class Params {
 public:
  Params(double m, int dim);

  double m() const noexcept { return m_; }
  int dim() const noexcept { return dim_; }
  double alpha() const noexcept { return alpha_; }
  double p() const noexcept { return p_; }

 private:
  double m_;
  int dim_;
  double alpha_;
  double p_;
};

/// Surface measure of the unit sphere in R^N (2 for N = 1, 2*pi for N = 2, ...).
double unit_sphere_measure(int dim);

// ---------------------------------------------------------------------------
// Piecewise profiles

struct Piece {
  enum class Kind { Constant, Linear };

  Kind kind = Kind::Constant;
  double a = 0.0;  // height (Constant) or slope (Linear)
  double b = 0.0;  // intercept (Linear only)

  static Piece constant(double height) { return {Kind::Constant, height, 0.0}; }
  static Piece linear(double slope, double intercept) { return {Kind::Linear, slope, intercept}; }

  double operator()(double x) const { return kind == Kind::Constant ? a : a * x + b; }
  double slope() const { return kind == Kind::Constant ? 0.0 : a; }
  double intercept() const { return kind == Kind::Constant ? a : b; }
};

struct JumpMarker {
  double x = 0.0;
  double left = 0.0;
  double right = 0.0;
};

/// Compactly supported profile made of constant and linear pieces between
/// ascending breakpoints. With `symmetric` set, the pieces describe x >= 0
/// and the profile is mirrored onto x < 0 (or read as a radial profile when
/// the dimension is larger than one).
class PiecewiseProfile {
 public:
  PiecewiseProfile() = default;
  PiecewiseProfile(std::vector<double> breakpoints, std::vector<Piece> pieces, bool symmetric,
                   std::vector<JumpMarker> jumps = {});

  static PiecewiseProfile zero();

  /// Pointwise value; the mean of the traces at a jump.
  double operator()(double x) const;

  /// Exact integral of u(x) |x|^power over [a, b].
  double integral(double a, double b, int power = 0) const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const std::vector<JumpMarker>& jumps() const { return jumps_; }
  bool symmetric() const { return symmetric_; }
  bool empty() const { return pieces_.empty(); }

  double support_begin() const;
  double support_end() const;
  double max_value() const;

  /// Splits piece `index` at an interior point; the represented function is unchanged.
  PiecewiseProfile split(std::size_t index, double x) const;

 private:
  double eval_half(double x) const;
  double integral_half(double a, double b, int power) const;
  const JumpMarker* jump_at(double x) const;

  std::vector<double> breakpoints_;
  std::vector<Piece> pieces_;
  bool symmetric_ = false;
  std::vector<JumpMarker> jumps_;
};

/// Exact mass of a profile: line integral for N = 1, radial integral with the
/// unit-sphere measure for N > 1 (which requires a symmetric profile).
double profile_mass(const PiecewiseProfile& profile, const Params& params);

// ---------------------------------------------------------------------------
// Grid fields

struct Geometry {
  enum class Kind { Line, RadialShells };
  Kind kind = Kind::Line;
  int dim = 1;

  static Geometry line() { return {Kind::Line, 1}; }
  static Geometry radial(int n) { return {Kind::RadialShells, n}; }
  bool radial_shells() const { return kind == Kind::RadialShells; }
  bool operator==(const Geometry&) const = default;
};

/// Uniform-grid cell averages. For radial shells x_min is 0 and cell i
/// covers [i h, (i+1) h].
struct GridField {
  double x_min = 0.0;
  double h = 1.0;
  Eigen::VectorXd values;
  Geometry geometry;

  GridField() = default;
  GridField(double x_min, double h, Eigen::VectorXd values, Geometry geometry = Geometry::line());

  Eigen::Index size() const { return values.size(); }
  double center(Eigen::Index i) const { return x_min + (static_cast<double>(i) + 0.5) * h; }
  double face(Eigen::Index i) const { return x_min + static_cast<double>(i) * h; }
  double x_max() const { return face(size()); }
  /// Length (Line) or shell volume without the sphere measure (RadialShells).
  double cell_measure(Eigen::Index i) const;
  bool same_grid(const GridField& other) const;
};

/// Exact cell averages of a piecewise profile (volume-weighted for shells).
GridField sample_cell_averages(const PiecewiseProfile& profile, double x_min, double x_max,
                               Eigen::Index cells, Geometry geometry = Geometry::line());

/// Cell averages of an arbitrary function by 4-point Gauss-Legendre per cell.
template <typename Function>
GridField sample_cell_averages(const Function& f, double x_min, double x_max, Eigen::Index cells,
                               Geometry geometry = Geometry::line());

// ---------------------------------------------------------------------------
// Trajectories

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double support_radius = 0.0;
  std::vector<double> shock_positions;
  std::optional<double> plateau_height;
  double min_value = 0.0;
  double max_value = 0.0;
};

template <typename State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<DiagnosticsRecord> diagnostics;
  std::map<std::string, std::string> metadata;

  void push(double t, State state) {
    if (!times.empty() && !(t > times.back())) {
      throw Error(ErrorKind::InvalidArgument, "trajectory times must be strictly increasing");
    }
    times.push_back(t);
    states.push_back(std::move(state));
  }
  std::size_t size() const { return times.size(); }
};

// ---------------------------------------------------------------------------

namespace detail {
inline constexpr double kGauss4Nodes[4] = {-0.8611363115940526, -0.3399810435848563,
                                           0.3399810435848563, 0.8611363115940526};
inline constexpr double kGauss4Weights[4] = {0.3478548451374538, 0.6521451548625461,
                                             0.6521451548625461, 0.3478548451374538};
}  // namespace detail

template <typename Function>
GridField sample_cell_averages(const Function& f, double x_min, double x_max, Eigen::Index cells,
                               Geometry geometry) {
  if (cells <= 0 || !(x_max > x_min)) {
    throw Error(ErrorKind::InvalidArgument, "sample_cell_averages: empty grid");
  }
  const double h = (x_max - x_min) / static_cast<double>(cells);
  Eigen::VectorXd values(cells);
  const int power = geometry.radial_shells() ? geometry.dim - 1 : 0;
  for (Eigen::Index i = 0; i < cells; ++i) {
    const double a = x_min + static_cast<double>(i) * h;
    double num = 0.0;
    double den = 0.0;
    for (int q = 0; q < 4; ++q) {
      const double x = a + 0.5 * h * (1.0 + detail::kGauss4Nodes[q]);
      double w = detail::kGauss4Weights[q];
      for (int k = 0; k < power; ++k) w *= x;
      num += w * f(x);
      den += w;
    }
    values[i] = den > 0.0 ? num / den : f(a + 0.5 * h);
  }
  return GridField(x_min, h, std::move(values), geometry);
}

}  // namespace fld

#endif  // FLD_MODEL_HPP
