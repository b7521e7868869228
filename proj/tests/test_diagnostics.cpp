#include <cmath>

#include "doctest.h"
#include "fld/diagnostics.hpp"
#include "fld/exact.hpp"
#include "fld/fvm.hpp"

using namespace fld;

namespace {

double total_variation(const GridField& f) {
  double tv = f.values[0] + f.values[f.size() - 1];
  for (Eigen::Index i = 1; i < f.size(); ++i) tv += std::abs(f.values[i] - f.values[i - 1]);
  return tv;
}

SchemeConfig implicit_scheme(Boundary b = Boundary::NeumannZeroFlux) {
  SchemeConfig s;
  s.stepper = Stepper::ImplicitEuler;
  s.boundary = b;
  return s;
}

std::vector<double> uniform_times(double dt, int count) {
  std::vector<double> ts;
  for (int k = 1; k <= count; ++k) ts.push_back(dt * k);
  return ts;
}

// Least-squares slope through (t_k, x(t_k)), written out independently.
double ls_slope(const std::vector<double>& t, const std::function<double(double)>& x) {
  double st = 0, sx = 0, stt = 0, stx = 0;
  const double n = static_cast<double>(t.size());
  for (double tk : t) {
    st += tk;
    sx += x(tk);
    stt += tk * tk;
    stx += tk * x(tk);
  }
  return (n * stx - st * sx) / (n * stt - st * st);
}

}  // namespace

TEST_CASE("mass: line and radial") {
  const Params p(2.0, 1);
  CHECK(mass(GridField(0.0, 0.1, Eigen::VectorXd::Zero(10)), p) == 0.0);

  const double h = 1.0 / 1024;
  const GridField ex = sample_cell_averages(example82_datum(), -10.0, 10.0, 20480);
  CHECK(std::abs(mass(ex, p) - 14.0) <= 2.0 * h * total_variation(ex));
  CHECK(mass(ex, p) == doctest::Approx(14.0).epsilon(1e-13));  // exact averages

  const GridField ss = sample_cell_averages(self_similar_profile(SelfSimilarSpec{}, p, 1.0), -4.0, 4.0, 4096);
  CHECK(mass(ss, p) == doctest::Approx(2.0).epsilon(1e-13));

  // Shells: a unit ball of height 1 in N = 3 has mass 4 pi / 3.
  const Params p3(2.0, 3);
  const GridField ball = sample_cell_averages([](double r) { return r < 1.0 ? 1.0 : 0.0; }, 0.0, 2.0, 64,
                                              Geometry::radial(3));
  CHECK(mass(ball, p3) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-13));
}

TEST_CASE("mass matches profile_mass within h TV on exact-family samples (property)") {
  const Params p(2.0, 1);
  const SelfSimilarSpec ss;
  const Example82Solution ex = example82_solve();
  for (int cells : {512, 1000, 2048, 3001}) {
    for (double t : {0.0, 0.3, 1.0, 2.5}) {
      // Pointwise Gauss sampling, so cells cut by a jump carry an O(h jump) error.
      const GridField a =
          sample_cell_averages([&](double x) { return self_similar_eval(ss, p, t, x); }, -4.0, 4.0, cells);
      CHECK(std::abs(mass(a, p) - profile_mass(self_similar_profile(ss, p, t), p)) <= a.h * total_variation(a));
      const GridField b =
          sample_cell_averages([&](double x) { return example82_eval(ex, t, x); }, -12.0, 12.0, cells);
      CHECK(std::abs(mass(b, p) - 14.0) <= b.h * total_variation(b));
    }
  }
}

TEST_CASE("support_radius") {
  const Params p(2.0, 1);
  const double h = 1.0 / 512;
  CHECK(support_radius(GridField(0.0, h, Eigen::VectorXd::Zero(10)), 1e-8) == 0.0);
  const GridField ss = sample_cell_averages(self_similar_profile(SelfSimilarSpec{}, p, 1.0), -4.0, 4.0, 4096);
  CHECK(std::abs(support_radius(ss, 1e-8) - 2.0) <= h);
  CHECK(support_radius(ss, 10.0) == 0.0);
  CHECK(std::abs(support_radius(ss, 1e-8, 1.0) - 3.0) <= h);
}

TEST_CASE("waiting_time_estimate: trivial cases") {
  const Params p(2.0, 1);
  Trajectory<GridField> zero;
  zero.push(0.0, GridField(0.0, 0.1, Eigen::VectorXd::Zero(8)));
  zero.push(1.0, GridField(0.0, 0.1, Eigen::VectorXd::Zero(8)));
  CHECK(std::isinf(waiting_time_estimate(zero, 0.0, 0.1)));

  Trajectory<GridField> one;
  one.push(0.0, zero.states[0]);
  CHECK_THROWS_AS(waiting_time_estimate(one, 0.0, 0.1), Error);

  // The self-similar support moves at once.
  const auto tr = run_scenario(self_similar_profile(SelfSimilarSpec{}, p, 0.0), -4.0, 4.0, 1024, p,
                               FluxConfig::smoothed_sign(4e-3), implicit_scheme(Boundary::FreeLargeDomain), 0.5,
                               uniform_times(0.05, 9));
  CHECK(waiting_time_estimate(tr, std::sqrt(2.0), 5.0 / 128) == doctest::Approx(0.05));
}

TEST_CASE("waiting_time_estimate: plateau datum with a waiting front") {
  // Edge at R = 2, exact onset tau* = 1/2.
  const Params p(2.0, 1);
  const WaitingTimeSpec spec{0.0, 1.0, 1.0, 2.0, 1.0};
  const double tau = wt_construct(spec, p).tau_star();
  REQUIRE(tau == doctest::Approx(0.5).epsilon(1e-12));
  const double h = 1.0 / 512;
  const auto tr = run_scenario(waiting_time_datum(spec, p), -3.0, 3.0, 3072, p, FluxConfig::smoothed_sign(1e-3),
                               implicit_scheme(Boundary::FreeLargeDomain), 0.8, uniform_times(0.01, 79));
  const double est = waiting_time_estimate(tr, 2.0, 5.0 * h);
  CHECK(est >= 0.9 * tau);
  CHECK(est <= 1.1 * tau + 5.0 * h);
}

TEST_CASE("hole_displacement and hole_filling_time") {
  SUBCASE("exact V profile has zero displacement") {
    const GridField v = sample_cell_averages([](double x) { return std::min(1.0, std::abs(x)); }, -2.0, 2.0, 512);
    CHECK(hole_displacement(v, 0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }
  SUBCASE("a V shifted inward reports the shift") {
    const double s = 0.05;
    const GridField v =
        sample_cell_averages([&](double x) { return std::min(1.0, std::max(0.0, x + s)); }, -1.0, 2.0, 600);
    CHECK(hole_displacement(v, 0.0) == doctest::Approx(s).epsilon(1e-9));
  }
  SUBCASE("flat field: the hole is closed") {
    CHECK(std::isinf(hole_displacement(GridField(-1.0, 0.1, Eigen::VectorXd::Constant(20, 1.0)), 0.0)));
  }
  SUBCASE("barrier sandwich: u0 = min(1, |x|) fills at 1/2") {
    // L = ell = 1, so tau_low = tau_up = 1/(N(m-1)+1) = 1/2.
    const Params p(2.0, 1);
    const WaitingBounds wb = waiting_bounds(1.0, 1.0, p);
    REQUIRE(wb.tau_low == doctest::Approx(0.5));
    REQUIRE(wb.tau_up == doctest::Approx(0.5));
    const double h = 1.0 / 512;
    const GridField u0 = sample_cell_averages([](double x) { return std::min(1.0, std::abs(x)); }, -2.0, 2.0, 2048);
    const auto tr = run_scenario(u0, p, FluxConfig::smoothed_sign(1e-3), implicit_scheme(), 0.7,
                                 uniform_times(0.01, 69));
    const double band = 0.1;
    const double est = hole_filling_time(tr, 0.0, 5.0 * h);
    CHECK(est >= wb.tau_low * (1.0 - band));
    CHECK(est <= wb.tau_up * (1.0 + band) + 5.0 * h);
  }
}

TEST_CASE("shock_track: smooth field has no shock") {
  Trajectory<GridField> tr;
  for (int k = 0; k < 5; ++k) {
    tr.push(0.1 * k, sample_cell_averages([](double x) { return 1.0 + 0.5 * std::sin(x); }, -3.0, 3.0, 256));
  }
  try {
    shock_track(tr, 50.0, 2.0);
    FAIL("expected NoShockFound");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoShockFound);
  }
}

TEST_CASE("shock_track: records on exact moving steps") {
  // u = 2 behind x = 0.3 + 2t; a window of 3 or more samples is required.
  Trajectory<GridField> tr;
  for (int k = 0; k < 6; ++k) {
    const double t = 0.05 * k;
    tr.push(t, sample_cell_averages([&](double x) { return x < 0.3 + 2.0 * t ? 2.0 : 0.5; }, -1.0, 2.0, 768));
  }
  const auto recs = shock_track(tr, 50.0, 2.0);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].speed == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(recs[0].left_traces.front() == 2.0);
  CHECK(recs[0].right_traces.front() == 0.5);
  CHECK_THROWS_AS(shock_track(tr, 50.0, 2.0, 0.0, 0.06), Error);  // two samples only
}

TEST_CASE("shock_track: Riemann 2 -> 0, speed converges under refinement") {
  // Oracle: with a drained plateau on [-L, x_s], x_s(t) = sqrt(L^2 + 4 L t) - L
  // (RH speed D, mass 2L); its least-squares slope over the output times is
  // the reference, and it tends to 2 as L grows.
  const double L = 16.0;
  const auto ts = uniform_times(0.025, 10);
  const double ref = ls_slope(ts, [&](double t) { return std::sqrt(L * L + 4.0 * L * t) - L; });
  CHECK(ref == doctest::Approx(2.0).epsilon(0.05));
  double last_err = std::numeric_limits<double>::infinity();
  for (int per_unit : {64, 128, 256}) {
    const GridField u0 = sample_cell_averages([](double x) { return x <= 0.0 ? 2.0 : 0.0; }, -L, 2.0,
                                              static_cast<Eigen::Index>(18 * per_unit));
    const auto tr = run_scenario(u0, Params(2.0, 1), FluxConfig::smoothed_sign(0.064 / per_unit), implicit_scheme(),
                                 0.25, ts);
    const auto recs = shock_track(tr, 0.2 * per_unit, 2.0, 0.025);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].speed == doctest::Approx(2.0).epsilon(0.05));
    const double err = std::abs(recs[0].speed - ref);
    CHECK(err < last_err);
    last_err = err;
  }
}

TEST_CASE("shock_track: bulk shock of the jump example against the exact edge") {
  // Half line with a zero-flux wall at 0 (the symmetry condition). The fit
  // window stays inside the jump phase, which ends at t* ~ 1.66; the bulk jump
  // D - C is weak (0.33 down to 0.03), so the smeared front converges slowly.
  const Params p(2.0, 1);
  const Example82Solution ex = example82_solve();
  const auto ts = uniform_times(0.05, 30);
  double last_err = std::numeric_limits<double>::infinity();
  for (int per_unit : {256, 512}) {
    SchemeConfig s = implicit_scheme(Boundary::NeumannZeroFlux);
    const auto tr = run_scenario(example82_datum(), 0.0, 9.5, static_cast<Eigen::Index>(9.5 * per_unit), p,
                                 FluxConfig::smoothed_sign(0.256 / per_unit), s, 1.5, ts);
    const auto recs = shock_track(tr, 0.5, 2.0, 0.5, 1.5);
    REQUIRE(recs.size() == 1);
    const ShockRecord& rec = recs[0];
    CHECK(rec.times.size() == 21);
    // Reference: least-squares slope of the exact edge over the same samples.
    const double exact = ls_slope(rec.times, [&](double t) { return ex.r(t - 0.5); });
    const double err = std::abs(rec.speed / exact - 1.0);
    CHECK(err < last_err);
    last_err = err;
  }
  CHECK(last_err <= 0.05);
}

TEST_CASE("error_norms") {
  const Params p(2.0, 1);
  const SelfSimilarSpec ss;
  auto oracle = [&](double t, double x) { return self_similar_eval(ss, p, t, x); };

  SUBCASE("field sampled at the centers from the oracle") {
    GridField f(-4.0, 1.0 / 64, Eigen::VectorXd::Zero(512));
    for (Eigen::Index i = 0; i < f.size(); ++i) f.values[i] = oracle(1.0, f.center(i));
    const ErrorNorms e = error_norms(f, oracle, 1.0);
    CHECK(e.L1 == 0.0);
    CHECK(e.Linf == 0.0);
  }
  SUBCASE("oracle shifted by one cell") {
    const double h = 1.0 / 64;
    auto step = [](double, double x) { return x < 0.5 ? 3.0 : 1.0; };
    auto shifted = [&](double t, double x) { return step(t, x - h); };
    const GridField f = sample_cell_averages([&](double x) { return step(0.0, x); }, -1.0, 2.0, 192);
    const ErrorNorms e = error_norms(f, shifted, 0.0);
    CHECK(e.L1 == doctest::Approx(h * 2.0).epsilon(1e-12));
    CHECK(e.Linf == 2.0);
  }
  SUBCASE("refinement does not increase L1") {
    double last = std::numeric_limits<double>::infinity();
    for (int cells : {256, 512, 1024, 2048}) {
      const GridField f = sample_cell_averages(self_similar_profile(ss, p, 1.0), -4.0, 4.0, cells);
      const double l1 = error_norms(f, oracle, 1.0).L1;
      CHECK(l1 <= last);
      last = l1;
    }
  }
  SUBCASE("shells weight by the shell volume") {
    const Params p3(2.0, 3);
    const GridField z(0.0, 0.01, Eigen::VectorXd::Zero(100), Geometry::radial(3));
    const ErrorNorms e = error_norms(z, [](double, double) { return 1.0; }, 0.0);
    CHECK(e.L1 == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-13));
  }
}

TEST_CASE("convergence_order") {
  CHECK(convergence_order({0.1, 0.05}, {1e-2, 5e-3}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(convergence_order({0.3, 0.3, 0.3}, {0.1, 0.05, 0.025}) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(convergence_order({0.1, 0.071}, {0.1, 0.05}) == doctest::Approx(std::log2(0.1 / 0.071)).epsilon(1e-14));
  CHECK(convergence_order({0.1, 0.071}, {0.1, 0.05}) == doctest::Approx(0.494).epsilon(1e-3));
  // Three levels on an exact power law.
  CHECK(convergence_order({4.0, 1.0, 0.25}, {0.4, 0.2, 0.1}) == doctest::Approx(2.0).epsilon(1e-14));

  auto degenerate = [](std::vector<double> e, std::vector<double> h) {
    try {
      convergence_order(e, h);
    } catch (const Error& err) {
      return err.kind() == ErrorKind::DegenerateInput;
    }
    return false;
  };
  CHECK(degenerate({0.1}, {0.1}));
  CHECK(degenerate({0.1, 0.05}, {0.1}));
  CHECK(degenerate({0.1, 0.05}, {0.05, 0.1}));
  CHECK(degenerate({0.1, 0.05}, {0.1, 0.1}));
  CHECK(degenerate({0.1, 0.0}, {0.1, 0.05}));
}
