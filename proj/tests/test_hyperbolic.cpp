#include <cmath>
#include <random>

#include "doctest.h"
#include "fld/hyperbolic.hpp"

using namespace fld;

TEST_CASE("jump and characteristic speeds") {
  CHECK(rh_speed(2.0, 0.0, 2.0) == 2.0);
  CHECK(rh_speed(0.7, 0.7, 2.0) == doctest::Approx(1.4).epsilon(1e-15));
  CHECK(rh_speed(4.0 / 3.0, 1.0, 2.0) == doctest::Approx(7.0 / 3.0).epsilon(1e-15));
  CHECK(rh_speed(JumpState{2.0, 0.0, 1}, 2.0) == 2.0);
  CHECK(char_speed(1.0, 2.0) == 2.0);
  CHECK(char_speed(0.0, 2.0) == 0.0);
  CHECK(char_speed(2.0, 3.0) == 12.0);
}

TEST_CASE("jump speed: symmetry, continuity, Lax bracketing") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (double m : {1.5, 2.0, 3.0}) {
    for (int k = 0; k < 100; ++k) {
      const double a = u(rng);
      const double b = u(rng);
      CHECK(rh_speed(a, b, m) == doctest::Approx(rh_speed(b, a, m)).epsilon(1e-14));
      if (std::abs(a - b) > 1e-3) {
        const double lo = std::min(char_speed(a, m), char_speed(b, m));
        const double hi = std::max(char_speed(a, m), char_speed(b, m));
        CHECK(rh_speed(a, b, m) > lo);
        CHECK(rh_speed(a, b, m) < hi);
      }
      CHECK(std::abs(rh_speed(a, a + 1e-6, m) - char_speed(a, m)) < 1e-5 * m * m);
      CHECK(std::abs(rh_speed(a + 0.5, a + 0.5 + 1e-6, m) - rh_speed(a + 0.5, a + 0.5, m)) < 1e-5 * m * m);
    }
  }
  // within 1e-8 of the limit for a gap of 1e-6 at unit scale
  CHECK(std::abs(rh_speed(1.0, 1.0 + 1e-6, 2.0) - 2.0) < 1e-5);
  CHECK(std::abs(rh_speed(1.0, 1.0 + 1e-6, 2.0) - (2.0 + 1e-6)) < 1e-8);
}

TEST_CASE("admissibility") {
  // front of the expanding plateau: u- = r^{-N}, u+ = 0, speed r^{(1-m)N}
  for (double r : {1.0, 1.7, 3.2}) {
    for (double m : {2.0, 3.0}) {
      const int n = 2;
      CHECK(jump_admissible({std::pow(r, -n), 0.0, 1}, std::pow(r, (1.0 - m) * n), m, 1e-12));
    }
  }
  // expansion shock for Burgers
  CHECK_FALSE(jump_admissible({0.0, 2.0, 1}, 2.0, 2.0, 1e-12, JumpContext::ConservationLaw, 1));
  // the same upward jump is fine for the full equation
  CHECK(jump_admissible({0.0, 2.0, 1}, 2.0, 2.0, 1e-12, JumpContext::FullEquation));
  CHECK(jump_admissible({2.0, 0.0, 1}, 2.0, 2.0, 1e-12, JumpContext::ConservationLaw, 1));
  CHECK(jump_admissible({1.3, 1.3, 1}, char_speed(1.3, 2.0), 2.0, 1e-12, JumpContext::ConservationLaw, 1));
  CHECK_FALSE(jump_admissible({2.0, 0.0, 1}, 2.5, 2.0, 1e-12));
  // flux -u^2 reverses both the speed and the admissible direction
  CHECK(jump_admissible({0.0, 2.0, 1}, -2.0, 2.0, 1e-12, JumpContext::ConservationLaw, -1));
}

TEST_CASE("linear pieces under u_t + (u^2)_x = 0") {
  AdvectedLine a = advect_linear_piece(-1.0, 3.0, 0.25, 1);
  CHECK(a.slope == doctest::Approx(-1.0 / 0.5));
  CHECK(a.intercept == doctest::Approx(3.0 / 0.5));
  CHECK(a.horizon == 0.5);
  AdvectedLine b = advect_linear_piece(-1.0 / 7.0, 9.0 / 7.0, 1.0, 1);
  CHECK(b.horizon == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(b.slope * 4.0 + b.intercept == doctest::Approx((9.0 - 4.0) / 5.0).epsilon(1e-15));
  AdvectedLine c = advect_linear_piece(0.4, -0.1, 0.0, 1);
  CHECK(c.slope == 0.4);
  CHECK(c.intercept == -0.1);
  CHECK(std::isinf(c.horizon));

  // semigroup
  for (double s1 : {0.05, 0.1}) {
    for (double s2 : {0.1, 0.2}) {
      const AdvectedLine one = advect_linear_piece(-1.0, 3.0, s1, 1);
      const AdvectedLine two = advect_linear_piece(one.slope, one.intercept, s2, 1);
      const AdvectedLine direct = advect_linear_piece(-1.0, 3.0, s1 + s2, 1);
      CHECK(two.slope == doctest::Approx(direct.slope).epsilon(1e-15));
      CHECK(two.intercept == doctest::Approx(direct.intercept).epsilon(1e-15));
    }
  }
  // the evolved line solves the equation: u_t + 2 u u_x = 0 by finite differences
  const double t = 0.2;
  const double x = 1.3;
  auto u = [](double tt, double xx) {
    const AdvectedLine l = advect_linear_piece(-1.0, 3.0, tt, 1);
    return l.slope * xx + l.intercept;
  };
  const double e = 1e-6;
  const double ut = (u(t + e, x) - u(t - e, x)) / (2 * e);
  const double ux = (u(t, x + e) - u(t, x - e)) / (2 * e);
  CHECK(std::abs(ut + 2.0 * u(t, x) * ux) < 1e-7);

  try {
    advect_linear_piece(-1.0, 3.0, 0.1, 1, 3.0);
    FAIL("expected Unsupported");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::Unsupported);
  }
  CHECK_THROWS_AS(advect_linear_piece(-1.0, 3.0, 0.5, 1), Error);
}

namespace {
// A jump between a (x < x0) and b (x > x0), as cell values on [0, 1].
GridField step(double a, double b, int cells, int jump_cell) {
  Eigen::VectorXd v(cells);
  for (int i = 0; i < cells; ++i) v[i] = i < jump_cell ? a : b;
  return GridField(0.0, 1.0 / cells, v);
}
}  // namespace

TEST_CASE("discrete entropy residual") {
  const int n = 64;
  const double h = 1.0 / n;
  const double dt = h / 2.0;  // speed 2 moves the jump one cell

  const GridField c = step(0.8, 0.8, n, 10);
  CHECK(kruzhkov_residual(c, c, dt, 0.3, 2.0, 1).cwiseAbs().maxCoeff() == 0.0);

  // admissible 2 -> 0 moving right by one cell
  const Eigen::VectorXd adm = kruzhkov_residual(step(2, 0, n, 20), step(2, 0, n, 21), dt, 1.0, 2.0, 1);
  CHECK(adm.maxCoeff() <= 1e-10);
  // brute force: the only nonzero entry is the swept cell, (Q(0,0) - Q(2,0)) / h = (1 - 3)/h
  CHECK(adm[20] == doctest::Approx(-2.0 / h));

  // expansion shock 0 -> 2 held together and moved at speed 2
  const Eigen::VectorXd bad = kruzhkov_residual(step(0, 2, n, 20), step(0, 2, n, 21), dt, 1.0, 2.0, 1);
  CHECK(bad[20] == doctest::Approx(2.0 / h));
  CHECK(bad.maxCoeff() > 0.0);

  try {
    kruzhkov_residual(step(1, 1, n, 0), step(1, 1, n + 1, 0), dt, 1.0, 2.0, 1);
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GridMismatch);
  }
}
