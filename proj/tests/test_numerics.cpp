#include <cmath>

#include "doctest.h"
#include "fld/numerics.hpp"

using namespace fld;

namespace {
// r' = 1/r, r(0) = sqrt(2): r(t) = sqrt(2 + 2t)
OdeProblem sqrt_problem() {
  OdeProblem p;
  p.t0 = 0.0;
  p.y0 = OdeState::Constant(1, std::sqrt(2.0));
  p.rhs = [](double, const OdeState& y) { return OdeState::Constant(1, 1.0 / y[0]); };
  return p;
}
}  // namespace

TEST_CASE("ode: closed-form square root") {
  OdeResult r = ode_solve(sqrt_problem(), 1.0, {});
  CHECK(std::abs(r.y_final[0] - 2.0) < 1e-9);
  for (double t : {0.1, 0.37, 0.5, 0.93}) {
    CHECK(std::abs(r.solution(t)[0] - std::sqrt(2.0 + 2.0 * t)) < 1e-9);
    CHECK(std::abs(r.solution.derivative(t)[0] - 1.0 / std::sqrt(2.0 + 2.0 * t)) < 1e-7);
  }
}

TEST_CASE("ode: zero right-hand side") {
  OdeProblem p;
  p.y0 = OdeState::Constant(2, 3.5);
  p.rhs = [](double, const OdeState& y) { return OdeState::Zero(y.size()); };
  OdeResult r = ode_solve(p, 10.0, {});
  CHECK(r.y_final == p.y0);
}

TEST_CASE("ode: terminal event") {
  OdeProblem p = sqrt_problem();
  p.events.push_back({"hit2", [](double, const OdeState& y) { return y[0] - 2.0; }, true, 0});
  OdeResult r = ode_solve(p, 5.0, {1e-12, 1e-14, 1'000'000});
  REQUIRE(r.terminated);
  REQUIRE(r.events.size() == 1);
  CHECK(std::abs(r.events[0].t - 1.0) < 1e-9);
  CHECK(r.t_final == r.events[0].t);
  CHECK(r.solution.t_end() == r.events[0].t);
  CHECK(r.solution(r.solution.t_end())[0] == doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("ode: direction filter skips the wrong crossing") {
  OdeProblem p = sqrt_problem();
  p.events.push_back({"down", [](double, const OdeState& y) { return y[0] - 2.0; }, true, -1});
  OdeResult r = ode_solve(p, 2.0, {});
  CHECK_FALSE(r.terminated);
  CHECK(r.events.empty());
}

TEST_CASE("ode: self-similar radius law r' = r^{(1-m)N}") {
  struct Case { double m; int n; };
  for (Case c : {Case{2.0, 1}, Case{2.0, 2}, Case{3.0, 1}}) {
    const double alpha = 1.0 / (c.n * (c.m - 1.0) + 1.0);
    const double t0 = 1.0;
    auto exact = [&](double t) { return std::pow((t0 + t) / alpha, alpha); };
    OdeProblem p;
    p.y0 = OdeState::Constant(1, exact(0.0));
    p.rhs = [&](double, const OdeState& y) { return OdeState::Constant(1, std::pow(y[0], (1.0 - c.m) * c.n)); };
    Tolerances tol{1e-10, 1e-12, 1'000'000};
    OdeResult r = ode_solve(p, 5.0, tol);
    CHECK(std::abs(r.y_final[0] - exact(5.0)) <= 10.0 * tol.rel_tol * exact(5.0));

    // halving tolerances does not increase the error
    double prev = std::abs(r.y_final[0] - exact(5.0));
    Tolerances t2 = tol;
    for (int k = 0; k < 3; ++k) {
      t2 = t2.halved();
      const double err = std::abs(ode_solve(p, 5.0, t2).y_final[0] - exact(5.0));
      CHECK(err <= prev * (1.0 + 1e-6) + 1e-15);
      prev = err;
    }
  }
}

TEST_CASE("ode: step failure at a blow-up") {
  OdeProblem p;
  p.y0 = OdeState::Constant(1, 1.0);
  p.rhs = [](double, const OdeState& y) { return OdeState::Constant(1, y[0] * y[0]); };  // blows up at t=1
  try {
    ode_solve(p, 2.0, {});
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::StepFailure || e.kind() == ErrorKind::MaxSteps));
  }
}

TEST_CASE("ode: max steps") {
  Tolerances tol{1e-10, 1e-12, 5};
  CHECK_THROWS_WITH_AS(ode_solve(sqrt_problem(), 100.0, tol), doctest::Contains(""), Error);
}

TEST_CASE("find_root") {
  Tolerances tol{1e-14, 1e-14, 200};
  CHECK(std::abs(find_root([](double x) { return x * x - 2.0; }, 1.0, 2.0, tol) - std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(find_root([](double x) { return x; }, -1.0, 1.0, tol)) < 1e-12);
  try {
    find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, tol);
    FAIL("expected NoBracket");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoBracket);
  }
}

TEST_CASE("integrate") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
}
