#include <cmath>
#include <random>

#include "doctest.h"
#include "fld/exact.hpp"
#include "fld/model.hpp"

using namespace fld;

TEST_CASE("params derived constants") {
  Params a(2.0, 1);
  CHECK(a.alpha() == 0.5);
  CHECK(a.p() == 1.0);
  Params b(2.0, 2);
  CHECK(b.alpha() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(b.p() == doctest::Approx(1.5).epsilon(1e-15));
  Params c(3.0, 4);
  CHECK(c.p() == doctest::Approx(1.0 / (c.m() * c.alpha())).epsilon(1e-15));
  CHECK_THROWS_AS(Params(1.0, 1), Error);
  CHECK_THROWS_AS(Params(2.0, 0), Error);
}

TEST_CASE("unit sphere measure") {
  CHECK(unit_sphere_measure(1) == 2.0);
  CHECK(unit_sphere_measure(2) == doctest::Approx(2.0 * M_PI));
  CHECK(unit_sphere_measure(3) == doctest::Approx(4.0 * M_PI));
  // 2 pi^{N/2} / Gamma(N/2)
  for (int n = 1; n <= 10; ++n) {
    CHECK(unit_sphere_measure(n) == doctest::Approx(2.0 * std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0)));
  }
}

TEST_CASE("profile evaluation on the bulk-jump datum") {
  const PiecewiseProfile u = example82_datum();
  CHECK(u(0.0) == 2.0);
  CHECK(u(-1.5) == doctest::Approx(1.5));
  CHECK(u(5.0) == doctest::Approx(4.0 / 7.0));
  CHECK(u(9.5) == 0.0);
  CHECK(u(-100.0) == 0.0);
}

TEST_CASE("profile mass") {
  const PiecewiseProfile u = example82_datum();
  Params p(2.0, 1);
  CHECK(profile_mass(u, p) == doctest::Approx(14.0).epsilon(1e-14));
  CHECK(u.integral(0.0, 9.0) == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(profile_mass(PiecewiseProfile::zero(), p) == 0.0);

  // radial: plateau 1 on the unit disc has mass pi
  PiecewiseProfile disc({0.0, 1.0}, {Piece::constant(1.0)}, true, {{1.0, 1.0, 0.0}});
  CHECK(profile_mass(disc, Params(2.0, 2)) == doctest::Approx(M_PI).epsilon(1e-14));
  // cone 1 - r on the unit ball in R^3: 4 pi (1/3 - 1/4)
  PiecewiseProfile cone({0.0, 1.0}, {Piece::linear(-1.0, 1.0)}, true);
  CHECK(profile_mass(cone, Params(2.0, 3)) == doctest::Approx(M_PI / 3.0).epsilon(1e-14));
}

TEST_CASE("mass is additive under splitting") {
  const PiecewiseProfile u = example82_datum();
  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    const std::size_t idx = rng() % u.pieces().size();
    const double a = u.breakpoints()[idx];
    const double b = u.breakpoints()[idx + 1];
    const double x = a + (b - a) * std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    const PiecewiseProfile v = u.split(idx, x);
    CHECK(v.pieces().size() == u.pieces().size() + 1);
    CHECK(profile_mass(v, Params(2.0, 1)) == doctest::Approx(14.0).epsilon(1e-14));
    CHECK(v(x) == doctest::Approx(u(x)).epsilon(1e-15));
  }
}

TEST_CASE("symmetric profiles are even") {
  const PiecewiseProfile u = example82_datum();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-12.0, 12.0);
  for (int k = 0; k < 100; ++k) {
    const double x = dist(rng);
    CHECK(u(x) == u(-x));
  }
}

TEST_CASE("jump value is the trace mean") {
  PiecewiseProfile u({0.0, 1.0, 2.0}, {Piece::constant(2.0), Piece::linear(-1.0, 2.0)}, true, {{1.0, 2.0, 1.0}});
  CHECK(u(1.0) == 1.5);
  CHECK(u(2.0) == 0.0);
}

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(PiecewiseProfile({0.0, 1.0, 1.0}, {Piece::constant(1.0), Piece::constant(1.0)}, true), Error);
  // discontinuity without marker
  CHECK_THROWS_AS(PiecewiseProfile({0.0, 1.0, 2.0}, {Piece::constant(2.0), Piece::linear(-1.0, 2.0)}, true), Error);
  // negative values
  CHECK_THROWS_AS(PiecewiseProfile({0.0, 2.0}, {Piece::linear(-1.0, 1.0)}, true), Error);
}

TEST_CASE("cell averages") {
  const PiecewiseProfile u = example82_datum();
  const GridField f = sample_cell_averages(u, -10.0, 10.0, 2000);
  CHECK(f.values.sum() * f.h == doctest::Approx(14.0).epsilon(1e-13));
  const GridField g = sample_cell_averages([&](double x) { return u(x); }, -10.0, 10.0, 2000);
  CHECK((f.values - g.values).cwiseAbs().maxCoeff() < 0.6);  // only jump-free here, cells at kinks differ
  CHECK((f.values - g.values).cwiseAbs().sum() * f.h < 1e-5);

  const GridField r = sample_cell_averages(PiecewiseProfile({0.0, 1.0}, {Piece::constant(1.0)}, true, {{1.0, 1.0, 0.0}}),
                                           0.0, 2.0, 64, Geometry::radial(2));
  double m = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) m += r.values[i] * r.cell_measure(i);
  CHECK(2.0 * M_PI * m == doctest::Approx(M_PI).epsilon(1e-13));

  CHECK_THROWS_AS(GridField(1.0, 0.1, Eigen::VectorXd::Ones(3), Geometry::radial(2)), Error);
  CHECK_THROWS_AS(GridField(0.0, 0.1, -Eigen::VectorXd::Ones(3)), Error);
}

TEST_CASE("trajectory times strictly increase") {
  Trajectory<double> tr;
  tr.push(0.0, 1.0);
  tr.push(0.5, 2.0);
  CHECK_THROWS_AS(tr.push(0.5, 3.0), Error);
  CHECK(tr.size() == 2);
}
