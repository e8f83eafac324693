#include <cmath>
#include <numbers>

#include <boost/math/special_functions/ellint_1.hpp>

#include "blowup/error.hpp"
#include "blowup/radial_solver.hpp"
#include "doctest.h"

using namespace blowup;

namespace {

// 1D, f = u^3: U'^2 = (U^4 - c^4)/2, so R(c) = K(1/sqrt 2) / c.
double cubic_1d_radius(double c) { return boost::math::ellint_1(1.0 / std::numbers::sqrt2) / c; }

// Exact 2D solution of Delta u = e^u blowing up on the unit circle.
double liouville(double r) { return std::log(8.0) - 2.0 * std::log1p(-r * r); }

const GrowthProfile& cubic() {
  static const GrowthProfile gp(Nonlinearity::power(3));
  return gp;
}

}  // namespace

TEST_CASE("shoot: one-dimensional cubic against the elliptic-integral radius") {
  for (double c : {1.0, 2.0, 5.0}) {
    const auto [sol, R] = shoot(cubic(), 1, c);
    CAPTURE(c);
    CHECK(R == doctest::Approx(cubic_1d_radius(c)).epsilon(1e-9));
  }
  const double c_star = boost::math::ellint_1(1.0 / std::numbers::sqrt2);
  const auto [sol, R] = shoot(cubic(), 1, c_star);
  CHECK(R == doctest::Approx(1.0).epsilon(1e-9));
  const double U = sol.U().back();
  const double ratio = sol.Uprime().back() / std::sqrt(2.0 * Nonlinearity::power(3).antiderivative(U));
  CHECK(ratio >= 0.99);
  CHECK(ratio <= 1.01);
}

TEST_CASE("shoot: blow-up radius decreases in the center value and follows power scaling") {
  const double R10 = shoot(cubic(), 2, 10.0).R;
  const double R20 = shoot(cubic(), 2, 20.0).R;
  CHECK(std::isfinite(R10));
  CHECK(R20 < R10);
  // U_c(r) = c V(c r) for f = u^3, hence R(c) = R(1) / c
  CHECK(R10 / R20 == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("shoot rejects center values at or below the positivity threshold") {
  CHECK_THROWS_AS(shoot(cubic(), 2, 0.5 * cubic().threshold()), DomainError);
  CHECK_THROWS_AS(shoot(cubic(), 2, -1.0), DomainError);
  const GrowthProfile osc(Nonlinearity::oscillatory_power(3));
  CHECK_THROWS_AS(shoot(osc, 2, 0.0), DomainError);
  CHECK_THROWS_AS(shoot(cubic(), 0, 1.0), DomainError);
}

TEST_CASE("unit ball: exponential nonlinearity in two dimensions matches the Liouville solution") {
  const GrowthProfile gp(Nonlinearity::exponential(1.0));
  const auto sol = solve_unit_ball(gp, 2);
  CHECK(sol.center_value() == doctest::Approx(std::log(8.0)).epsilon(1e-8));
  for (double r : {0.0, 0.3, 0.9, 0.999, 0.99999}) {
    CAPTURE(r);
    CHECK(sol.value(r) == doctest::Approx(liouville(r)).epsilon(1e-7));
    CHECK(sol.derivative(r) == doctest::Approx(4.0 * r / (1.0 - r * r)).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("unit ball: cubic in two dimensions is self-consistent") {
  const auto sol = solve_unit_ball(cubic(), 2);
  CHECK(sol.center_value() > 0.0);
  CHECK(std::abs(sol.blowup_radius_raw() - 1.0) <= 1e-9);
  CHECK(std::abs(shoot(cubic(), 2, sol.center_value()).R - 1.0) <= 1e-9);

  SUBCASE("node invariants") {
    const auto& r = sol.r();
    CHECK(r.front() == 0.0);
    CHECK(sol.Uprime().front() == 0.0);
    for (std::size_t i = 1; i < r.size(); ++i) {
      CHECK(r[i] > r[i - 1]);
      CHECK(r[i] < 1.0);
      CHECK(sol.U()[i] > sol.U()[i - 1]);
      CHECK(sol.Uprime()[i] > 0.0);
    }
  }
  SUBCASE("interpolated profile satisfies the ODE") { CHECK(sol.residual_max() <= 1e-6); }
  SUBCASE("evaluation is continuous across phases and past the last node") {
    const double rs = sol.r_stop();
    CHECK(sol.value(rs) == doctest::Approx(sol.U().back()).epsilon(1e-9));
    const double d = 1.0 - rs;
    const double inside = sol.value(1.0 - 0.5 * d);
    CHECK(inside > sol.U().back());
    CHECK_THROWS_AS(sol.value(1.0 + 1e-3), DomainError);
  }
}

TEST_CASE("unit ball: one-dimensional cubic approaches sqrt(2)/(1-r)") {
  const auto sol = solve_unit_ball(cubic(), 1);
  CHECK(sol.center_value() == doctest::Approx(boost::math::ellint_1(1.0 / std::numbers::sqrt2)).epsilon(1e-8));
  for (double d : {1e-2, 1e-3, 1e-4, 1e-5}) {
    CAPTURE(d);
    CHECK(sol.value(1.0 - d) * d == doctest::Approx(std::numbers::sqrt2).epsilon(1e-2));
  }
}

TEST_CASE("unit ball: oscillatory power stays radially increasing") {
  const GrowthProfile gp(Nonlinearity::oscillatory_power(3));
  const auto sol = solve_unit_ball(gp, 2);
  CHECK(std::abs(sol.blowup_radius_raw() - 1.0) <= 1e-9);
  double min_slope = INFINITY;
  for (std::size_t i = 1; i < sol.r().size(); ++i) {
    CHECK(sol.U()[i] > sol.U()[i - 1]);
    if (sol.r()[i] > 0.1) min_slope = std::min(min_slope, sol.Uprime()[i]);
  }
  CHECK(min_slope > 0.0);
}

TEST_CASE("boundary laws for the cubic in one to three dimensions") {
  for (int N : {1, 2, 3}) {
    CAPTURE(N);
    const auto rep = boundary_law_report(solve_unit_ball(cubic(), N));
    CHECK(rep.distance_max_dev <= 1e-2);
    CHECK(rep.distance_limit == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(rep.slope_limit - std::numbers::sqrt2) <= 2e-2);
    CHECK(rep.constant_two_rejected);
    REQUIRE(rep.power_constant.has_value());
    CHECK(*rep.power_constant == doctest::Approx(std::numbers::sqrt2).epsilon(2e-2));
    CHECK(*rep.power_constant_expected == doctest::Approx(std::numbers::sqrt2).epsilon(1e-15));
  }
}

TEST_CASE("boundary rate for the quadratic") {
  const GrowthProfile gp(Nonlinearity::power(2));
  const auto rep = boundary_law_report(solve_unit_ball(gp, 2));
  REQUIRE(rep.power_constant.has_value());
  // (sqrt(2(q+1))/(q-1))^{2/(q-1)} = 6 for q = 2
  CHECK(*rep.power_constant == doctest::Approx(6.0).epsilon(2e-2));
}

TEST_CASE("blow-up radius is insensitive to the extrapolation cap") {
  RadialOptions fine;
  fine.eps_R = 1e-7;
  for (int N : {1, 2, 3}) {
    const double R = shoot(cubic(), N, 3.0).R;
    const double R_fine = shoot(cubic(), N, 3.0, fine).R;
    CAPTURE(N);
    CHECK(std::abs(R - R_fine) <= 1e-8 * R);
  }
}

TEST_CASE("halving the ODE tolerance moves interior values by less than ten tolerances") {
  RadialOptions tight;
  tight.rel_tol = 0.5e-12;
  tight.abs_tol = 0.5e-14;
  const auto a = shoot(cubic(), 2, 2.0).profile;
  const auto b = shoot(cubic(), 2, 2.0, tight).profile;
  for (double r : {0.05, 0.2, 0.4, 0.6}) {
    CAPTURE(r);
    const double ua = a.value(r);
    CHECK(std::abs(ua - b.value(r)) <= 10.0 * 1e-12 * std::abs(ua));
  }
}

TEST_CASE("comparison: a larger center value gives a larger profile") {
  const double cs[] = {0.5, 1.0, 1.7, 3.0};
  for (int k = 0; k + 1 < 4; ++k) {
    const auto lo = shoot(cubic(), 2, cs[k]).profile;
    const auto hi = shoot(cubic(), 2, cs[k + 1]).profile;
    const double common = std::min(lo.r_stop(), hi.r_stop());
    for (int i = 0; i <= 50; ++i) {
      const double r = common * i / 50.0;
      CHECK(lo.value(r) < hi.value(r));
    }
  }
}

TEST_CASE("Dirichlet radial profile reproduces the unit-ball restriction") {
  const auto ball = solve_unit_ball(cubic(), 2);
  const double M = ball.value(0.95);
  const auto dir = solve_dirichlet_radial(cubic(), 2, 0.95, M);
  CHECK(dir.center_value() == doctest::Approx(ball.center_value()).epsilon(1e-9));
  CHECK(dir.r_stop() == doctest::Approx(0.95).epsilon(1e-12));
  for (double r : {0.0, 0.5, 0.9, 0.95}) {
    CHECK(dir.value(r) == doctest::Approx(ball.value(r)).epsilon(1e-8));
  }
  CHECK_THROWS_AS(dir.value(0.96), DomainError);
  CHECK_THROWS_AS(solve_dirichlet_radial(cubic(), 2, 0.95, 0.0), DomainError);
}
