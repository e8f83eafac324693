#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "blowup/error.hpp"
#include "blowup/nonlinearity.hpp"
#include "doctest.h"

using namespace blowup;
using std::numbers::pi;

namespace {

// Independent oracle: plain adaptive quadrature of f from 0, split every pi.
double quad_F(const Nonlinearity& f, double t) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double total = 0.0;
  double a = 0.0;
  while (a < t) {
    const double b = std::min(t, a + pi);
    total += GK::integrate([&](double s) { return f.value(s); }, a, b, 6, 1e-13);
    a = b;
  }
  return total;
}

double quad_power_sine(double q, double t) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double total = 0.0;
  double a = 0.0;
  while (a < t) {
    const double b = std::min(t, a + pi);
    total += GK::integrate([&](double s) { return std::pow(s, q) * std::sin(s); }, a, b, 6, 1e-13);
    a = b;
  }
  return total;
}

}  // namespace

TEST_CASE("eval examples") {
  SUBCASE("power q=3 at t=2") {
    const auto v = Nonlinearity::power(3).eval(2.0);
    CHECK(v.f == 8.0);
    CHECK(v.f_prime == 12.0);
    CHECK(v.F == 4.0);
  }
  SUBCASE("oscillatory power q=3 at t=pi") {
    const auto f = Nonlinearity::oscillatory_power(3);
    const auto v = f.eval(pi);
    CHECK(v.f == doctest::Approx(pi * pi * pi).epsilon(1e-14));
    CHECK(v.f_prime == doctest::Approx(3 * pi * pi - pi * pi * pi).epsilon(1e-13));
    boost::math::quadrature::tanh_sinh<double> ts;
    const double oracle =
        ts.integrate([](double s) { return s * s * s * (1.0 + std::sin(s)); }, 0.0, pi);
    CHECK(v.F == doctest::Approx(oracle).epsilon(1e-12));
  }
  SUBCASE("exponential alpha=1 at t=0") {
    const auto v = Nonlinearity::exponential(1).eval(0.0);
    CHECK(v.f == 1.0);
    CHECK(v.f_prime == 1.0);
    CHECK(v.F == 0.0);
  }
}

TEST_CASE("power_sine_integral matches direct quadrature on every evaluation path") {
  for (double q : {2.0, 3.0, 5.0, 1.5, 2.7}) {
    for (double t : {0.01, 0.5, 1.9, 3.0, 10.0, 49.0, 60.0, 200.0, 1000.0}) {
      const double oracle = quad_power_sine(q, t);
      const double scale = std::max(std::abs(oracle), std::pow(t, q) * 1e-3);
      CAPTURE(q);
      CAPTURE(t);
      CHECK(std::abs(power_sine_integral(q, t) - oracle) <= 1e-11 * scale);
    }
  }
  CHECK_THROWS_AS(power_sine_integral(2.0, -1.0), DomainError);
}

TEST_CASE("closed-form F agrees with quadrature of f on [1, 1e3]") {
  const Nonlinearity families[] = {
      Nonlinearity::power(2),
      Nonlinearity::power(3.5),
      Nonlinearity::oscillatory_power(2),
      Nonlinearity::oscillatory_power(3),
      Nonlinearity::oscillatory_power(2.5),
      Nonlinearity::exponential(0.5),
      Nonlinearity::oscillatory_exponential(0.5),
  };
  for (const auto& f : families) {
    for (double t : {1.0, 7.5, 31.0, 100.0, 412.0, 1000.0}) {
      CAPTURE(f.describe());
      CAPTURE(t);
      const double oracle = quad_F(f, t);
      CHECK(std::abs(f.antiderivative(t) - oracle) <= 1e-9 * std::abs(oracle));
      CHECK(f.log_antiderivative(t) == doctest::Approx(std::log(oracle)).epsilon(1e-12));
    }
  }
}

TEST_CASE("log antiderivative of exponential families beyond overflow") {
  const auto f = Nonlinearity::oscillatory_exponential(1.0);
  // F = e^t [1 + (sin t - cos t)/2] - 1 + 1/2 for alpha = 1
  const double t = 2000.0;
  const double expected = t + std::log(1.0 + (std::sin(t) - std::cos(t)) / 2.0);
  CHECK(f.log_antiderivative(t) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(f.log_abs_derivative(t) ==
        doctest::Approx(t + std::log(std::abs(1.0 + std::sin(t) + std::cos(t)))).epsilon(1e-14));
}

TEST_CASE("tabulated family") {
  const auto f = Nonlinearity::tabulated({{1.0, -1.0}, {2.0, 1.0}, {3.0, 2.0}});
  CHECK(f.value(1.5) == doctest::Approx(0.0));
  CHECK(f.value(2.5) == doctest::Approx(1.5));
  CHECK(f.antiderivative(3.0) == doctest::Approx(0.0 + 1.5));
  CHECK(f.missing_mass());
  CHECK_THROWS_AS(f.value(0.5), DomainError);
  CHECK_THROWS_AS(f.value(3.5), DomainError);
  CHECK_THROWS_AS(Nonlinearity::tabulated({{1.0, 1.0}, {1.0, 2.0}}), DomainError);
  CHECK(f.derivative(2.5) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("finite-difference derivative mode") {
  const auto f = Nonlinearity::oscillatory_power(3);
  const auto g = f.with_derivative_mode(DerivativeMode::finite_difference);
  for (double t : {0.5, 3.0, 40.0, 900.0}) {
    CHECK(g.derivative(t) == doctest::Approx(f.derivative(t)).epsilon(1e-6));
  }
  const auto e = Nonlinearity::exponential(1.0).with_derivative_mode(DerivativeMode::finite_difference);
  CHECK(e.scaled_derivative(800.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("positivity threshold") {
  const double a_power = positivity_threshold(Nonlinearity::power(2));
  CHECK(a_power > 0.0);
  CHECK(a_power <= 1.01e-3);
  const double a_osc = positivity_threshold(Nonlinearity::oscillatory_power(3));
  CHECK(a_osc > 0.0);
  CHECK(Nonlinearity::oscillatory_power(3).value(a_osc) > 0.0);
  CHECK(positivity_threshold(Nonlinearity::tabulated({{1.0, -1.0}, {2.0, 1.0}, {3.0, 2.0}})) == 2.0);
  CHECK_THROWS_AS(positivity_threshold(Nonlinearity::tabulated({{1.0, 1.0}, {2.0, -1.0}})),
                  DomainError);
}

TEST_CASE("shifted monotonicity") {
  const auto osc = Nonlinearity::oscillatory_power(3);
  SUBCASE("f + t^4/4 is nondecreasing") {
    const auto v = check_shift_monotone(osc, 0.25, 4.0, 1.0, 1e4);
    CHECK(v.holds);
    // oracle: f' + t^3 = 3t^2(1+sin t) + t^3(1+cos t) > 0 everywhere
    CHECK(v.min_slope > 0.0);
  }
  SUBCASE("f itself is not monotone") {
    const auto v = check_shift_monotone(osc, 0.0, 1.0, 1.0, 100.0);
    CHECK_FALSE(v.holds);
    REQUIRE(v.witness.has_value());
    const double t = *v.witness;
    CHECK(t >= 1.0);
    CHECK(t <= 100.0);
    CHECK(3.0 * (1.0 + std::sin(t)) + t * std::cos(t) < 0.0);
  }
  SUBCASE("power") {
    CHECK(check_shift_monotone(Nonlinearity::power(2), 0.0, 1.0, 1.0, 1e6).holds);
  }
  SUBCASE("exponential shift") {
    const auto oe = Nonlinearity::oscillatory_exponential(1.0);
    CHECK_FALSE(check_shift_monotone(oe, 1.0, 5.0, 1.0, 100.0).holds);
    CHECK(check_shift_monotone_exp(oe, 1.0, 1.0, 1.0, 1e3).holds);
  }
  CHECK_THROWS_AS(check_shift_monotone(osc, 1.0, 0.5, 1.0, 2.0), DomainError);
  CHECK_THROWS_AS(check_shift_monotone(osc, -1.0, 2.0, 1.0, 2.0), DomainError);
}

TEST_CASE("shift monotonicity is preserved by a larger shift constant") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Nonlinearity fams[] = {Nonlinearity::oscillatory_power(2), Nonlinearity::oscillatory_power(3),
                               Nonlinearity::power(1.5)};
  for (int trial = 0; trial < 24; ++trial) {
    const auto& f = fams[trial % 3];
    const double p = 1.0 + 4.0 * unit(rng);
    const double K = 0.5 * unit(rng);
    const double K2 = K + unit(rng);
    const double lo = 1.0 + 10.0 * unit(rng);
    const double hi = lo + 50.0 + 200.0 * unit(rng);
    if (check_shift_monotone(f, K, p, lo, hi).holds) {
      CHECK(check_shift_monotone(f, K2, p, lo, hi).holds);
    }
  }
}

TEST_CASE("Lipschitz envelope") {
  CHECK(lipschitz_envelope(Nonlinearity::power(3), 1.0, 10.0) == doctest::Approx(300.0));
  CHECK(lipschitz_envelope(Nonlinearity::exponential(2), 0.0, 1.0) ==
        doctest::Approx(2.0 * std::exp(2.0)));
  const auto osc = Nonlinearity::oscillatory_power(3);
  const double L = lipschitz_envelope(osc, 1.0, 10.0);
  // dense brute force oracle
  double brute = 0.0;
  for (int i = 0; i <= 2000000; ++i) {
    const double t = 1.0 + 9.0 * i / 2000000.0;
    brute = std::max(brute, std::abs(3 * t * t * (1 + std::sin(t)) + t * t * t * std::cos(t)));
  }
  CHECK(L <= 1600.0);
  CHECK(L == doctest::Approx(brute).epsilon(1e-5));

  double previous = 0.0;
  for (double t : {2.0, 5.0, 9.0, 30.0, 31.0, 100.0}) {
    const double v = lipschitz_envelope(osc, 1.0, t);
    CHECK(v >= previous);
    previous = v;
  }
  LipschitzTracker tracker(osc, 1.0);
  CHECK(std::exp(tracker.advance_to(10.0)) == doctest::Approx(L).epsilon(1e-12));
}
