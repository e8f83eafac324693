#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "blowup/error.hpp"
#include "blowup/fit.hpp"
#include "blowup/maxprinciple.hpp"
#include "doctest.h"

using namespace blowup;

namespace {

constexpr double kPi = std::numbers::pi;

const GrowthProfile& cubic() {
  static const GrowthProfile gp(Nonlinearity::power(3));
  return gp;
}

const RadialSolution& cubic_ball() {
  static const RadialSolution sol = solve_unit_ball(cubic(), 2);
  return sol;
}

const GrowthProfile& osc() {
  static const GrowthProfile gp(Nonlinearity::oscillatory_power(3));
  return gp;
}

const RadialSolution& osc_ball() {
  static const RadialSolution sol = solve_unit_ball(osc(), 2);
  return sol;
}

// Reference solution from the indicial roots s = 1/2 +- iA: u = Re x^s.
std::complex<double> indicial_root(double C0) {
  return {0.5, 0.5 * std::sqrt(4.0 * C0 - 1.0)};
}

}  // namespace

TEST_CASE("lens width decays like d^5 for the cubic") {
  // H = phi/sqrt F = 8/(3 U^5) and U ~ sqrt(2)/d give the exponent (3q+1)/(q-1).
  const double lambda = 0.6;
  const LensSpec ls{lambda, &cubic_ball()};
  std::vector<double> log_d, log_H;
  for (double d = 1e-2; d >= 1e-5; d /= 2.0) {
    const double rho = 1.0 - d;
    const double x2 = std::sqrt(rho * rho - lambda * lambda);
    log_d.push_back(std::log(d));
    log_H.push_back(std::log(lens_width(ls, lambda, x2)));
  }
  const double slope = fit_line(log_d, log_H).slope;
  CHECK(slope == doctest::Approx(5.0).epsilon(0.05));
  for (std::size_t i = 1; i < log_H.size(); ++i) CHECK(log_H[i] < log_H[i - 1]);
}

TEST_CASE("lens width at the reflected center is finite") {
  const LensSpec ls{0.25, &cubic_ball()};
  const double c = cubic_ball().center_value();
  const double H = lens_width(ls, 0.5, 0.0);
  CHECK(H > 0.0);
  CHECK(H == doctest::Approx(cubic().phi(c) / std::sqrt(c * c * c * c / 4.0)).epsilon(1e-8));
  CHECK_THROWS_AS(lens_width(ls, -0.6, 0.0), DomainError);
  CHECK_THROWS_AS(lens_width(LensSpec{1.2, &cubic_ball()}, 0.5, 0.0), DomainError);
}

TEST_CASE("lens thickness solves the fixed point and shrinks toward the chord ends") {
  const LensSpec ls{0.95, &osc_ball()};
  const double h = std::sqrt(1.0 - 0.95 * 0.95);
  double previous = INFINITY;
  for (double s : {0.0, 0.5, 0.9, 0.99}) {
    const double x2 = s * h;
    const double w = lens_thickness(ls, x2);
    CHECK(w > 0.0);
    CHECK(w == doctest::Approx(lens_width(ls, 0.95 + w, x2)).epsilon(1e-10));
    CHECK(w < previous);
    previous = w;
  }
}

TEST_CASE("Laplacian of the barrier matches finite differences") {
  const double p = 4.0, lambda = 0.5, C0 = 1.0, mu = 3.0;
  const double e = p - 1.0;
  const double x1 = 0.62, x2 = 0.3, h = 1e-4;
  const auto at = [&](double a, double b) {
    return barrier_sample(osc_ball(), p, lambda, C0, mu, e, a, b);
  };
  const auto c = at(x1, x2);
  const double lap = (at(x1 + h, x2).omega + at(x1 - h, x2).omega + at(x1, x2 + h).omega +
                      at(x1, x2 - h).omega - 4.0 * c.omega) /
                     (h * h);
  const double coef = C0 * std::pow(c.U, e);
  CHECK(c.op - coef * c.omega == doctest::Approx(lap).epsilon(1e-5));
  CHECK(c.omega == doctest::Approx(std::cos(mu * std::pow(c.U, 1.5) * (x1 - lambda))).epsilon(1e-14));
}

TEST_CASE("on the plane the sine term drops out") {
  const double p = 4.0, lambda = 0.7, C0 = 1.0, mu = 2.5;
  const auto s = barrier_sample(osc_ball(), p, lambda, C0, mu, p - 1.0, lambda, 0.4);
  CHECK(s.omega == 1.0);
  CHECK(s.requirement == 0.0);
  CHECK(s.op == doctest::Approx((C0 - mu * mu) * std::pow(s.U, p - 1.0)).epsilon(1e-12));
}

TEST_CASE("barrier verdict for the oscillatory cubic near the boundary") {
  const double p = 4.0, C0 = 1.0;
  for (double lambda : {0.95, 0.99}) {
    CAPTURE(lambda);
    const auto rep = barrier_report(osc(), osc_ball(), p, lambda, C0);
    CHECK(rep.verdict);
    CHECK(rep.margin_reached);
    CHECK(rep.failure.empty());
    CHECK(rep.mu == doctest::Approx(2.0 * std::sqrt(C0 + 1.0)));
    REQUIRE(rep.sample_counts.size() == 2);
    CHECK(rep.sample_counts[0] == 64 * 64);
    CHECK(rep.sample_counts[1] == 128 * 128);
    CHECK(rep.samples.size() == 128u * 128u);
    for (const auto& s : rep.samples) {
      CHECK(s.op < 0.0);
      CHECK(s.requirement <= kPi / 4.0);
      CHECK(s.omega >= std::numbers::sqrt2 / 2.0);
      CHECK(s.x1 >= lambda);
    }
    REQUIRE(rep.witness.has_value());
    CHECK(rep.note.find("U^(p-1)") != std::string::npos);
  }
}

TEST_CASE("deep lenses fail the smallness requirement") {
  BarrierOptions deep;
  deep.C_H = 100.0;
  deep.refine = false;
  const auto rep = barrier_report(osc(), osc_ball(), 4.0, 0.3, 1.0, deep);
  CHECK_FALSE(rep.verdict);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->requirement > kPi / 4.0);
  CHECK(rep.failure.find("pi/4") != std::string::npos);
}

TEST_CASE("verdicts are monotone in lambda") {
  for (double C_H : {1.0, 1e3}) {
    CAPTURE(C_H);
    BarrierOptions opt;
    opt.C_H = C_H;
    opt.refine = false;
    opt.samples = 32;
    bool seen_true = false;
    for (double lambda : {0.3, 0.5, 0.7, 0.9, 0.95, 0.99}) {
      CAPTURE(lambda);
      const bool v = barrier_report(osc(), osc_ball(), 4.0, lambda, 1.0, opt).verdict;
      if (seen_true) CHECK(v);
      seen_true = seen_true || v;
    }
    CHECK(seen_true);
  }
}

TEST_CASE("the alternative coefficient exponent is selectable and noted") {
  BarrierOptions half;
  half.exponent = CoefficientExponent::half;
  half.refine = false;
  const auto rep = barrier_report(osc(), osc_ball(), 4.0, 0.95, 1.0, half);
  CHECK(rep.coefficient_exponent == 1.5);
  CHECK(rep.verdict);
  CHECK(rep.note.find("U^((p-1)/2)") != std::string::npos);
  CHECK_THROWS_AS(barrier_report(osc(), osc_ball(), 1.0, 0.95, 1.0), DomainError);
  CHECK_THROWS_AS(barrier_report(osc(), osc_ball(), 4.0, 1.0, 1.0), DomainError);
}

TEST_CASE("Euler solution satisfies the equation") {
  const double C0 = 1.0;
  CHECK(euler_solution(C0, 1.0) == 1.0);
  CHECK(std::abs(euler_solution(C0, std::exp(-kPi / std::sqrt(3.0)))) <= 1e-15);
  const auto s = indicial_root(C0);
  CHECK(std::abs(s * (s - 1.0) + C0) <= 1e-15);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::exp(std::log(1e-6) * (1.0 - (i + 0.5) / 1000.0));
    const double upp = euler_second_derivative(C0, x);
    CAPTURE(x);
    CHECK(std::abs(euler_residual(C0, x)) <= 1e-9 * std::abs(upp));
    const double reference = std::real(s * (s - 1.0) * std::pow(std::complex<double>(x), s - 2.0));
    CHECK(upp == doctest::Approx(reference).epsilon(1e-9));
  }
}

TEST_CASE("Euler zeros for C0 = 1") {
  const auto z = euler_zeros(1.0, 1e-6, 0.5);
  CHECK_FALSE(z.real_exponents.has_value());
  REQUIRE(z.zeros.size() == 4);
  const double expected[4] = {3.06e-6, 1.151e-4, 4.33e-3, 0.16303};
  for (int i = 0; i < 4; ++i) {
    const int k = 3 - i;
    CHECK(z.zeros[i].k == k);
    const double formula = std::exp(-(kPi / 2.0 + k * kPi) * 2.0 / std::sqrt(3.0));
    CHECK(std::abs(z.zeros[i].x - formula) <= 1e-12 * formula);
    CHECK(z.zeros[i].x == doctest::Approx(expected[i]).epsilon(2e-3));
    CHECK(std::abs(euler_solution(1.0, z.zeros[i].x)) <= 1e-12 * std::sqrt(z.zeros[i].x));
  }
  for (int i = 1; i < 4; ++i) CHECK(z.zeros[i].x > z.zeros[i - 1].x);
}

TEST_CASE("Euler zeros accumulate geometrically") {
  for (double C0 : {0.3, 1.0, 10.0}) {
    CAPTURE(C0);
    const auto z = euler_zeros(C0, 1e-12, 1.0);
    REQUIRE(z.zeros.size() >= 2);
    const double ratio = std::exp(-2.0 * kPi / std::sqrt(4.0 * C0 - 1.0));
    for (std::size_t i = 1; i < z.zeros.size(); ++i)
      CHECK(std::abs(z.zeros[i - 1].x / z.zeros[i].x - ratio) <= 1e-12 * ratio);
  }
  // zero count ~ sqrt(4 C0 - 1)/(2 pi) ln(delta/eps)
  const double C0 = 400.0;
  const double count = static_cast<double>(euler_zeros(C0, 1e-8, 1e-2).zeros.size());
  CHECK(std::abs(count - std::sqrt(4.0 * C0 - 1.0) / (2.0 * kPi) * std::log(1e6)) <= 1.0);
}

TEST_CASE("no oscillation at or below one quarter") {
  const auto z = euler_zeros(0.25, 1e-6, 0.5);
  CHECK(z.zeros.empty());
  REQUIRE(z.real_exponents.has_value());
  CHECK(z.real_exponents->first == 0.5);
  CHECK(z.real_exponents->second == 0.5);
  const auto w = euler_zeros(0.16, 1e-6, 0.5);
  REQUIRE(w.real_exponents.has_value());
  CHECK(w.real_exponents->first == doctest::Approx(0.2));
  CHECK(w.real_exponents->second == doctest::Approx(0.8));
  for (double x : {1e-6, 1e-3, 0.5}) {
    CHECK(euler_solution(0.16, x) > 0.0);
    CHECK(std::abs(euler_residual(0.16, x)) <= 1e-12 * std::abs(euler_second_derivative(0.16, x)));
  }
  CHECK_THROWS_AS(euler_zeros(1.0, 0.5, 0.1), DomainError);
}
