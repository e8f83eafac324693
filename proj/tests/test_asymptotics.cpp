#include <cmath>
#include <cstdlib>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "blowup/asymptotics.hpp"
#include "blowup/error.hpp"
#include "doctest.h"

using namespace blowup;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

double psi_power(double q, double t) {
  return std::sqrt(2.0 * (q + 1.0)) / (q - 1.0) * std::pow(t, -(q - 1.0) / 2.0);
}
double phi_power(double q, double t) { return (q + 1.0) / (q * std::pow(t, q)); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// psi for t^q (1 + sin t) by brute-force pi-cell quadrature up to t + 2e4,
// plus the leading power tail (next correction is O(X^-2) relative).
double psi_osc_oracle(const Nonlinearity& f, double q, double t) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double X = std::ceil((t + 2e4) / pi) * pi;
  double sum = 0.0;
  double a = t;
  while (a < X) {
    const double b = std::min(X, (std::floor(a / pi + 1e-9) + 1.0) * pi);
    sum += GK::integrate([&](double s) { return 1.0 / std::sqrt(f.antiderivative(s)); }, a, b, 8,
                         1e-14);
    a = b;
  }
  sum += std::sqrt(q + 1.0) * 2.0 / (q - 1.0) * std::pow(X, (1.0 - q) / 2.0);
  return sum / sqrt2;
}

}  // namespace

TEST_CASE("psi and phi of pure powers match the closed forms") {
  for (double q : {2.0, 3.0, 5.0}) {
    const GrowthProfile gp(Nonlinearity::power(q));
    for (double t : {10.0, 100.0, 1000.0}) {
      CAPTURE(q);
      CAPTURE(t);
      CHECK(rel(gp.psi(t), psi_power(q, t)) <= 1e-8);
      CHECK(rel(gp.phi(t), phi_power(q, t)) <= 1e-8);
    }
  }
  const GrowthProfile gp(Nonlinearity::power(3));
  CHECK(gp.psi(2.0) == doctest::Approx(sqrt2 / 2.0).epsilon(1e-9));
  CHECK(gp.psi(10.0) == doctest::Approx(sqrt2 / 10.0).epsilon(1e-9));
  CHECK(gp.phi(2.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
  CHECK(std::exp(gp.log_psi(10.0)) == doctest::Approx(sqrt2 / 10.0).epsilon(1e-12));
  const auto detail = gp.psi_integral(10.0);
  CHECK(detail.extrapolated);
  CHECK(detail.tail > 0.0);
  CHECK(detail.tail < detail.raw);
}

TEST_CASE("phi is constant below t0") {
  GrowthOptions options;
  options.t0 = 2.0;
  const GrowthProfile gp(Nonlinearity::power(3), options);
  CHECK(gp.phi(1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
  CHECK(gp.phi(0.5) == gp.phi(2.0));
  CHECK_THROWS_AS(gp.psi(1.0), DomainError);
  GrowthOptions bad;
  bad.t0 = 1e-6;
  CHECK_THROWS_AS(GrowthProfile(Nonlinearity::power(3), bad), DomainError);
}

TEST_CASE("divergent psi") {
  const GrowthProfile gp(Nonlinearity::power(1));
  CHECK_THROWS_WITH_AS(gp.psi(2.0), "integral diverges", DivergenceError);
  // phi still converges: F = t^2/2
  CHECK(gp.phi(2.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("exponential phi and psi") {
  const GrowthProfile gp(Nonlinearity::exponential(1));
  // \int_5^inf ds / (e^s - 1) = -log(1 - e^-5)
  CHECK(gp.phi(5.0) == doctest::Approx(-std::log1p(-std::exp(-5.0))).epsilon(1e-9));
  CHECK(gp.phi(5.0) == doctest::Approx(std::exp(-5.0)).epsilon(1e-2));
  // \int_t^inf (e^s - 1)^{-1/2} ds = 2 atan(1 / sqrt(e^t - 1))
  for (double t : {0.5, 3.0, 20.0}) {
    CHECK(gp.psi(t) == doctest::Approx(sqrt2 * std::atan(1.0 / std::sqrt(std::expm1(t)))).epsilon(1e-9));
  }
  // far past overflow of F: log psi ~ log(sqrt2) - t/2
  CHECK(gp.log_psi(3000.0) == doctest::Approx(0.5 * std::log(2.0) - 1500.0).epsilon(1e-12));
}

TEST_CASE("oscillatory power psi against brute-force quadrature") {
  const auto f = Nonlinearity::oscillatory_power(3);
  const GrowthProfile gp(f);
  for (double t : {10.0, 100.0, 1000.0, 2e5}) {
    CAPTURE(t);
    CHECK(rel(gp.psi(t), psi_osc_oracle(f, 3.0, t)) <= 1e-8);
  }
}

TEST_CASE("keller-osserman classification") {
  for (auto f : {Nonlinearity::power(3), Nonlinearity::oscillatory_power(2),
                 Nonlinearity::oscillatory_power(3), Nonlinearity::exponential(1),
                 Nonlinearity::oscillatory_exponential(1)}) {
    CAPTURE(f.describe());
    const auto ko = keller_osserman(GrowthProfile(f));
    CHECK(ko.verdict == LimitVerdict::converges_positive);
    CHECK(ko.passes);
  }
  for (auto f : {Nonlinearity::power(1), Nonlinearity::power(0.5)}) {
    CAPTURE(f.describe());
    const auto ko = keller_osserman(GrowthProfile(f));
    CHECK(ko.verdict == LimitVerdict::diverges);
    CHECK_FALSE(ko.passes);
  }
  const GrowthProfile gp(Nonlinearity::power(3));
  const auto ko = keller_osserman(gp);
  // partial integrals from 1 approach sqrt2 * psi(1)
  CHECK(ko.samples.back().value == doctest::Approx(sqrt2 * psi_power(3, 1.0)).epsilon(1e-6));
  CHECK(ko.fitted_slope == doctest::Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("condition h2") {
  const auto est = check_condition_h2(GrowthProfile(Nonlinearity::power(3)), 4.0);
  CHECK(est.verdict == LimitVerdict::converges_to_zero);
  CHECK(est.fitted_slope == doctest::Approx(-3.5).epsilon(0.05));
  for (double q : {2.0, 3.0}) {
    const auto e = check_condition_h2(GrowthProfile(Nonlinearity::oscillatory_power(q)), q + 1.0);
    CAPTURE(q);
    CHECK(e.passes);
    CHECK(e.fitted_slope == doctest::Approx(-(2.0 * q + 1.0) / 2.0).epsilon(0.05));
  }
  for (auto f : {Nonlinearity::power(3), Nonlinearity::oscillatory_power(2),
                 Nonlinearity::oscillatory_power(3), Nonlinearity::exponential(1),
                 Nonlinearity::oscillatory_exponential(1)}) {
    CAPTURE(f.describe());
    CHECK(check_condition_h2(GrowthProfile(f), 5.0).passes);
  }
  // for q = 3, Q ~ t^{(p-1)/2 - 5}
  CHECK(check_condition_h2(GrowthProfile(Nonlinearity::power(3)), 13.0).verdict ==
        LimitVerdict::diverges);
  CHECK(check_condition_h2(GrowthProfile(Nonlinearity::power(3)), 11.0).verdict ==
        LimitVerdict::converges_positive);
}

TEST_CASE("exponential condition") {
  const auto osc = check_condition_exp(GrowthProfile(Nonlinearity::oscillatory_exponential(1)), 1.0);
  CHECK(osc.verdict == LimitVerdict::converges_to_zero);
  CHECK(osc.semilog);
  CHECK(osc.fitted_slope / osc.samples.back().t == doctest::Approx(-1.0).epsilon(1e-3));
  const auto e2 = check_condition_exp(GrowthProfile(Nonlinearity::exponential(2)), 2.0);
  CHECK(e2.verdict == LimitVerdict::converges_to_zero);
  CHECK(e2.fitted_slope / e2.samples.back().t == doctest::Approx(-2.0).epsilon(1e-3));
  CHECK(check_condition_exp(GrowthProfile(Nonlinearity::power(3)), 1.0).verdict ==
        LimitVerdict::diverges);
}

TEST_CASE("gamma conditions") {
  const auto osc = check_gamma_conditions(GrowthProfile(Nonlinearity::oscillatory_power(3)), 2.0);
  CHECK(osc.c1.passes);
  CHECK(osc.c2.passes);
  CHECK(osc.c3.passes);
  CHECK(osc.all_pass());
  const GrowthProfile power(Nonlinearity::power(3));
  const auto g2 = check_gamma_conditions(power, 2.0);
  CHECK(g2.all_pass());
  // psi^-2 phi ~ t^-1, phi L ~ t^-1, psi^-2 F ~ t^6
  CHECK(g2.c1.fitted_slope == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(g2.c2.fitted_slope == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(g2.c3.fitted_slope == doctest::Approx(6.0).epsilon(1e-3));
  const auto g10 = check_gamma_conditions(power, 10.0);
  CHECK_FALSE(g10.c1.passes);
  CHECK(g10.c1.verdict == LimitVerdict::diverges);
  CHECK(g10.c1.fitted_slope == doctest::Approx(7.0).epsilon(1e-3));
}

TEST_CASE("psi_inverse") {
  const GrowthProfile gp(Nonlinearity::power(3));
  CHECK(psi_inverse(gp, 0.1) == doctest::Approx(10.0 * sqrt2).epsilon(1e-9));
  CHECK(psi_inverse(gp, gp.psi(5.0)) == doctest::Approx(5.0).epsilon(1e-9));
  CHECK_THROWS_AS(psi_inverse(gp, 0.0), DomainError);
  CHECK_THROWS_AS(psi_inverse(gp, 2.0 * gp.psi(gp.t0())), DomainError);
  const GrowthProfile ge(Nonlinearity::exponential(1));
  CHECK(psi_inverse(ge, 1e-3) == doctest::Approx(2.0 * std::log(sqrt2 / 1e-3)).epsilon(1e-2));
  for (const GrowthProfile* g : {&gp, &ge}) {
    for (double d : {0.5, 1e-2, 1e-4, 1e-6}) {
      const double t = psi_inverse(*g, d);
      CHECK(std::abs(g->psi(t) - d) <= 1e-10 * d);
    }
  }
}

TEST_CASE("monotonicity and the phi <= sqrt(2/F) psi inequality") {
  for (auto f : {Nonlinearity::power(3), Nonlinearity::oscillatory_power(3),
                 Nonlinearity::exponential(1), Nonlinearity::oscillatory_exponential(1)}) {
    CAPTURE(f.describe());
    const GrowthProfile gp(f);
    double prev_psi = std::numeric_limits<double>::infinity();
    double prev_phi = prev_psi;
    for (double t : geometric_points(gp.t0() * 1.5, 1e4, 4)) {
      const double lpsi = gp.log_psi(t);
      const double lphi = gp.log_phi(t);
      CHECK(lpsi < prev_psi);
      CHECK(lphi < prev_phi);
      prev_psi = lpsi;
      prev_phi = lphi;
      // F nondecreasing everywhere for f >= 0
      CHECK(lphi <= 0.5 * std::log(2.0) - 0.5 * gp.log_F(t) + lpsi + 1e-12);
    }
  }
}

TEST_CASE("results are bit-identical across runs and thread counts") {
  const auto f = Nonlinearity::oscillatory_power(3);
  setenv("BLOWUP_LAB_THREADS", "1", 1);
  const GrowthProfile serial(f);
  const double a = serial.psi(37.0);
  const auto h_serial = check_condition_h2(serial, 4.0);
  unsetenv("BLOWUP_LAB_THREADS");
  const GrowthProfile threaded(f);
  CHECK(threaded.psi(37.0) == a);
  CHECK(serial.psi(37.0) == a);
  const auto h_threaded = check_condition_h2(threaded, 4.0);
  REQUIRE(h_serial.samples.size() == h_threaded.samples.size());
  for (std::size_t i = 0; i < h_serial.samples.size(); ++i) {
    CHECK(h_serial.samples[i].log_value == h_threaded.samples[i].log_value);
  }
}

TEST_CASE("hypothesis report") {
  const auto osc = evaluate_hypotheses(GrowthProfile(Nonlinearity::oscillatory_power(3)));
  CHECK(osc.theorem_applicable);
  const auto lin = evaluate_hypotheses(GrowthProfile(Nonlinearity::power(1)));
  CHECK_FALSE(lin.ko.passes);
  CHECK_FALSE(lin.theorem_applicable);
  const auto oe = evaluate_hypotheses(GrowthProfile(Nonlinearity::oscillatory_exponential(1)));
  CHECK_FALSE(oe.shift_monotone.holds);
  CHECK(oe.exp_variant_applicable);
}
