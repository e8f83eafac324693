#include "blowup/radial_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

#include "blowup/error.hpp"
#include "blowup/fit.hpp"
#include "hermite.hpp"

namespace blowup {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr std::size_t kMaxSteps = 5'000'000;

// Values of U where the integration changes phase and where it ends.
struct Targets {
  double switch_floor;  // psi^{-1}(switch_d), or t0 when that is out of range
  double end;           // final U
  double psi_end;       // psi(end); NaN for Dirichlet runs
};

double inv_sqrt_2F(const Nonlinearity& f, double U) {
  return std::exp(-0.5 * (kLn2 + f.log_antiderivative(U)));
}

// f / (2F), computed from the rate-scaled forms so that it never overflows.
double half_log_derivative(const Nonlinearity& f, double U) {
  return f.scaled_value(U) / (2.0 * std::exp(f.log_scaled_antiderivative(U)));
}

double switch_floor(const GrowthProfile& gp, const RadialOptions& o) {
  try {
    return psi_inverse(gp, o.switch_d);
  } catch (const DomainError&) {
    return gp.t0();
  }
}

void check_common(const GrowthProfile& gp, int N, double c, const RadialOptions& o) {
  if (N < 1) throw DomainError("dimension N must be >= 1");
  if (!(c > gp.threshold()))
    throw DomainError("center value must exceed the positivity threshold");
  if (!(o.eps_R > 0.0) || !(o.switch_d > o.eps_R))
    throw DomainError("require 0 < eps_R < switch_d");
}

}  // namespace

struct RadialBuilder {
  static RadialSolution integrate(const GrowthProfile& gp, int N, double c, const Targets& targets,
                                  const RadialOptions& o);
};

RadialSolution RadialBuilder::integrate(const GrowthProfile& gp, int N, double c,
                                        const Targets& targets, const RadialOptions& o) {
  const Nonlinearity& f = gp.nonlinearity();
  RadialSolution sol(gp);
  sol.N_ = N;
  sol.c_ = c;
  const double n1 = N - 1.0;

  const double fc = f.value(c);
  if (!(fc > 0.0)) throw DomainError("f(c) must be positive at the center value");
  const double U_switch = std::max(targets.switch_floor, 2.0 * c);
  const double phase1_end = std::min(U_switch, targets.end);

  // Series start: U = c + a r^2/(2N) + a b r^4/(8N(N+2)).
  const double a = fc;
  const double b = f.derivative(c);
  double r0 = std::min(o.series_radius, std::sqrt(2.0 * N * 1e-8 * std::max(1.0, std::abs(c)) / a));
  State x{c + a * r0 * r0 / (2.0 * N) + a * b * std::pow(r0, 4) / (8.0 * N * (N + 2.0)),
          a * r0 / N + a * b * std::pow(r0, 3) / (2.0 * N * (N + 2.0))};

  auto accel = [&](double r, double U, double V) { return f.value(U) - n1 * V / r; };
  auto push1 = [&](double r, double U, double V) {
    sol.r1_.push_back(r);
    sol.U1_.push_back(U);
    sol.V1_.push_back(V);
    sol.A1_.push_back(accel(r, U, V));
  };
  sol.r1_.push_back(0.0);
  sol.U1_.push_back(c);
  sol.V1_.push_back(0.0);
  sol.A1_.push_back(a / N);
  if (x[0] >= phase1_end) throw SolverError("series start already exceeds the stop value");
  push1(r0, x[0], x[1]);

  auto rhs1 = [&](const State& y, State& dy, double r) {
    dy[0] = y[1];
    dy[1] = f.value(y[0]) - n1 * y[1] / r;
  };
  auto stepper = odeint::make_dense_output(o.abs_tol, o.rel_tol, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(x, r0, r0);
  for (std::size_t step = 0;; ++step) {
    const auto [t_old, t_new] = stepper.do_step(rhs1);
    const State& y = stepper.current_state();
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
      throw SolverError("radial integration produced a non-finite state", {t_new});
    if (y[0] >= phase1_end) {
      auto gap = [&](double r) {
        State z;
        stepper.calc_state(r, z);
        return z[0] - phase1_end;
      };
      auto tol = [](double lo, double hi) { return hi - lo <= 4e-16 * hi; };
      std::uintmax_t iterations = 200;
      const auto [lo, hi] =
          boost::math::tools::toms748_solve(gap, t_old, t_new, gap(t_old), y[0] - phase1_end, tol, iterations);
      State z;
      stepper.calc_state(hi, z);
      push1(hi, phase1_end, z[1]);
      (void)lo;
      break;
    }
    push1(t_new, y[0], y[1]);
    if (t_new > o.r_max)
      throw SolverError("no blow-up before r_max: U(" + std::to_string(t_new) + ") = " + std::to_string(y[0]),
                        {t_new, y[0]});
    if (step > kMaxSteps) throw SolverError("radial integration exceeded the step budget", {t_new});
  }

  if (targets.end > phase1_end) {
    // Phase 2: independent variable U, state (r, w) with w = U'/sqrt(2F(U)).
    auto rhs2 = [&](const State& y, State& dy, double U) {
      const double s = inv_sqrt_2F(f, U);
      const double g = half_log_derivative(f, U);
      dy[0] = s / y[1];
      dy[1] = g * (1.0 / y[1] - y[1]) - n1 * s / y[0];
    };
    auto push2 = [&](const State& y, double U) {
      const double s = inv_sqrt_2F(f, U);
      const double g = half_log_derivative(f, U);
      State dy;
      rhs2(y, dy, U);
      sol.U2_.push_back(U);
      sol.r2_.push_back(y[0]);
      sol.w2_.push_back(y[1]);
      sol.dr2_.push_back(dy[0]);
      sol.ddr2_.push_back(-(s / y[1]) * (g + dy[1] / y[1]));
    };
    State y{sol.r1_.back(), sol.V1_.back() * inv_sqrt_2F(f, phase1_end)};
    auto observer = [&](const State& z, double U) {
      if (!std::isfinite(z[0]) || !std::isfinite(z[1]) || !(z[1] > 0.0))
        throw SolverError("blow-up layer integration lost the state", {U});
      if (z[0] > o.r_max) throw SolverError("no blow-up before r_max", {U, z[0]});
      push2(z, U);
    };
    // Nodes on a geometric grid in U, so 1 - r is roughly geometric as well.
    std::vector<double> grid{phase1_end};
    while (grid.back() * o.layer_ratio < targets.end) grid.push_back(grid.back() * o.layer_ratio);
    grid.push_back(targets.end);
    const double dU0 = 1e-3 * phase1_end;
    odeint::integrate_times(
        odeint::make_controlled(o.abs_tol, o.rel_tol, odeint::runge_kutta_dopri5<State>()), rhs2, y,
        grid.begin(), grid.end(), dU0, observer);
    if (sol.U2_.back() != targets.end) throw SolverError("blow-up layer did not reach its end value");
  }

  // Combined node list.
  sol.r_ = sol.r1_;
  sol.U_ = sol.U1_;
  sol.Uprime_ = sol.V1_;
  for (std::size_t j = 1; j < sol.U2_.size(); ++j) {
    sol.r_.push_back(sol.r2_[j]);
    sol.U_.push_back(sol.U2_[j]);
    sol.Uprime_.push_back(1.0 / sol.dr2_[j]);
  }
  if (std::isnan(targets.psi_end)) {
    sol.R_ = std::numeric_limits<double>::quiet_NaN();
    sol.domain_radius_ = sol.r_.back();
  } else {
    sol.R_ = sol.r_.back() + targets.psi_end;
    sol.domain_radius_ = sol.R_;
  }
  return sol;
}

RadialSolution::Point RadialSolution::eval_inner(std::size_t i, double r) const {
  const detail::Jet lo{U1_[i], V1_[i], A1_[i]};
  const detail::Jet hi{U1_[i + 1], V1_[i + 1], A1_[i + 1]};
  const auto j = detail::quintic_hermite(r1_[i], lo, r1_[i + 1], hi, r);
  return {j.value, j.first, j.second};
}

RadialSolution::Point RadialSolution::eval_outer(std::size_t j, double r) const {
  const detail::Jet lo{r2_[j], dr2_[j], ddr2_[j]};
  const detail::Jet hi{r2_[j + 1], dr2_[j + 1], ddr2_[j + 1]};
  auto gap = [&](double U) { return detail::quintic_hermite(U2_[j], lo, U2_[j + 1], hi, U).value - r; };
  double U;
  const double g0 = r2_[j] - r;
  const double g1 = r2_[j + 1] - r;
  if (g0 >= 0.0) {
    U = U2_[j];
  } else if (g1 <= 0.0) {
    U = U2_[j + 1];
  } else {
    auto tol = [](double x0, double x1) { return x1 - x0 <= 2e-16 * x1; };
    std::uintmax_t iterations = 200;
    const auto [x0, x1] = boost::math::tools::toms748_solve(gap, U2_[j], U2_[j + 1], g0, g1, tol, iterations);
    U = 0.5 * (x0 + x1);
  }
  const auto jet = detail::quintic_hermite(U2_[j], lo, U2_[j + 1], hi, U);
  const double Up = 1.0 / jet.first;
  return {U, Up, -jet.second * Up * Up * Up};
}

RadialSolution::Point RadialSolution::from_U(double U, double w, double r) const {
  const Nonlinearity& f = gp_.nonlinearity();
  const double V = w / inv_sqrt_2F(f, U);
  return {U, V, f.value(U) - (N_ - 1.0) * V / r};
}

RadialSolution::Point RadialSolution::eval(double r) const {
  if (!(r >= 0.0)) throw DomainError("radial evaluation requires r >= 0");
  if (r <= r1_.back()) {
    auto it = std::upper_bound(r1_.begin(), r1_.end(), r);
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - r1_.begin()), r1_.size() - 1) - 1;
    return eval_inner(i, r);
  }
  if (!r2_.empty() && r <= r2_.back()) {
    auto it = std::upper_bound(r2_.begin(), r2_.end(), r);
    std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(it - r2_.begin()), r2_.size() - 1) - 1;
    return eval_outer(j, r);
  }
  if (std::isnan(R_)) {
    if (r <= r_.back() * (1.0 + 1e-9)) {
      return r2_.empty() ? eval_inner(r1_.size() - 2, r_.back()) : eval_outer(r2_.size() - 2, r_.back());
    }
    throw DomainError("radial evaluation beyond the Dirichlet radius");
  }
  if (!(r < R_)) throw DomainError("radial evaluation at or beyond the blow-up radius");
  const double w = w2_.empty() ? 1.0 : w2_.back();
  return from_U(psi_inverse(gp_, R_ - r), w, r);
}

double RadialSolution::residual_max() const {
  const Nonlinearity& f = gp_.nonlinearity();
  double worst = 0.0;
  auto check = [&](double r, const Point& p) {
    const double fu = f.value(p.U);
    const double res = std::abs(p.Usecond + (N_ - 1.0) * p.Uprime / r - fu);
    worst = std::max(worst, res / std::max(1.0, std::abs(fu)));
  };
  for (std::size_t i = 1; i + 1 < r1_.size(); ++i) {
    const double r = 0.5 * (r1_[i] + r1_[i + 1]);
    check(r, eval_inner(i, r));
  }
  for (std::size_t j = 0; j + 1 < r2_.size(); ++j) {
    const double r = 0.5 * (r2_[j] + r2_[j + 1]);
    if (r > r2_[j] && r < r2_[j + 1]) check(r, eval_outer(j, r));
  }
  return worst;
}

namespace {

Targets unit_targets(const GrowthProfile& gp, const RadialOptions& o) {
  Targets t;
  t.switch_floor = switch_floor(gp, o);
  t.end = psi_inverse(gp, o.eps_R);
  t.psi_end = gp.psi(t.end);
  return t;
}

}  // namespace

ShootResult shoot(const GrowthProfile& gp, int N, double c, const RadialOptions& options) {
  check_common(gp, N, c, options);
  auto sol = RadialBuilder::integrate(gp, N, c, unit_targets(gp, options), options);
  const double R = sol.blowup_radius_raw();
  return {std::move(sol), R};
}

RadialSolution solve_unit_ball(const GrowthProfile& gp, int N, const RadialOptions& options) {
  check_common(gp, N, gp.t0(), options);
  const Targets targets = unit_targets(gp, options);
  std::vector<double> history;

  std::optional<RadialSolution> best;
  double best_gap = std::numeric_limits<double>::infinity();
  // log R(c); +large when the profile does not blow up before r_max
  auto log_radius = [&](double c) {
    try {
      auto sol = RadialBuilder::integrate(gp, N, c, targets, options);
      const double g = std::log(sol.blowup_radius_raw());
      history.push_back(c);
      if (std::abs(g) < best_gap) {
        best_gap = std::abs(g);
        best.emplace(std::move(sol));
      }
      return g;
    } catch (const SolverError&) {
      history.push_back(c);
      return std::log(10.0 * options.r_max);
    }
  };

  const double a = gp.threshold();
  double c_lo = gp.t0();
  double g_lo = log_radius(c_lo);
  for (int k = 0; g_lo <= 0.0; ++k) {
    if (k == 40) throw SolverError("no center value with R(c) > 1 above the threshold", history);
    c_lo = a + 0.25 * (c_lo - a);
    g_lo = log_radius(c_lo);
  }
  double c_hi = c_lo;
  double g_hi = g_lo;
  while (g_hi > 0.0) {
    c_lo = c_hi;
    g_lo = g_hi;
    c_hi *= 4.0;
    if (c_hi > options.c_max) throw SolverError("bracket not found in the scan range", history);
    g_hi = log_radius(c_hi);
  }
  if (g_hi != 0.0) {
    const double tol_log = std::log1p(options.radius_tol) * 0.5;
    auto h = [&](double x) { return log_radius(std::exp(x)); };
    auto stop = [&](double x0, double x1) { return best_gap <= tol_log || x1 - x0 <= 1e-15 * std::abs(x1); };
    std::uintmax_t iterations = 100;
    boost::math::tools::toms748_solve(h, std::log(c_lo), std::log(c_hi), g_lo, g_hi, stop, iterations);
  }
  if (!best || std::abs(best->blowup_radius_raw() - 1.0) > options.radius_tol)
    throw SolverError("center value bisection did not reach |R - 1| <= radius_tol", history);
  return std::move(*best);
}

RadialSolution solve_dirichlet_radial(const GrowthProfile& gp, int N, double rho, double M,
                                      const RadialOptions& options) {
  if (!(rho > 0.0)) throw DomainError("Dirichlet radius must be positive");
  if (!(M > gp.threshold())) throw DomainError("boundary value must exceed the positivity threshold");
  check_common(gp, N, M, options);
  Targets targets;
  targets.switch_floor = switch_floor(gp, options);
  targets.end = M;
  targets.psi_end = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> history;

  std::optional<RadialSolution> best;
  double best_gap = std::numeric_limits<double>::infinity();
  auto log_reach = [&](double c) {
    try {
      auto sol = RadialBuilder::integrate(gp, N, c, targets, options);
      const double g = std::log(sol.r_stop() / rho);
      history.push_back(c);
      if (std::abs(g) < best_gap) {
        best_gap = std::abs(g);
        best.emplace(std::move(sol));
      }
      return g;
    } catch (const SolverError&) {
      history.push_back(c);
      return std::log(10.0 * options.r_max / rho);
    }
  };

  const double a = gp.threshold();
  double c_hi = M * (1.0 - 1e-3);
  double g_hi = log_reach(c_hi);
  if (g_hi >= 0.0) throw SolverError("boundary value is reached too late even from c near M", history);
  double c_lo = std::min(gp.t0(), 0.5 * (a + M));
  double g_lo = log_reach(c_lo);
  for (int k = 0; g_lo < 0.0; ++k) {
    if (k == 40) throw SolverError("boundary value is reached before rho for every center value", history);
    c_hi = c_lo;
    g_hi = g_lo;
    c_lo = a + 0.25 * (c_lo - a);
    g_lo = log_reach(c_lo);
  }
  if (g_lo != 0.0) {
    auto h = [&](double x) { return log_reach(std::exp(x)); };
    auto stop = [&](double x0, double x1) { return best_gap <= 1e-13 || x1 - x0 <= 1e-15 * std::abs(x1); };
    std::uintmax_t iterations = 100;
    boost::math::tools::toms748_solve(h, std::log(c_lo), std::log(c_hi), g_lo, g_hi, stop, iterations);
  }
  if (!best || best_gap > 1e-10) throw SolverError("Dirichlet center value search did not converge", history);
  return std::move(*best);
}

BoundaryLawReport boundary_law_report(const RadialSolution& sol) {
  const GrowthProfile& gp = sol.profile();
  const Nonlinearity& f = gp.nonlinearity();
  if (std::isnan(sol.blowup_radius_raw())) throw DomainError("boundary laws need a blow-up profile");
  BoundaryLawReport rep;
  rep.expected_slope = std::numbers::sqrt2;

  std::optional<double> q;
  if (const auto* p = std::get_if<PowerFamily>(&f.family())) {
    if (p->q > 1.0) q = p->q;
  }
  if (q) {
    const double e = 2.0 / (*q - 1.0);
    rep.power_constant_expected = std::pow(std::sqrt(2.0 * (*q + 1.0)) / (*q - 1.0), e);
  }

  std::vector<double> fd, fa, fb, fc;
  const auto& r = sol.r();
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double d = 1.0 - r[i];
    if (!(d > 0.0) || d > 0.1) continue;
    const double U = sol.U()[i];
    if (U < gp.t0()) continue;
    const double dist = gp.psi(U) / d;
    const double slope = sol.Uprime()[i] * std::exp(-0.5 * f.log_antiderivative(U));
    rep.distance_ratio.emplace_back(d, dist);
    rep.slope_ratio.emplace_back(d, slope);
    if (q) rep.power_rate.emplace_back(d, U * std::pow(d, 2.0 / (*q - 1.0)));
    if (d <= 1e-2) rep.distance_max_dev = std::max(rep.distance_max_dev, std::abs(dist - 1.0));
    if (d >= 1e-5 && d <= 1e-2) {
      fd.push_back(d);
      fa.push_back(dist);
      fb.push_back(slope);
      if (q) fc.push_back(rep.power_rate.back().second);
    }
  }
  if (fd.size() < 3) throw SolverError("too few nodes in the boundary layer for the limit fits");
  rep.distance_limit = fit_line(fd, fa).intercept;
  rep.slope_limit = fit_line(fd, fb).intercept;
  if (q) rep.power_constant = fit_line(fd, fc).intercept;
  rep.constant_two_rejected = std::abs(rep.slope_limit - 2.0) > 2e-2;

  std::ostringstream note;
  note << "U'/sqrt(F(U)) tends to " << rep.slope_limit << "; the first integral U'^2 ~ 2F(U) gives sqrt(2)";
  if (rep.constant_two_rejected) note << "; a limit constant of 2 is inconsistent with psi(U)/d -> 1";
  rep.note = note.str();
  return rep;
}

}  // namespace blowup
