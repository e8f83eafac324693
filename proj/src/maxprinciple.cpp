#include "blowup/maxprinciple.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "blowup/error.hpp"
#include "blowup/parallel.hpp"

namespace blowup {

namespace {

constexpr double kPi = std::numbers::pi;

void require_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0, 1)");
}

double reflected_radius(double lambda, double x1, double x2) { return std::hypot(2.0 * lambda - x1, x2); }

double width_at_radius(const GrowthProfile& gp, const RadialSolution& radial, double rho) {
  if (!(rho >= 0.0 && rho < radial.domain_radius()))
    throw DomainError("reflected point lies outside the ball");
  const double U = radial.value(rho);
  return std::exp(gp.log_phi(U) - 0.5 * gp.log_F(U));
}

// Everything about U_lambda at x that does not depend on mu.
struct PointData {
  double x1, x2, t;
  double U, dU1, dU2, lapU;
};

PointData point_data(const RadialSolution& radial, double lambda, double x1, double x2) {
  const double y1 = 2.0 * lambda - x1;
  const double rho = std::hypot(y1, x2);
  if (!(rho < radial.domain_radius())) throw DomainError("reflected point lies outside the ball");
  const auto P = radial.eval(rho);
  const int N = radial.dimension();
  PointData d{x1, x2, x1 - lambda, P.U, 0.0, 0.0, 0.0};
  if (rho > 0.0) {
    d.dU1 = -P.Uprime * y1 / rho;
    d.dU2 = P.Uprime * x2 / rho;
    d.lapU = P.Usecond + (N - 1) * P.Uprime / rho;
  } else {
    d.lapU = N * P.Usecond;
  }
  return d;
}

BarrierSample evaluate(const PointData& d, double p, double C0, double mu, double exponent) {
  if (!(d.U > 0.0)) throw DomainError("barrier needs U_lambda > 0");
  const double a = 0.5 * (p - 1.0);
  const double Ua = std::pow(d.U, a);
  const double Ua1 = Ua / d.U;
  const double Ua2 = Ua1 / d.U;
  const double grad2 = d.dU1 * d.dU1 + d.dU2 * d.dU2;

  // g = U^a t
  const double g = Ua * d.t;
  const double g1 = a * Ua1 * d.dU1 * d.t + Ua;
  const double g2 = a * Ua1 * d.dU2 * d.t;
  const double lap_g = (a * (a - 1.0) * Ua2 * grad2 + a * Ua1 * d.lapU) * d.t + 2.0 * a * Ua1 * d.dU1;

  const double c = std::cos(mu * g);
  const double s = std::sin(mu * g);
  const double lap_omega = -mu * mu * c * (g1 * g1 + g2 * g2) - mu * s * lap_g;
  const double coef = C0 * std::pow(d.U, exponent);

  BarrierSample out;
  out.x1 = d.x1;
  out.x2 = d.x2;
  out.U = d.U;
  out.omega = c;
  out.op = lap_omega + coef * c;
  out.requirement = mu * g;
  out.margin = out.op / coef;
  return out;
}

// Chord coordinate for s in (0, 1), clustered geometrically at both ends.
double chord_point(double h, double s) {
  constexpr double kGap = 1e-6;
  const double u = 2.0 * s - 1.0;
  const double x = h * (1.0 - std::pow(kGap, std::abs(u)));
  return u < 0.0 ? -x : x;
}

std::vector<PointData> lens_points(const LensSpec& ls, int n) {
  // chord ends where |x_lambda| reaches the last resolved radius of the profile
  const double rs = std::min(ls.radial->r_stop(), ls.radial->domain_radius());
  if (!(rs > ls.lambda)) throw DomainError("lambda beyond the resolved radial profile");
  const double h = std::sqrt(rs * rs - ls.lambda * ls.lambda);
  std::vector<std::vector<PointData>> rows(static_cast<std::size_t>(n));
  parallel_for(rows.size(), [&](std::size_t j) {
    const double x2 = chord_point(h, (static_cast<double>(j) + 0.5) / n);
    const double w = lens_thickness(ls, x2);
    for (int k = 0; k < n; ++k) {
      const double x1 = ls.lambda + w * k / (n - 1);
      if (reflected_radius(ls.lambda, x1, x2) < ls.min_reflected_radius) continue;
      rows[j].push_back(point_data(*ls.radial, ls.lambda, x1, x2));
    }
  });
  std::vector<PointData> out;
  for (auto& row : rows) out.insert(out.end(), row.begin(), row.end());
  return out;
}

std::vector<BarrierSample> evaluate_all(const std::vector<PointData>& pts, double p, double C0, double mu,
                                        double exponent) {
  std::vector<BarrierSample> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { out[i] = evaluate(pts[i], p, C0, mu, exponent); });
  return out;
}

double worst_margin(const std::vector<BarrierSample>& samples) {
  double worst = -INFINITY;
  for (const auto& s : samples) worst = std::max(worst, s.margin);
  return worst;
}

bool level_holds(const std::vector<BarrierSample>& samples) {
  return std::all_of(samples.begin(), samples.end(),
                     [](const BarrierSample& s) { return s.op < 0.0 && s.requirement <= kPi / 4.0; });
}

}  // namespace

double lens_width(const LensSpec& ls, double x1, double x2) {
  require_lambda(ls.lambda);
  if (!ls.radial) throw DomainError("lens needs a radial solution");
  return width_at_radius(ls.radial->profile(), *ls.radial, reflected_radius(ls.lambda, x1, x2));
}

double lens_thickness(const LensSpec& ls, double x2) {
  require_lambda(ls.lambda);
  if (!(x2 * x2 < 1.0 - ls.lambda * ls.lambda)) throw DomainError("chord point outside the ball");
  const double t_ball = std::sqrt(1.0 - x2 * x2) - ls.lambda;
  auto gap = [&](double t) { return ls.C_H * lens_width(ls, ls.lambda + t, x2) - t; };

  double lo = 0.0;
  double hi = std::min(ls.C_H * lens_width(ls, ls.lambda, x2), t_ball);
  double g_hi = gap(hi);
  while (g_hi >= 0.0) {
    if (hi >= t_ball) return t_ball;
    lo = hi;
    hi = std::min(2.0 * hi, t_ball);
    g_hi = gap(hi);
  }
  boost::uintmax_t iterations = 100;
  const auto [a, b] = boost::math::tools::toms748_solve(
      gap, lo, hi, gap(lo), g_hi, boost::math::tools::eps_tolerance<double>(50), iterations);
  return a;
}

BarrierSample barrier_sample(const RadialSolution& radial, double p, double lambda, double C0, double mu,
                             double exponent, double x1, double x2) {
  require_lambda(lambda);
  return evaluate(point_data(radial, lambda, x1, x2), p, C0, mu, exponent);
}

BarrierReport barrier_report(const GrowthProfile&, const RadialSolution& radial, double p, double lambda,
                             double C0, const BarrierOptions& options) {
  require_lambda(lambda);
  if (!(p > 1.0)) throw DomainError("barrier needs p > 1");
  if (!(C0 > 0.0)) throw DomainError("barrier needs C0 > 0");
  if (options.samples < 2) throw DomainError("barrier needs at least 2 samples per direction");

  BarrierReport rep;
  rep.C0 = C0;
  rep.p = p;
  rep.lambda = lambda;
  rep.C_H = options.C_H;
  rep.coefficient_exponent = options.exponent == CoefficientExponent::full ? p - 1.0 : 0.5 * (p - 1.0);
  rep.note = options.exponent == CoefficientExponent::full
                 ? "coefficient C0 U^(p-1) as used by the barrier estimate; the alternative printed form "
                   "C0 U^((p-1)/2) is selectable"
                 : "coefficient C0 U^((p-1)/2) (alternative printed form); the barrier estimate uses "
                   "C0 U^(p-1)";

  const LensSpec ls{lambda, &radial, options.C_H, options.min_reflected_radius};
  const auto coarse = lens_points(ls, options.samples);
  if (coarse.empty()) throw DomainError("the lens has no sample inside the neighborhood");

  double mu = 2.0 * std::sqrt(C0 + 1.0);
  double best_mu = mu;
  double best = INFINITY;
  for (int k = 0; k <= options.max_doublings; ++k, mu *= 2.0) {
    const double worst = worst_margin(evaluate_all(coarse, p, C0, mu, rep.coefficient_exponent));
    if (worst < best) {
      best = worst;
      best_mu = mu;
    }
    rep.doublings = k;
    if (worst <= -options.margin) {
      rep.margin_reached = true;
      break;
    }
  }
  rep.mu = rep.margin_reached ? mu : best_mu;

  std::vector<BarrierSample> samples = evaluate_all(coarse, p, C0, rep.mu, rep.coefficient_exponent);
  rep.sample_counts.push_back(static_cast<int>(samples.size()));
  rep.level_verdicts.push_back(level_holds(samples));
  if (options.refine) {
    samples = evaluate_all(lens_points(ls, 2 * options.samples), p, C0, rep.mu, rep.coefficient_exponent);
    rep.sample_counts.push_back(static_cast<int>(samples.size()));
    rep.level_verdicts.push_back(level_holds(samples));
  }
  rep.verdict = std::all_of(rep.level_verdicts.begin(), rep.level_verdicts.end(), [](bool b) { return b; });

  // witness: a failing sample when there is one, otherwise the worst margin
  const BarrierSample* witness = nullptr;
  for (const auto& s : samples) {
    const bool fails = !(s.op < 0.0) || s.requirement > kPi / 4.0;
    if (fails) {
      if (!witness || s.requirement > witness->requirement || s.margin > witness->margin) witness = &s;
    } else if (rep.verdict && (!witness || s.margin > witness->margin)) {
      witness = &s;
    }
  }
  if (witness) rep.witness = *witness;
  if (!rep.verdict) {
    std::ostringstream os;
    os.precision(17);
    if (witness && witness->requirement > kPi / 4.0)
      os << "requirement mu U^((p-1)/2)(x1-lambda) = " << witness->requirement << " > pi/4";
    else if (witness)
      os << "operator value " << witness->op << " >= 0";
    else
      os << "a coarse sample fails";
    if (witness) os << " at (" << witness->x1 << ", " << witness->x2 << ")";
    rep.failure = os.str();
  }
  rep.samples = std::move(samples);
  return rep;
}

double euler_solution(double C0, double x) {
  if (!(x > 0.0)) throw DomainError("euler_solution needs x > 0");
  if (C0 > 0.25) {
    const double A = 0.5 * std::sqrt(4.0 * C0 - 1.0);
    return std::sqrt(x) * std::cos(A * std::log(x));
  }
  return std::pow(x, 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * C0)));
}

double euler_second_derivative(double C0, double x) {
  if (!(x > 0.0)) throw DomainError("euler_second_derivative needs x > 0");
  if (C0 > 0.25) {
    // with L = ln x: x^2 u'' = u_LL - u_L
    const double A = 0.5 * std::sqrt(4.0 * C0 - 1.0);
    const double L = std::log(x);
    const double e = std::sqrt(x);
    const double c = std::cos(A * L);
    const double s = std::sin(A * L);
    const double uLL = e * ((0.25 - A * A) * c - A * s);
    const double uL = e * (0.5 * c - A * s);
    return (uLL - uL) / (x * x);
  }
  const double sp = 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * C0));
  return sp * (sp - 1.0) * std::pow(x, sp - 2.0);
}

double euler_residual(double C0, double x) {
  return euler_second_derivative(C0, x) + C0 * euler_solution(C0, x) / (x * x);
}

EulerZeros euler_zeros(double C0, double a, double b) {
  if (!(a > 0.0 && a < b && b <= 1.0)) throw DomainError("euler_zeros needs 0 < a < b <= 1");
  EulerZeros out;
  if (!(C0 > 0.25)) {
    const double r = std::sqrt(std::max(0.0, 1.0 - 4.0 * C0));
    out.real_exponents = std::pair{0.5 * (1.0 - r), 0.5 * (1.0 + r)};
    return out;
  }
  const double A = 0.5 * std::sqrt(4.0 * C0 - 1.0);
  auto zero = [A](int k) { return std::exp(-(kPi / 2.0 + k * kPi) / A); };
  int k = std::max(0, static_cast<int>(std::floor(-A * std::log(b) / kPi - 0.5)));
  while (zero(k) >= b) ++k;
  for (; zero(k) > a; ++k) out.zeros.push_back({k, zero(k)});
  std::reverse(out.zeros.begin(), out.zeros.end());
  return out;
}

}  // namespace blowup
