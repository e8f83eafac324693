#include "blowup/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "blowup/error.hpp"
#include "blowup/fit.hpp"
#include "blowup/parallel.hpp"
#include "blowup/sampling.hpp"
#include "quadrature.hpp"

namespace blowup {

namespace {

using std::numbers::pi;
constexpr double kPeriod = 2.0 * pi;
constexpr double kTableEnd = 1e5;
constexpr double kNegligible = 1e-17;
constexpr double kCellTol = 1e-13;
constexpr double kMeanTol = 1e-10;

double exponent(Kernel k) { return k == Kernel::inv_sqrt_F ? 0.5 : 1.0; }
int slot(Kernel k) { return k == Kernel::inv_sqrt_F ? 0 : 1; }

template <class Fn>
double integrate(Fn&& fn, double a, double b, double tol = kCellTol) {
  return detail::integrate_checked(fn, a, b, tol);
}

// Right end of the marching panel that starts at a.
double next_edge(const Nonlinearity& f, Kernel kernel, double a) {
  if (f.oscillation_period() > 0.0) {
    if (a < pi) return std::min(2.0 * a, pi);
    double b = (std::floor(a / pi) + 1.0) * pi;
    if (b <= a * (1.0 + 1e-14)) b += pi;
    return b;
  }
  if (const double rate = f.exp_rate(); rate > 0.0) {
    return a + std::min(a, 8.0 / (exponent(kernel) * rate));
  }
  return 2.0 * a;
}

struct MarchResult {
  double sum = 0.0;
  bool negligible = false;  // stopped before b because the integrand died out
};

// log F relative to its value at a fixed point, without forming log F
// itself (which would lose the difference to rounding for e^{alpha t}).
struct LogFOrigin {
  const Nonlinearity* f;
  double at;
  double scaled;

  LogFOrigin(const Nonlinearity& nl, double t)
      : f(&nl), at(t), scaled(nl.log_scaled_antiderivative(t)) {}
  double log_F() const { return f->exp_rate() * at + scaled; }
  double relative(double s) const {
    return f->exp_rate() * (s - at) + (f->log_scaled_antiderivative(s) - scaled);
  }
};

// \int_a^b exp(-k (log F(s) - log F(origin))) ds over marching panels.
MarchResult march(const Nonlinearity& f, Kernel kernel, double a, double b, const LogFOrigin& origin) {
  const double k = exponent(kernel);
  auto g = [&](double s) { return std::exp(-k * origin.relative(s)); };
  // rounding of s itself perturbs e^{-k alpha s} (and sin s) by ~ ulp(s)
  const double sensitivity = k * f.exp_rate() + (f.oscillation_period() > 0.0 ? 1.0 : 0.0);
  MarchResult out;
  double x = a;
  while (x < b) {
    const double y = std::min(b, next_edge(f, kernel, x));
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * sensitivity * y;
    const double piece = integrate(g, x, y, std::max(kCellTol, noise));
    out.sum += piece;
    x = y;
    if (piece <= kNegligible * out.sum && x < b) {
      out.negligible = true;
      break;
    }
  }
  return out;
}

struct TailFit {
  double tail = 0.0;
  double spread = 0.0;
};

// Extrapolates \int_T^inf h from h on [lo, T]: a power law h ~ s^{-beta}
// unless the decay over the window is faster than any moderate power, in
// which case a local exponential. Two windows give two estimates.
template <class LogH>
TailFit fit_tail(LogH&& log_h, double lo, double T, double raw, double tol, double log_scale) {
  if (!(T / lo >= 1.5)) {
    throw InconclusiveError("tail extrapolation needs a longer fit window", lo, T);
  }
  const double mid = std::sqrt(lo * T);
  const double lT = log_h(T);
  const double lm = log_h(mid);
  const double ll = log_h(lo);
  const double beta1 = (lm - lT) / std::log(T / mid);
  const double beta2 = (ll - lm) / std::log(mid / lo);
  const double hT = std::exp(lT);
  TailFit fit;
  double tail2 = 0.0;
  if (beta1 > 40.0) {
    const double dx = 1e-4 * T;
    const double local_rate = (log_h(T - dx) - lT) / dx;
    const double secant_rate = (lm - lT) / (T - mid);
    if (!(local_rate > 0.0)) throw DivergenceError("integral diverges");
    fit.tail = hT / local_rate;
    tail2 = hT / secant_rate;
  } else {
    if (beta1 - 1.0 <= 1e-3) throw DivergenceError("integral diverges");
    fit.tail = hT * T / (beta1 - 1.0);
    tail2 = beta2 - 1.0 > 1e-3 ? hT * T / (beta2 - 1.0) : std::numeric_limits<double>::infinity();
  }
  fit.spread = std::abs(fit.tail - tail2);
  if (!(fit.spread <= std::max(tol * (raw + fit.tail), 1e-4 * fit.tail))) {
    const double scale = std::exp(log_scale);
    throw InconclusiveError("tail extrapolation is inconclusive", scale * (raw + fit.tail),
                            scale * (raw + tail2));
  }
  return fit;
}

}  // namespace

// Cumulative pi-cell integrals of F^{-1/2} and F^{-1} for oscillatory power
// families: suffix[kk][i] = \int_{edges[i]}^{edges.back()}.
struct GrowthProfile::Table {
  std::vector<double> edges;
  std::vector<double> suffix[2];
};

namespace {

double osc_kernel(const Nonlinearity& f, int kk, double s) {
  return std::exp(-(kk == 0 ? 0.5 : 1.0) * f.log_antiderivative(s));
}

// Period average (1/P) \int_{s-P/2}^{s+P/2} g; smooth to O(s^{-2}) ripple.
double osc_mean(const Nonlinearity& f, int kk, double s) {
  using GL = boost::math::quadrature::gauss<double, 20>;
  return GL::integrate([&](double u) { return osc_kernel(f, kk, u); }, s - 0.5 * kPeriod,
                       s + 0.5 * kPeriod) /
         kPeriod;
}

double osc_cells(const Nonlinearity& f, int kk, double a, double b) {
  double total = 0.0;
  double x = a;
  while (x < b) {
    const double y = std::min(b, next_edge(f, Kernel::inv_F, x));
    total += integrate([&](double s) { return osc_kernel(f, kk, s); }, x, y);
    x = y;
  }
  return total;
}

// \int_a^b g = \int_{a+P/2}^{b-P/2} gbar + edge corrections (exact identity).
double osc_averaged(const Nonlinearity& f, int kk, double a, double b) {
  auto g = [&](double u) { return osc_kernel(f, kk, u); };
  const double lower_edge =
      integrate([&](double u) { return g(u) * (1.0 - (u - a) / kPeriod); }, a, a + kPeriod);
  const double upper_edge =
      integrate([&](double u) { return g(u) * (u - b + kPeriod) / kPeriod; }, b - kPeriod, b);
  double mid = 0.0;
  double x = a + 0.5 * kPeriod;
  const double end = b - 0.5 * kPeriod;
  while (x < end) {
    const double y = std::min(end, 2.0 * x);
    // The ripple of gbar is below the tolerance of everything downstream;
    // the panel estimate is accepted at the depth limit.
    mid += detail::gauss_kronrod([&](double s) { return osc_mean(f, kk, s); }, x, y, kMeanTol, 6)
               .value;
    x = y;
  }
  return lower_edge + mid + upper_edge;
}

double table_segment(const Nonlinearity& f, const GrowthProfile::Table& table, int kk, double a,
                     double b) {
  const auto& e = table.edges;
  auto cell_of = [&](double x) {
    const auto it = std::upper_bound(e.begin(), e.end(), x);
    return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - e.begin()) - 1));
  };
  auto g = [&](double s) { return osc_kernel(f, kk, s); };
  const std::size_t ia = cell_of(a);
  const std::size_t ib = std::min(cell_of(b), e.size() - 1);
  if (ia == ib) return a < b ? integrate(g, a, b) : 0.0;
  double total = table.suffix[kk][ia + 1] - table.suffix[kk][ib];
  if (a < e[ia + 1]) total += integrate(g, a, e[ia + 1]);
  if (b > e[ib]) total += integrate(g, e[ib], b);
  return total;
}

double osc_segment(const Nonlinearity& f, const GrowthProfile::Table& table, int kk, double a,
                   double b) {
  double total = 0.0;
  const double end = table.edges.back();
  if (a < end) {
    const double hi = std::min(b, end);
    total += table_segment(f, table, kk, a, hi);
    a = hi;
  }
  if (a < b) {
    total += (b - a < 2.0 * kPeriod) ? osc_cells(f, kk, a, b) : osc_averaged(f, kk, a, b);
  }
  return total;
}

std::shared_ptr<const GrowthProfile::Table> build_table(const Nonlinearity& f, double t0) {
  auto table = std::make_shared<GrowthProfile::Table>();
  auto& e = table->edges;
  double x = t0;
  e.push_back(x);
  while (x < kTableEnd) {
    x = next_edge(f, Kernel::inv_F, x);
    e.push_back(x);
  }
  const std::size_t cells = e.size() - 1;
  std::vector<double> pieces[2] = {std::vector<double>(cells), std::vector<double>(cells)};
  parallel_for(cells, [&](std::size_t i) {
    for (int kk = 0; kk < 2; ++kk) {
      pieces[kk][i] = integrate([&](double s) { return osc_kernel(f, kk, s); }, e[i], e[i + 1]);
    }
  });
  for (int kk = 0; kk < 2; ++kk) {
    auto& suffix = table->suffix[kk];
    suffix.assign(cells + 1, 0.0);
    for (std::size_t i = cells; i-- > 0;) suffix[i] = suffix[i + 1] + pieces[kk][i];
  }
  return table;
}

}  // namespace

double ImproperIntegral::value() const { return std::exp(log_scale) * (raw + tail); }
double ImproperIntegral::log_value() const { return log_scale + std::log(raw + tail); }

GrowthProfile::GrowthProfile(Nonlinearity f, GrowthOptions options)
    : f_(std::move(f)), options_(options) {
  if (!(options_.quad_rel_tol > 0.0) || !(options_.tail_cap > 0.0) || !(options_.check_cap > 0.0)) {
    throw DomainError("growth profile tolerances and caps must be positive");
  }
  threshold_ = positivity_threshold(f_);
  if (options_.t0) {
    if (!(*options_.t0 > threshold_)) throw DomainError("t0 must exceed the positivity threshold");
    t0_ = *options_.t0;
  } else {
    t0_ = 10.0 * threshold_;
    const double top = f_.domain().second;
    if (std::isfinite(top)) t0_ = std::min(t0_, std::sqrt(threshold_ * top));
  }
  check_cap_ = std::min(options_.check_cap, upper_limit() / 10.0);
  if (std::holds_alternative<OscillatoryPowerFamily>(f_.family())) table_ = build_table(f_, t0_);
}

double GrowthProfile::upper_limit() const {
  const double top = f_.domain().second;
  return std::isfinite(top) ? top : options_.tail_cap;
}

ImproperIntegral GrowthProfile::improper(Kernel kernel, double t) const {
  if (!(t >= t0_)) throw DomainError("improper integral requires t >= t0");
  const double k = exponent(kernel);
  const double top = f_.domain().second;
  const double upper = std::min(top, std::max(upper_limit(), 100.0 * t));
  if (!(upper > t)) throw DomainError("improper integral: t beyond the tabulated range");
  const double fit_lo = std::max(upper / 100.0, t0_);
  ImproperIntegral out;
  out.truncation = upper;
  if (table_) {
    const int kk = slot(kernel);
    out.raw = osc_segment(f_, *table_, kk, t, upper);
    const auto fit = fit_tail([&](double x) { return std::log(osc_mean(f_, kk, x)); },
                              std::max(fit_lo, t0_ + kPeriod), upper, out.raw,
                              options_.quad_rel_tol, 0.0);
    out.tail = fit.tail;
    out.tail_spread = fit.spread;
    out.extrapolated = true;
    return out;
  }
  const LogFOrigin origin(f_, t);
  out.log_scale = -k * origin.log_F();
  const auto run = march(f_, kernel, t, upper, origin);
  out.raw = run.sum;
  if (run.negligible) {
    out.truncation = t;
    return out;
  }
  const auto fit = fit_tail([&](double x) { return -k * origin.relative(x); },
                            fit_lo, upper, out.raw, options_.quad_rel_tol, out.log_scale);
  out.tail = fit.tail;
  out.tail_spread = fit.spread;
  out.extrapolated = true;
  return out;
}

ImproperIntegral GrowthProfile::psi_integral(double t) const {
  return improper(Kernel::inv_sqrt_F, t);
}

ImproperIntegral GrowthProfile::phi_integral(double t) const {
  return improper(Kernel::inv_F, std::max(t, t0_));
}

double GrowthProfile::psi(double t) const { return psi_integral(t).value() / std::numbers::sqrt2; }
double GrowthProfile::log_psi(double t) const {
  return psi_integral(t).log_value() - 0.5 * std::numbers::ln2;
}
double GrowthProfile::phi(double t) const { return phi_integral(t).value(); }
double GrowthProfile::log_phi(double t) const { return phi_integral(t).log_value(); }

double GrowthProfile::log_segment(Kernel kernel, double a, double b) const {
  if (!(a >= t0_)) throw DomainError("segment requires a >= t0");
  if (!(b > a)) return -std::numeric_limits<double>::infinity();
  if (table_) return std::log(osc_segment(f_, *table_, slot(kernel), a, b));
  const LogFOrigin origin(f_, a);
  return -exponent(kernel) * origin.log_F() + std::log(march(f_, kernel, a, b, origin).sum);
}

std::string to_string(LimitVerdict v) {
  switch (v) {
    case LimitVerdict::converges_to_zero: return "converges_to_zero";
    case LimitVerdict::converges_positive: return "converges_positive";
    case LimitVerdict::diverges: return "diverges";
    case LimitVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

constexpr double kDecaySlope = -0.05;
constexpr double kFlatSlope = 0.01;
constexpr double kZeroLevel = 1e-3;
constexpr double kBoundedGrowth = 0.01;

std::size_t last_decade_start(const std::vector<LimitSample>& s) {
  const double from = s.back().t / 10.0;
  std::size_t i = 0;
  while (i + 1 < s.size() && s[i].t < from * (1.0 - 1e-12)) ++i;
  return i;
}

double last_decade_slope(const std::vector<LimitSample>& s, bool semilog) {
  const std::size_t i0 = last_decade_start(s);
  std::vector<double> x, y;
  for (std::size_t i = i0; i < s.size(); ++i) {
    x.push_back(semilog ? s[i].t : std::log(s[i].t));
    y.push_back(s[i].log_value);
  }
  const double slope = fit_line(x, y).slope;
  return semilog ? slope * s.back().t : slope;
}

// Verdict on lim Q for samples of log Q.
void classify_limit(LimitEstimate& est) {
  const auto& s = est.samples;
  est.fitted_slope = last_decade_slope(s, est.semilog);
  est.threshold = kZeroLevel;
  const std::size_t i0 = last_decade_start(s);
  const double y0 = s[i0].log_value;
  const double slack = 1e-12 * std::max(1.0, std::abs(y0));
  bool decreasing = true;
  for (std::size_t i = i0 + 1; i < s.size(); ++i) decreasing = decreasing && s[i].log_value <= y0 + slack;
  double ymax = -std::numeric_limits<double>::infinity();
  for (const auto& p : s) ymax = std::max(ymax, p.log_value);
  const double ylast = s.back().log_value;
  if (est.fitted_slope < kDecaySlope && decreasing && ylast <= ymax + std::log(kZeroLevel)) {
    est.verdict = LimitVerdict::converges_to_zero;
  } else if (est.fitted_slope > kFlatSlope && ylast > y0) {
    est.verdict = LimitVerdict::diverges;
  } else if (std::abs(est.fitted_slope) <= kFlatSlope) {
    est.verdict = LimitVerdict::converges_positive;
  } else {
    est.verdict = LimitVerdict::inconclusive;
  }
}

// limsup < inf surrogate: running maximum grows < 1% over the last two decades.
bool running_max_stable(const std::vector<LimitSample>& s) {
  const double from = s.back().t / 100.0;
  double before = -std::numeric_limits<double>::infinity();
  double overall = before;
  for (const auto& p : s) {
    overall = std::max(overall, p.log_value);
    if (p.t <= from * (1.0 + 1e-12)) before = overall;
  }
  if (!std::isfinite(before)) return false;
  return overall - before < std::log1p(kBoundedGrowth);
}

template <class LogQ>
std::vector<LimitSample> sample_log(const GrowthProfile& gp, LogQ&& log_q) {
  const auto ts = geometric_points(std::max(gp.t0(), 1.0), gp.check_cap(), 10);
  std::vector<LimitSample> out(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) {
    const double y = log_q(ts[i]);
    out[i] = {ts[i], std::exp(y), y};
  });
  return out;
}

LimitEstimate increment_test(const GrowthProfile& gp, Kernel kernel, std::string name) {
  LimitEstimate est;
  est.quantity = std::move(name);
  const double start = std::max(gp.t0(), 1.0);
  const double top = gp.nonlinearity().domain().second;
  const double cap = std::isfinite(top) ? top : gp.tail_cap();
  std::vector<double> edges{start};
  while (edges.back() * 2.0 <= cap) edges.push_back(edges.back() * 2.0);
  if (edges.size() < 3) {
    est.note = "range too short for an increment test";
    return est;
  }
  const std::size_t n = edges.size() - 1;
  std::vector<double> log_inc(n);
  parallel_for(n, [&](std::size_t i) { log_inc[i] = gp.log_segment(kernel, edges[i], edges[i + 1]); });
  // partial integrals \int_start^{edges[i+1]}, accumulated in log space
  double log_sum = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::max(log_sum, log_inc[i]);
    log_sum = m + std::log(std::exp(log_sum - m) + std::exp(log_inc[i] - m));
    est.samples.push_back({edges[i + 1], std::exp(log_sum), log_sum});
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n; ++i) {
    if (edges[i + 1] >= edges.back() / 10.0) {
      x.push_back(std::log(edges[i]));
      y.push_back(log_inc[i]);
    }
  }
  est.fitted_slope = fit_line(x, y).slope;
  if (est.fitted_slope <= kDecaySlope) {
    est.verdict = LimitVerdict::converges_positive;
  } else if (est.fitted_slope >= -kFlatSlope) {
    est.verdict = LimitVerdict::diverges;
  } else {
    est.verdict = LimitVerdict::inconclusive;
  }
  est.passes = est.verdict == LimitVerdict::converges_positive;
  est.note = "slope of doubling increments over the last decade";
  return est;
}

}  // namespace

LimitEstimate keller_osserman(const GrowthProfile& gp) {
  return increment_test(gp, Kernel::inv_sqrt_F, "int ds/sqrt(F)");
}

LimitEstimate phi_convergence(const GrowthProfile& gp) {
  return increment_test(gp, Kernel::inv_F, "int ds/F");
}

LimitEstimate check_condition_h2(const GrowthProfile& gp, double p) {
  if (!(p > 1.0)) throw DomainError("condition h2 requires p > 1");
  LimitEstimate est;
  est.quantity = "t^((p-1)/2) phi / sqrt(F)";
  est.samples = sample_log(gp, [&](double t) {
    return 0.5 * (p - 1.0) * std::log(t) + gp.log_phi(t) - 0.5 * gp.log_F(t);
  });
  classify_limit(est);
  est.passes = est.verdict == LimitVerdict::converges_to_zero;
  return est;
}

LimitEstimate check_condition_exp(const GrowthProfile& gp, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("exponential condition requires alpha > 0");
  LimitEstimate est;
  est.quantity = "exp(alpha t/2) phi / sqrt(F)";
  est.semilog = true;
  est.samples = sample_log(gp, [&](double t) {
    return 0.5 * alpha * t + gp.log_phi(t) - 0.5 * gp.log_F(t);
  });
  classify_limit(est);
  est.passes = est.verdict == LimitVerdict::converges_to_zero;
  return est;
}

GammaConditions check_gamma_conditions(const GrowthProfile& gp, double gamma) {
  GammaConditions out;
  const auto ts = geometric_points(std::max(gp.t0(), 1.0), gp.check_cap(), 10);
  std::vector<double> lpsi(ts.size()), lphi(ts.size()), lF(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) {
    lpsi[i] = gp.log_psi(ts[i]);
    lphi[i] = gp.log_phi(ts[i]);
    lF[i] = gp.log_F(ts[i]);
  });
  LipschitzTracker lipschitz(gp.nonlinearity(), gp.t0());
  std::vector<double> lL(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) lL[i] = lipschitz.advance_to(ts[i]);

  auto build = [&](std::string name, auto&& log_q) {
    LimitEstimate est;
    est.quantity = std::move(name);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double y = log_q(i);
      est.samples.push_back({ts[i], std::exp(y), y});
    }
    classify_limit(est);
    return est;
  };
  out.c1 = build("psi^(-gamma) phi", [&](std::size_t i) { return -gamma * lpsi[i] + lphi[i]; });
  out.c1.passes = running_max_stable(out.c1.samples);
  out.c1.note = "limsup finite iff the running maximum grows < 1% over the last two decades";
  out.c2 = build("phi psi^(2-gamma) L", [&](std::size_t i) {
    return lphi[i] + (2.0 - gamma) * lpsi[i] + lL[i];
  });
  out.c2.passes = running_max_stable(out.c2.samples);
  out.c2.note = out.c1.note;
  out.c3 = build("psi^(2(1-gamma)) F", [&](std::size_t i) {
    return 2.0 * (1.0 - gamma) * lpsi[i] + lF[i];
  });
  out.c3.passes = out.c3.verdict == LimitVerdict::diverges;
  return out;
}

double psi_inverse(const GrowthProfile& gp, double d) {
  if (!(d > 0.0)) throw DomainError("psi_inverse requires d > 0");
  const double target = std::log(d);
  double lo = gp.t0();
  const double at_lo = gp.log_psi(lo) - target;
  if (at_lo < -1e-12) throw DomainError("psi_inverse: d exceeds psi(t0)");
  if (at_lo <= 1e-12) return lo;
  double hi = 2.0 * lo;
  double at_hi = gp.log_psi(hi) - target;
  while (at_hi > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!(hi < 1e300)) throw DomainError("psi_inverse: d below the resolvable range");
    at_hi = gp.log_psi(hi) - target;
  }
  if (at_hi == 0.0) return hi;
  auto h = [&](double x) { return gp.log_psi(std::exp(x)) - target; };
  auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::max(1.0, std::abs(a)); };
  std::uintmax_t iterations = 200;
  const double xlo = std::log(lo);
  const double xhi = std::log(hi);
  const auto [a, b] = boost::math::tools::toms748_solve(h, xlo, xhi, h(xlo), at_hi, tol, iterations);
  const double ha = std::abs(h(a));
  const double hb = std::abs(h(b));
  return std::exp(ha <= hb ? a : b);
}

HypothesisReport evaluate_hypotheses(const GrowthProfile& gp, const HypothesisOptions& options) {
  const Nonlinearity& f = gp.nonlinearity();
  HypothesisReport r;
  r.nonlinearity = f.describe();
  r.threshold = gp.threshold();
  r.t0 = gp.t0();
  r.missing_mass = f.missing_mass();
  r.ko = keller_osserman(gp);
  r.phi_convergence = phi_convergence(gp);
  r.shift_monotone =
      check_shift_monotone(f, options.shift_K, options.shift_p, options.window_lo, options.window_hi);
  r.h2_p = options.p;

  auto guarded = [](std::string name, auto&& compute) {
    try {
      return compute();
    } catch (const Error& e) {
      LimitEstimate est;
      est.quantity = std::move(name);
      est.note = e.what();
      return est;
    }
  };
  r.h2 = guarded("t^((p-1)/2) phi / sqrt(F)", [&] { return check_condition_h2(gp, options.p); });

  if (options.exp_alpha) {
    r.exp_alpha = options.exp_alpha;
  } else if (f.exp_rate() > 0.0) {
    r.exp_alpha = f.exp_rate();
  }
  if (r.exp_alpha) {
    r.exp_shift_monotone = check_shift_monotone_exp(f, options.exp_shift_K, *r.exp_alpha,
                                                    options.window_lo, options.window_hi);
    r.exp_variant = guarded("exp(alpha t/2) phi / sqrt(F)",
                            [&] { return check_condition_exp(gp, *r.exp_alpha); });
  }
  if (options.gamma) {
    r.gamma = options.gamma;
    try {
      r.gamma_conditions = check_gamma_conditions(gp, *options.gamma);
    } catch (const Error&) {
      r.gamma_conditions.reset();
    }
  }
  r.theorem_applicable = r.ko.passes && r.shift_monotone.holds && r.h2.passes;
  r.exp_variant_applicable = r.exp_alpha && r.ko.passes && r.exp_shift_monotone->holds &&
                             r.exp_variant->passes;
  return r;
}

}  // namespace blowup
