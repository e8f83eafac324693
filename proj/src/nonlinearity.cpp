#include "blowup/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>


#include "blowup/error.hpp"
#include "quadrature.hpp"

namespace blowup {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_integer(double q) { return q == std::round(q) && q >= 0.0 && q <= 64.0; }

// \int_0^t s^q sin s ds by its Taylor series; accurate for moderate t.
double power_sine_series(double q, double t) {
  const double t2 = t * t;
  double term = std::pow(t, q + 2.0);  // t^{q+2k+2} / (2k+1)!  at k = 0
  double sum = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double contrib = term / (q + 2.0 * k + 2.0);
    sum += (k % 2 == 0) ? contrib : -contrib;
    if (std::abs(contrib) <= 1e-18 * std::abs(sum)) break;
    term *= t2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
  }
  return sum;
}

// Integer exponents: I_n = -t^n cos t + n C_{n-1},  C_n = t^n sin t - n I_{n-1}.
double power_sine_recurrence(int n, double t) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  double I = 1.0 - c;
  double C = s;
  double tn = 1.0;
  for (int k = 1; k <= n; ++k) {
    tn *= t;
    const double I_next = -tn * c + k * C;
    const double C_next = tn * s - k * I;
    I = I_next;
    C = C_next;
  }
  return I;
}

double power_sine_quadrature(double q, double t) {
  auto integrand = [q](double s) { return std::pow(s, q) * std::sin(s); };
  double total = 0.0;
  double a = 0.0;
  for (int k = 1; a < t; ++k) {
    const double b = std::min(t, k * kPi);
    total += detail::integrate_checked(integrand, a, b, 1e-13);
    a = b;
  }
  return total;
}

// \int_0^t s^q e^{is} ds = Gamma(q+1) e^{i pi (q+1)/2} - i e^{it} K,
// K = \int_0^inf (t+iy)^q e^{-y} dy ~ sum_k q(q-1)...(q-k+1) i^k t^{q-k}.
// The series is asymptotic; truncated at its smallest term the error is
// about e^{-t} t^q, far below rounding for t > 50.
double power_sine_contour(double q, double t) {
  std::complex<double> sum = 0.0;
  std::complex<double> term = 1.0;  // relative to t^q
  const std::complex<double> i_over_t(0.0, 1.0 / t);
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 400; ++k) {
    const double size = std::abs(term);
    if (size > previous) break;
    sum += term;
    if (size <= 1e-17 * std::abs(sum)) break;
    previous = size;
    term *= (q - k) * i_over_t;
    if (term == 0.0) break;
  }
  const std::complex<double> K = std::pow(t, q) * sum;
  return std::tgamma(q + 1.0) * std::sin(kPi * (q + 1.0) / 2.0) -
         (std::cos(t) * K.real() - std::sin(t) * K.imag());
}

}  // namespace

double power_sine_integral(double q, double t) {
  if (t < 0.0) throw DomainError("power_sine_integral: t must be >= 0");
  if (t == 0.0) return 0.0;
  if (t <= std::max(2.0, 0.5 * q)) return power_sine_series(q, t);
  if (is_integer(q)) return power_sine_recurrence(static_cast<int>(q), t);
  if (t <= 50.0) return power_sine_quadrature(q, t);
  return power_sine_contour(q, t);
}

Nonlinearity Nonlinearity::power(double q) {
  if (!(q > 0.0)) throw DomainError("Power family requires q > 0");
  return Nonlinearity(PowerFamily{q});
}

Nonlinearity Nonlinearity::oscillatory_power(double q) {
  if (!(q > 0.0)) throw DomainError("OscillatoryPower family requires q > 0");
  return Nonlinearity(OscillatoryPowerFamily{q});
}

Nonlinearity Nonlinearity::exponential(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("Exponential family requires alpha > 0");
  return Nonlinearity(ExponentialFamily{alpha});
}

Nonlinearity Nonlinearity::oscillatory_exponential(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("OscillatoryExponential family requires alpha > 0");
  return Nonlinearity(OscillatoryExponentialFamily{alpha});
}

Nonlinearity Nonlinearity::tabulated(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw DomainError("tabulated nonlinearity needs at least two points");
  TabulatedFamily tab;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0 && !(points[i].first > points[i - 1].first)) {
      throw DomainError("tabulated points must be strictly increasing in t");
    }
    if (!std::isfinite(points[i].first) || !std::isfinite(points[i].second)) {
      throw DomainError("tabulated points must be finite");
    }
    tab.t.push_back(points[i].first);
    tab.f.push_back(points[i].second);
  }
  return Nonlinearity(std::move(tab));
}

Nonlinearity Nonlinearity::load_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open table file " + path.string());
  std::vector<std::pair<double, double>> points;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      std::string compact;
      for (char c : line) {
        if (c != ' ') compact += c;
      }
      if (compact != "t,f") throw ConfigError("table header must be 't,f'", line_no, 1);
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("expected two comma-separated values", line_no, 1);
    }
    try {
      std::size_t used = 0;
      const double t = std::stod(line.substr(0, comma), &used);
      const double f = std::stod(line.substr(comma + 1), &used);
      points.emplace_back(t, f);
    } catch (const std::logic_error&) {
      throw ConfigError("malformed number", line_no, 1);
    }
  }
  if (!header_seen) throw ConfigError("empty table file", 1, 1);
  return tabulated(std::move(points));
}

Nonlinearity Nonlinearity::with_derivative_mode(DerivativeMode mode) const {
  Nonlinearity copy = *this;
  copy.mode_ = mode;
  return copy;
}

std::string Nonlinearity::family_name() const {
  return std::visit(Overloaded{
                        [](const PowerFamily&) { return std::string("power"); },
                        [](const OscillatoryPowerFamily&) {
                          return std::string("oscillatory_power");
                        },
                        [](const ExponentialFamily&) { return std::string("exponential"); },
                        [](const OscillatoryExponentialFamily&) {
                          return std::string("oscillatory_exponential");
                        },
                        [](const TabulatedFamily&) { return std::string("tabulated"); },
                    },
                    family_);
}

std::string Nonlinearity::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const PowerFamily& p) { os << "Power(q=" << p.q << ")"; },
                 [&](const OscillatoryPowerFamily& p) {
                   os << "OscillatoryPower(q=" << p.q << ")";
                 },
                 [&](const ExponentialFamily& e) { os << "Exponential(alpha=" << e.alpha << ")"; },
                 [&](const OscillatoryExponentialFamily& e) {
                   os << "OscillatoryExponential(alpha=" << e.alpha << ")";
                 },
                 [&](const TabulatedFamily& t) { os << "Tabulated(" << t.t.size() << " points)"; },
             },
             family_);
  return os.str();
}

std::pair<double, double> Nonlinearity::domain() const noexcept {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(Overloaded{
                        [](const PowerFamily&) { return std::pair{0.0, inf}; },
                        [](const OscillatoryPowerFamily&) { return std::pair{0.0, inf}; },
                        [](const ExponentialFamily&) { return std::pair{-inf, inf}; },
                        [](const OscillatoryExponentialFamily&) { return std::pair{-inf, inf}; },
                        [](const TabulatedFamily& t) { return std::pair{t.t.front(), t.t.back()}; },
                    },
                    family_);
}

bool Nonlinearity::in_domain(double t) const noexcept {
  const auto [lo, hi] = domain();
  return std::isfinite(t) && t >= lo && t <= hi;
}

void Nonlinearity::require_domain(double t) const {
  if (!in_domain(t)) {
    std::ostringstream os;
    os << describe() << ": t = " << t << " outside the domain";
    throw DomainError(os.str());
  }
}

bool Nonlinearity::missing_mass() const noexcept {
  const auto* tab = std::get_if<TabulatedFamily>(&family_);
  return tab != nullptr && tab->t.front() > 0.0;
}

double Nonlinearity::exp_rate() const noexcept {
  if (const auto* e = std::get_if<ExponentialFamily>(&family_)) return e->alpha;
  if (const auto* e = std::get_if<OscillatoryExponentialFamily>(&family_)) return e->alpha;
  return 0.0;
}

double Nonlinearity::oscillation_period() const noexcept {
  if (std::holds_alternative<OscillatoryPowerFamily>(family_) ||
      std::holds_alternative<OscillatoryExponentialFamily>(family_)) {
    return 2.0 * kPi;
  }
  return 0.0;
}

bool Nonlinearity::is_power_like() const noexcept {
  return std::holds_alternative<PowerFamily>(family_) ||
         std::holds_alternative<OscillatoryPowerFamily>(family_);
}

ScanGrid Nonlinearity::scan_grid() const noexcept {
  ScanGrid grid;
  const double period = oscillation_period();
  if (period > 0.0) grid.max_step = period / 64.0;
  return grid;
}

double Nonlinearity::value(double t) const {
  require_domain(t);
  return std::visit(
      Overloaded{
          [&](const PowerFamily& p) { return std::pow(t, p.q); },
          [&](const OscillatoryPowerFamily& p) { return std::pow(t, p.q) * (1.0 + std::sin(t)); },
          [&](const ExponentialFamily& e) { return std::exp(e.alpha * t); },
          [&](const OscillatoryExponentialFamily& e) {
            return std::exp(e.alpha * t) * (1.0 + std::sin(t));
          },
          [&](const TabulatedFamily& tab) {
            const auto it = std::upper_bound(tab.t.begin(), tab.t.end(), t);
            std::size_t i = static_cast<std::size_t>(it - tab.t.begin());
            if (i == 0) i = 1;
            if (i >= tab.t.size()) i = tab.t.size() - 1;
            const double w = (t - tab.t[i - 1]) / (tab.t[i] - tab.t[i - 1]);
            return (1.0 - w) * tab.f[i - 1] + w * tab.f[i];
          },
      },
      family_);
}

double Nonlinearity::closed_derivative(double t) const {
  return std::visit(
      Overloaded{
          [&](const PowerFamily& p) { return t == 0.0 ? 0.0 : p.q * std::pow(t, p.q - 1.0); },
          [&](const OscillatoryPowerFamily& p) {
            if (t == 0.0) return 0.0;
            return p.q * std::pow(t, p.q - 1.0) * (1.0 + std::sin(t)) +
                   std::pow(t, p.q) * std::cos(t);
          },
          [&](const ExponentialFamily& e) { return e.alpha * std::exp(e.alpha * t); },
          [&](const OscillatoryExponentialFamily& e) {
            return std::exp(e.alpha * t) * (e.alpha * (1.0 + std::sin(t)) + std::cos(t));
          },
          [&](const TabulatedFamily&) { return fd_derivative(t); },
      },
      family_);
}

double Nonlinearity::fd_derivative(double t) const {
  const double h = std::max(1e-6, 1e-8 * std::abs(t));
  const bool left = in_domain(t - h);
  const bool right = in_domain(t + h);
  if (left && right) return (value(t + h) - value(t - h)) / (2.0 * h);
  if (right) return (value(t + h) - value(t)) / h;
  if (left) return (value(t) - value(t - h)) / h;
  throw DomainError("finite-difference step leaves the domain");
}

double Nonlinearity::derivative(double t) const {
  require_domain(t);
  return mode_ == DerivativeMode::closed_form ? closed_derivative(t) : fd_derivative(t);
}

double Nonlinearity::antiderivative(double t) const {
  require_domain(t);
  return std::visit(
      Overloaded{
          [&](const PowerFamily& p) { return std::pow(t, p.q + 1.0) / (p.q + 1.0); },
          [&](const OscillatoryPowerFamily& p) {
            return std::pow(t, p.q + 1.0) / (p.q + 1.0) + power_sine_integral(p.q, t);
          },
          [&](const ExponentialFamily& e) { return std::expm1(e.alpha * t) / e.alpha; },
          [&](const OscillatoryExponentialFamily& e) {
            const double a = e.alpha;
            // \int_0^t e^{as} sin s ds = (e^{at}(a sin t - cos t) + 1) / (a^2 + 1)
            return std::expm1(a * t) / a +
                   (std::exp(a * t) * (a * std::sin(t) - std::cos(t)) + 1.0) / (a * a + 1.0);
          },
          [&](const TabulatedFamily& tab) {
            // exact integral of the piecewise-linear interpolant from t_min
            double F = 0.0;
            for (std::size_t i = 1; i < tab.t.size(); ++i) {
              const double a = tab.t[i - 1];
              if (a >= t) break;
              const double b = std::min(tab.t[i], t);
              const double fb = value(b);
              F += 0.5 * (tab.f[i - 1] + fb) * (b - a);
            }
            return F;
          },
      },
      family_);
}

double Nonlinearity::antiderivative_error_bound(double t) const {
  const auto* tab = std::get_if<TabulatedFamily>(&family_);
  if (tab == nullptr) return 0.0;
  require_domain(t);
  // trapezoid bound h^3/12 max|f''| with f'' from second differences of the table
  double bound = 0.0;
  const std::size_t n = tab->t.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (tab->t[i - 1] >= t) break;
    const double h = tab->t[i] - tab->t[i - 1];
    double curvature = 0.0;
    for (std::size_t j : {i - 1, i}) {
      if (j == 0 || j + 1 >= n) continue;
      const double hl = tab->t[j] - tab->t[j - 1];
      const double hr = tab->t[j + 1] - tab->t[j];
      const double second = 2.0 *
                            ((tab->f[j + 1] - tab->f[j]) / hr - (tab->f[j] - tab->f[j - 1]) / hl) /
                            (hl + hr);
      curvature = std::max(curvature, std::abs(second));
    }
    bound += h * h * h / 12.0 * curvature;
  }
  return bound;
}

double Nonlinearity::log_antiderivative(double t) const {
  const double rate = exp_rate();
  if (rate == 0.0) {
    require_domain(t);
    if (const auto* p = std::get_if<PowerFamily>(&family_)) {
      return (p->q + 1.0) * std::log(t) - std::log(p->q + 1.0);
    }
    return std::log(antiderivative(t));
  }
  return rate * t + log_scaled_antiderivative(t);
}

double Nonlinearity::log_scaled_antiderivative(double t) const {
  require_domain(t);
  return std::visit(
      Overloaded{
          [&](const ExponentialFamily& e) {
            const double at = e.alpha * t;
            if (at < 30.0) return std::log(std::expm1(at) / e.alpha) - at;
            return std::log(-std::expm1(-at) / e.alpha);
          },
          [&](const OscillatoryExponentialFamily& e) {
            const double a = e.alpha;
            if (a * t < 30.0) return std::log(antiderivative(t)) - a * t;
            const double bracket = 1.0 / a + (a * std::sin(t) - std::cos(t)) / (a * a + 1.0);
            const double rest = std::exp(-a * t) * (1.0 / (a * a + 1.0) - 1.0 / a);
            return std::log(bracket + rest);
          },
          [&](const auto&) { return log_antiderivative(t); },
      },
      family_);
}

NonlinearityValue Nonlinearity::eval(double t) const {
  return NonlinearityValue{value(t), derivative(t), antiderivative(t)};
}

double Nonlinearity::scaled_value(double t) const {
  require_domain(t);
  if (std::holds_alternative<ExponentialFamily>(family_)) return 1.0;
  if (std::holds_alternative<OscillatoryExponentialFamily>(family_)) return 1.0 + std::sin(t);
  return value(t);
}

double Nonlinearity::scaled_derivative(double t) const {
  require_domain(t);
  const double rate = exp_rate();
  if (rate == 0.0) return derivative(t);
  if (mode_ == DerivativeMode::finite_difference) {
    const double h = std::max(1e-6, 1e-8 * std::abs(t));
    return (scaled_value(t + h) * std::exp(rate * h) - scaled_value(t - h) * std::exp(-rate * h)) /
           (2.0 * h);
  }
  if (std::holds_alternative<ExponentialFamily>(family_)) return rate;
  return rate * (1.0 + std::sin(t)) + std::cos(t);
}

double Nonlinearity::log_abs_derivative(double t) const {
  const double rate = exp_rate();
  if (rate == 0.0) return std::log(std::abs(derivative(t)));
  return rate * t + std::log(std::abs(scaled_derivative(t)));
}

double positivity_threshold(const Nonlinearity& f, double scan_cap) {
  if (const auto* tab = std::get_if<TabulatedFamily>(&f.family())) {
    std::optional<std::size_t> candidate;
    for (std::size_t i = 0; i < tab->t.size(); ++i) {
      if (tab->f[i] < 0.0) {
        candidate.reset();
      } else if (tab->f[i] > 0.0 && !candidate) {
        candidate = i;
      }
    }
    if (!candidate || tab->t[*candidate] <= 0.0) {
      throw DomainError("not positive for large values at this resolution");
    }
    return tab->t[*candidate];
  }

  const double start = std::max(1e-3, f.domain().first);
  std::optional<double> candidate;
  double last_negative = -1.0;
  f.scan_grid().for_each(start, scan_cap, [&](double t) {
    const double v = f.scaled_value(t);
    if (v < 0.0) {
      candidate.reset();
      last_negative = t;
    } else if (v > 0.0 && !candidate) {
      candidate = t;
    }
  });
  if (!candidate || last_negative >= scan_cap / 10.0) {
    throw DomainError("not positive for large values at this resolution");
  }
  return *candidate;
}

namespace {

template <class Slope>
MonotonicityVerdict scan_monotone(const Nonlinearity& f, double t_lo, double t_hi, Slope slope) {
  MonotonicityVerdict v;
  v.window_lo = t_lo;
  v.window_hi = t_hi;
  double min_slope = std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
  double argmin = t_lo;
  std::size_t count = 0;
  f.scan_grid().for_each(t_lo, t_hi, [&](double t) {
    const double g = slope(t);
    ++count;
    if (g < min_slope) {
      min_slope = g;
      argmin = t;
    }
    max_abs = std::max(max_abs, std::abs(g));
  });
  v.samples = count;
  v.min_slope = min_slope;
  v.tolerance = 1e-12 * max_abs;
  v.holds = min_slope >= -v.tolerance;
  if (!v.holds) v.witness = argmin;
  return v;
}

}  // namespace

MonotonicityVerdict check_shift_monotone(const Nonlinearity& f, double K, double p, double t_lo,
                                         double t_hi) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw DomainError("window must satisfy 0 < t_lo < t_hi");
  if (!(p >= 1.0)) throw DomainError("shift exponent p must be >= 1");
  if (!(K >= 0.0)) throw DomainError("shift constant K must be >= 0");
  const double rate = f.exp_rate();
  auto v = scan_monotone(f, t_lo, t_hi, [&](double t) {
    const double shift = K * p * std::pow(t, p - 1.0);
    return f.scaled_derivative(t) + (rate == 0.0 ? shift : shift * std::exp(-rate * t));
  });
  v.shift_K = K;
  v.shift_p = p;
  return v;
}

MonotonicityVerdict check_shift_monotone_exp(const Nonlinearity& f, double K, double beta,
                                             double t_lo, double t_hi) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw DomainError("window must satisfy 0 < t_lo < t_hi");
  if (!(beta > 0.0)) throw DomainError("exponential shift rate must be > 0");
  if (!(K >= 0.0)) throw DomainError("shift constant K must be >= 0");
  const double rate = f.exp_rate();
  auto v = scan_monotone(f, t_lo, t_hi, [&](double t) {
    return f.scaled_derivative(t) + K * beta * std::exp((beta - rate) * t);
  });
  v.shift_K = K;
  v.shift_p = beta;
  v.exponential_shift = true;
  return v;
}

double lipschitz_envelope(const Nonlinearity& f, double t0, double t) {
  if (!(t >= t0)) throw DomainError("lipschitz_envelope requires t >= t0");
  double best = 0.0;
  f.scan_grid().for_each(t0, t, [&](double s) { best = std::max(best, std::abs(f.derivative(s))); });
  return best;
}

LipschitzTracker::LipschitzTracker(const Nonlinearity& f, double t0)
    : f_(&f), grid_(f.scan_grid()), t_(t0), log_max_(f.log_abs_derivative(t0)) {}

double LipschitzTracker::advance_to(double t) {
  if (t < t_) throw DomainError("LipschitzTracker must advance monotonically");
  if (t == t_) return log_max_;
  grid_.for_each(t_, t, [&](double s) { log_max_ = std::max(log_max_, f_->log_abs_derivative(s)); });
  t_ = t;
  return log_max_;
}

}  // namespace blowup
