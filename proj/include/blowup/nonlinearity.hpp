#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "blowup/sampling.hpp"

namespace blowup {

struct PowerFamily {
  double q;
};
struct OscillatoryPowerFamily {
  double q;
};
struct ExponentialFamily {
  double alpha;
};
struct OscillatoryExponentialFamily {
  double alpha;
};
struct TabulatedFamily {
  std::vector<double> t;
  std::vector<double> f;
};

enum class DerivativeMode { closed_form, finite_difference };

/// f, f' and F = \int_0^t f at one point.
struct NonlinearityValue {
  double f;
  double f_prime;
  double F;
};

/// Result of a shifted-monotonicity scan of f(t) + K t^p (or f(t) + K e^{beta t}).
struct MonotonicityVerdict {
  bool holds = true;
  double shift_K = 0.0;
  double shift_p = 1.0;
  std::optional<double> witness;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double min_slope = 0.0;  // most negative sampled g' (scaled units for exponential families)
  double tolerance = 0.0;
  std::size_t samples = 0;
  bool exponential_shift = false;
};

/// The nonlinearity f of Delta u = f(u).
///
/// Values that overflow for exponential families are available in scaled
/// form: `scaled_value(t) = f(t) e^{-rate t}` with `rate = exp_rate()`, and
/// `log_antiderivative` returns log F without forming F.
class Nonlinearity {
 public:
  using Family = std::variant<PowerFamily, OscillatoryPowerFamily, ExponentialFamily,
                              OscillatoryExponentialFamily, TabulatedFamily>;

  static Nonlinearity power(double q);
  static Nonlinearity oscillatory_power(double q);
  static Nonlinearity exponential(double alpha);
  static Nonlinearity oscillatory_exponential(double alpha);
  static Nonlinearity tabulated(std::vector<std::pair<double, double>> points);
  /// Two-column CSV with header `t,f`.
  static Nonlinearity load_table(const std::filesystem::path& path);

  Nonlinearity with_derivative_mode(DerivativeMode mode) const;

  const Family& family() const noexcept { return family_; }
  DerivativeMode derivative_mode() const noexcept { return mode_; }
  std::string family_name() const;
  std::string describe() const;

  NonlinearityValue eval(double t) const;
  double value(double t) const;
  double derivative(double t) const;
  double antiderivative(double t) const;
  /// log F(t); finite wherever F(t) > 0, including where F overflows.
  double log_antiderivative(double t) const;
  /// log F(t) - exp_rate() t; bounded for exponential families.
  double log_scaled_antiderivative(double t) const;

  /// alpha for exponential families, 0 otherwise.
  double exp_rate() const noexcept;
  double scaled_value(double t) const;
  double scaled_derivative(double t) const;
  /// log|f'(t)|, overflow safe.
  double log_abs_derivative(double t) const;

  /// 2 pi for sin-modulated families, 0 otherwise.
  double oscillation_period() const noexcept;
  bool is_power_like() const noexcept;
  bool in_domain(double t) const noexcept;
  /// Closed interval on which f may be evaluated.
  std::pair<double, double> domain() const noexcept;
  /// True when F misses the mass on [0, t_min] of a table starting above 0.
  bool missing_mass() const noexcept;
  /// Trapezoid error bound for tabulated F (0 for closed-form families).
  double antiderivative_error_bound(double t) const;

  /// Default scan grid: ratio 1 + 1e-3, at least 64 points per oscillation period.
  ScanGrid scan_grid() const noexcept;

 private:
  explicit Nonlinearity(Family family) : family_(std::move(family)) {}
  void require_domain(double t) const;
  double closed_derivative(double t) const;
  double fd_derivative(double t) const;

  Family family_;
  DerivativeMode mode_ = DerivativeMode::closed_form;
};

/// \int_0^t s^q sin(s) ds for real q > -1. Series for small t, recurrence
/// for integer q, quadrature or the asymptotic contour series otherwise.
double power_sine_integral(double q, double t);

/// Smallest sampled a with f(a) > 0 and f >= 0 on the sampled (a, scan_cap].
/// Grid-resolution dependent. Throws DomainError when a sign change remains.
double positivity_threshold(const Nonlinearity& f, double scan_cap = 1e4);

/// Scans g'(t) = f'(t) + K p t^{p-1} on the dense scan grid of [t_lo, t_hi].
MonotonicityVerdict check_shift_monotone(const Nonlinearity& f, double K, double p,
                                         double t_lo, double t_hi);

/// Same with the exponential shift f(t) + K e^{beta t}.
MonotonicityVerdict check_shift_monotone_exp(const Nonlinearity& f, double K, double beta,
                                             double t_lo, double t_hi);

/// max |f'| over the dense scan grid of [t0, t].
double lipschitz_envelope(const Nonlinearity& f, double t0, double t);

/// Running maximum of log|f'| that can be advanced monotonically in t.
class LipschitzTracker {
 public:
  LipschitzTracker(const Nonlinearity& f, double t0);
  /// log L(t) = log max_{[t0, t]} |f'|. Requires t >= the previous argument.
  double advance_to(double t);
  double log_value() const noexcept { return log_max_; }

 private:
  const Nonlinearity* f_;
  ScanGrid grid_;
  double t_;
  double log_max_;
};

}  // namespace blowup
