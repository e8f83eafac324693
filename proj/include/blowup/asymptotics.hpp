#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blowup/nonlinearity.hpp"

namespace blowup {

struct GrowthOptions {
  std::optional<double> t0;  // default: 10 * positivity threshold
  double quad_rel_tol = 1e-9;
  double tail_cap = 1e8;
  double check_cap = 1e6;  // upper end of the condition-check grids
};

/// Integrands of the two improper integrals: F^{-1/2} (psi) and F^{-1} (phi).
enum class Kernel { inv_sqrt_F, inv_F };

/// \int_t^inf F^{-k} = exp(log_scale) * (raw + tail).
///
/// `raw` covers [t, truncation]; `tail` is the fitted extrapolation past the
/// truncation point (0 when the integrand became negligible first).
struct ImproperIntegral {
  double log_scale = 0.0;
  double raw = 0.0;
  double tail = 0.0;
  double tail_spread = 0.0;  // |difference| of the two tail fits
  double truncation = 0.0;
  bool extrapolated = false;

  double value() const;
  double log_value() const;
};

/// f together with the psi / phi calculus built on F.
///
/// psi(t) = (1/sqrt 2) \int_t^inf ds / sqrt F,  phi(t) = \int_t^inf ds / F.
/// For oscillatory power families the constructor tabulates both integrals
/// over pi-cells; the table is immutable and shared between copies.
class GrowthProfile {
 public:
  explicit GrowthProfile(Nonlinearity f, GrowthOptions options = {});

  const Nonlinearity& nonlinearity() const noexcept { return f_; }
  double threshold() const noexcept { return threshold_; }
  double t0() const noexcept { return t0_; }
  double quad_rel_tol() const noexcept { return options_.quad_rel_tol; }
  double tail_cap() const noexcept { return options_.tail_cap; }
  double check_cap() const noexcept { return check_cap_; }
  const GrowthOptions& options() const noexcept { return options_; }

  double log_F(double t) const { return f_.log_antiderivative(t); }

  /// Requires t >= t0. Throws DivergenceError when the integral diverges.
  double psi(double t) const;
  double log_psi(double t) const;
  ImproperIntegral psi_integral(double t) const;

  /// Constant phi(t0) for t <= t0.
  double phi(double t) const;
  double log_phi(double t) const;
  ImproperIntegral phi_integral(double t) const;

  /// log \int_a^b F^{-k} for t0 <= a < b.
  double log_segment(Kernel kernel, double a, double b) const;

  struct Table;

 private:
  ImproperIntegral improper(Kernel kernel, double t) const;
  double upper_limit() const;

  Nonlinearity f_;
  GrowthOptions options_;
  double threshold_ = 0.0;
  double t0_ = 0.0;
  double check_cap_ = 0.0;
  std::shared_ptr<const Table> table_;
};

enum class LimitVerdict { converges_to_zero, converges_positive, diverges, inconclusive };

std::string to_string(LimitVerdict v);

struct LimitSample {
  double t;
  double value;      // may underflow to 0 or overflow to inf
  double log_value;  // always finite
};

/// Numerical verdict on the behaviour of a sampled quantity as t grows.
struct LimitEstimate {
  std::string quantity;
  LimitVerdict verdict = LimitVerdict::inconclusive;
  bool passes = false;  // the hypothesis the estimate stands for holds
  std::vector<LimitSample> samples;
  double fitted_slope = 0.0;  // d log(value) / d log t over the last decade
  bool semilog = false;       // slope was fitted against t; reported times t_last
  double threshold = 0.0;     // relative level the last sample must reach
  std::string note;
};

/// Keller-Osserman: convergence of \int^inf ds / sqrt F from doubling increments.
LimitEstimate keller_osserman(const GrowthProfile& gp);
/// Same test for \int^inf ds / F.
LimitEstimate phi_convergence(const GrowthProfile& gp);

/// Q(t) = t^{(p-1)/2} phi(t) / sqrt F(t) -> 0.
LimitEstimate check_condition_h2(const GrowthProfile& gp, double p);
/// Q(t) = e^{alpha t / 2} phi(t) / sqrt F(t) -> 0, fitted against t.
LimitEstimate check_condition_exp(const GrowthProfile& gp, double alpha);

struct GammaConditions {
  LimitEstimate c1;  // limsup psi^{-gamma} phi < inf
  LimitEstimate c2;  // limsup phi psi^{2-gamma} L < inf
  LimitEstimate c3;  // psi^{2(1-gamma)} F -> inf
  bool all_pass() const { return c1.passes && c2.passes && c3.passes; }
};
GammaConditions check_gamma_conditions(const GrowthProfile& gp, double gamma);

/// t with psi(t) = d, |psi(t) - d| <= 1e-10 d. Requires 0 < d <= psi(t0).
double psi_inverse(const GrowthProfile& gp, double d);

struct HypothesisOptions {
  double shift_K = 1.0;
  double shift_p = 5.0;
  double window_lo = 1e2;
  double window_hi = 1e6;
  double p = 5.0;
  std::optional<double> exp_alpha;  // default: exp_rate() of exponential families
  double exp_shift_K = 1.0;
  std::optional<double> gamma;
};

struct HypothesisReport {
  std::string nonlinearity;
  double threshold = 0.0;
  double t0 = 0.0;
  LimitEstimate ko;
  LimitEstimate phi_convergence;
  MonotonicityVerdict shift_monotone;
  LimitEstimate h2;
  double h2_p = 0.0;
  std::optional<MonotonicityVerdict> exp_shift_monotone;
  std::optional<LimitEstimate> exp_variant;
  std::optional<double> exp_alpha;
  std::optional<GammaConditions> gamma_conditions;
  std::optional<double> gamma;
  bool missing_mass = false;
  bool theorem_applicable = false;
  bool exp_variant_applicable = false;
};

HypothesisReport evaluate_hypotheses(const GrowthProfile& gp, const HypothesisOptions& options = {});

}  // namespace blowup
