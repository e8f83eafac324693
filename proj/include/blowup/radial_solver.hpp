#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "blowup/asymptotics.hpp"

namespace blowup {

struct RadialOptions {
  double eps_R = 1e-6;        // stop when psi(U) reaches eps_R
  double switch_d = 1e-3;     // leave r-stepping once psi(U) <= switch_d
  double series_radius = 1e-4;
  double layer_ratio = 1.02;  // ratio of consecutive U nodes past the switch point
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double r_max = 1e3;         // no blow-up before r_max -> SolverError
  double c_max = 1e12;        // upper end of the bracket scan
  double radius_tol = 1e-9;   // |R(c) - 1| target of solve_unit_ball
};

/// Radial profile U(r) of U'' + (N-1)/r U' = f(U), U(0) = c, U'(0) = 0.
///
/// Nodes cover [0, r_stop]. Near the origin the profile is stored against r;
/// past the switch point it is stored against U (r(U) and the normalized
/// slope w = U'/sqrt(2F(U))), which stays regular up to blow-up. Between
/// r_stop and the blow-up radius, U = psi^{-1}(R - r).
class RadialSolution {
 public:
  struct Point {
    double U;
    double Uprime;
    double Usecond;
  };

  int dimension() const noexcept { return N_; }
  double center_value() const noexcept { return c_; }
  /// Blow-up radius estimate R(c); NaN for Dirichlet profiles.
  double blowup_radius_raw() const noexcept { return R_; }
  /// Right end of the domain: R(c), or rho for Dirichlet profiles.
  double domain_radius() const noexcept { return domain_radius_; }
  double r_stop() const noexcept { return r_.back(); }
  const GrowthProfile& profile() const noexcept { return gp_; }

  const std::vector<double>& r() const noexcept { return r_; }
  const std::vector<double>& U() const noexcept { return U_; }
  const std::vector<double>& Uprime() const noexcept { return Uprime_; }

  /// Requires 0 <= r < domain_radius().
  Point eval(double r) const;
  double value(double r) const { return eval(r).U; }
  double derivative(double r) const { return eval(r).Uprime; }

  /// max |U'' + (N-1)/r U' - f(U)| / max(1, |f(U)|) over interval midpoints.
  double residual_max() const;

 private:
  friend struct RadialBuilder;
  explicit RadialSolution(GrowthProfile gp) : gp_(std::move(gp)) {}

  Point eval_inner(std::size_t i, double r) const;
  Point eval_outer(std::size_t j, double r) const;
  Point from_U(double U, double w, double r) const;

  GrowthProfile gp_;
  int N_ = 1;
  double c_ = 0.0;
  double R_ = 0.0;
  double domain_radius_ = 0.0;

  // phase 1: jets of U in r
  std::vector<double> r1_, U1_, V1_, A1_;
  // phase 2: jets of r and w in U
  std::vector<double> U2_, r2_, dr2_, ddr2_, w2_, dw2_;

  std::vector<double> r_, U_, Uprime_;
};

struct ShootResult {
  RadialSolution profile;
  double R;
};

/// Integrate from U(0) = c until psi(U) = eps_R; R = r_stop + psi(U(r_stop)).
ShootResult shoot(const GrowthProfile& gp, int N, double c, const RadialOptions& options = {});

/// Center value with R(c) = 1 by a geometric bracket scan and toms748 in log c.
RadialSolution solve_unit_ball(const GrowthProfile& gp, int N, const RadialOptions& options = {});

/// Radial solution on the ball of radius rho with U(rho) = M.
RadialSolution solve_dirichlet_radial(const GrowthProfile& gp, int N, double rho, double M,
                                      const RadialOptions& options = {});

struct BoundaryLawReport {
  std::vector<std::pair<double, double>> distance_ratio;  // (d, psi(U)/d)
  std::vector<std::pair<double, double>> slope_ratio;     // (d, U'/sqrt F(U))
  std::vector<std::pair<double, double>> power_rate;      // (d, U d^{2/(q-1)}), power families
  double distance_limit = 0.0;
  double slope_limit = 0.0;
  std::optional<double> power_constant;
  std::optional<double> power_constant_expected;
  double distance_max_dev = 0.0;  // max |psi(U)/d - 1| over d <= 1e-2
  double expected_slope = 0.0;    // sqrt 2 from the first integral
  bool constant_two_rejected = false;
  std::string note;
};

/// Diagnostic ratios against d = 1 - r for a unit-ball solution. Limits are
/// the d -> 0 intercepts of least-squares lines over 1e-5 <= d <= 1e-2.
BoundaryLawReport boundary_law_report(const RadialSolution& sol);

}  // namespace blowup
