#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "blowup/radial_solver.hpp"

namespace blowup {

/// Polar grid on the disk of radius `radius`: rings r_0 = 0 < ... < r_{n_r} = radius,
/// uniform angles theta_j = 2 pi j / n_theta. The center is one shared unknown.
class PolarGrid {
 public:
  static PolarGrid uniform(int n_r, int n_theta, double radius = 1.0);
  /// Nodes equally spaced in s(r) = blend r/radius + (1 - blend) (psi(U(0)) - psi(U(r))) / (psi(U(0)) - psi(U(radius))),
  /// where U is the target radial profile (defined on [0, radius]).
  static PolarGrid graded(int n_r, int n_theta, double radius, const RadialSolution& target, double blend = 0.5);

  int n_r() const noexcept { return n_r_; }
  int n_theta() const noexcept { return n_theta_; }
  double radius() const noexcept { return r_.back(); }
  const std::vector<double>& r() const noexcept { return r_; }
  double theta(int j) const;
  double dtheta() const;

  /// Same map with n_r and n_theta doubled; every node of *this is a node of the result.
  PolarGrid refined() const;

 private:
  PolarGrid() = default;
  int n_r_ = 0;
  int n_theta_ = 0;
  std::vector<double> r_;
  std::vector<double> s_nodes_;  // mapping parameter at the nodes, for refinement
  std::vector<double> s_table_, r_table_;
};

/// Boundary data M (1 + eps_b cos(m (theta - phase))).
struct BoundaryData {
  double M = 20.0;
  double eps_b = 0.0;
  int m = 1;
  double phase = 0.0;
  double at(double theta) const;
};

struct NewtonOptions {
  double rel_tol = 1e-10;      // stop when max |residual| <= rel_tol * max(1, f(M))
  int max_iterations = 60;
  double damping_floor = 0x1p-20;
  double linear_rel_tol = 1e-12;
};


class DiskSolution {
 public:
  const PolarGrid& grid() const noexcept { return grid_; }
  const BoundaryData& data() const noexcept { return data_; }
  double boundary_level() const noexcept { return data_.M; }
  double eps_b() const noexcept { return data_.eps_b; }
  int mode() const noexcept { return data_.m; }
  double newton_residual() const noexcept { return residual_; }
  double residual_tolerance() const noexcept { return tolerance_; }
  const std::vector<double>& residual_history() const noexcept { return history_; }

  /// Value at ring i (0 = center, n_r = boundary data) and angle index j.
  double at(int i, int j) const { return u_[static_cast<std::size_t>(i) * grid_.n_theta() + j]; }
  const std::vector<double>& values() const noexcept { return u_; }

  /// Interpolated value at a Cartesian point inside the disk: periodic cubic in
  /// theta, then monotone piecewise cubic Hermite along the diameter.
  double value(double x, double y) const;
  /// Same point with four-point Lagrange interpolation in r; the difference to
  /// value() serves as the interpolation error estimate.
  double value_lagrange(double x, double y) const;

  /// Pointwise residual of the discrete system max |L u - f(u)|.
  double residual_max() const;

 private:
  friend struct DiskBuilder;
  friend DiskSolution solve_disk(const GrowthProfile&, const BoundaryData&, const PolarGrid&,
                                 const NewtonOptions&);
  DiskSolution(PolarGrid grid, BoundaryData data, const Nonlinearity& f)
      : grid_(std::move(grid)), data_(data), f_(f) {}

  template <class RadialInterp>
  double interpolate(double x, double y, RadialInterp&& radial) const;

  PolarGrid grid_;
  BoundaryData data_;
  Nonlinearity f_;
  std::vector<double> u_;
  double residual_ = 0.0;
  double tolerance_ = 0.0;
  std::vector<double> history_;
};

/// Damped Newton on the polar five-point discretization of Delta u = f(u)
/// with Dirichlet data. Initial guess: the radial Dirichlet profile U for M,
/// multiplied by 1 + eps_b cos(m (theta - phase)) (r / radius)^m.
DiskSolution solve_disk(const GrowthProfile& gp, const BoundaryData& data, const PolarGrid& grid,
                        const NewtonOptions& options = {});
DiskSolution solve_disk(const GrowthProfile& gp, double M, double eps_b, int m, const PolarGrid& grid,
                        const NewtonOptions& options = {});

struct SymmetryDefect {
  std::vector<std::pair<double, double>> by_radius;  // (r_i, max_j u - min_j u)
  double global = 0.0;  // max over r <= 0.9 radius, linear between rings
};
SymmetryDefect symmetry_defect(const DiskSolution& sol);

struct MovingPlaneResult {
  std::vector<std::pair<double, double>> min_by_lambda;  // (lambda, min over Sigma_lambda of u - u_lambda)
  double interpolation_bound = 0.0;
};
/// Sigma_lambda = {x in disk : x_1 > lambda * radius}, sampled on a Cartesian
/// lattice with half the mean radial spacing.
MovingPlaneResult moving_plane_min(const DiskSolution& sol, const std::vector<double>& lambdas);

struct SlabResult {
  std::size_t region_points = 0;  // samples with u < u_lambda
  std::size_t violations = 0;     // of x_1 - lambda <= C H(x)
  double worst_margin = 0.0;      // min of C H - (x_1 - lambda); +inf when the region is empty
  double max_ratio = 0.0;         // max of (x_1 - lambda) / H, the smallest admissible C
};
/// H(x) = phi(U_lambda(x)) / sqrt(F(U_lambda(x))) with U_lambda(x) = U(|x_lambda|).
SlabResult slab_containment(const DiskSolution& sol, const RadialSolution& radial, double lambda, double C);

struct ComparisonResult {
  std::vector<std::pair<double, double>> ratio_by_radius;  // (r_i, max_j (U - u)/phi(U))
  double max_ratio = 0.0;
  double min_gap = 0.0;  // min over nodes of U - u
  bool below = true;     // u <= U + tolerance everywhere
};
/// Requires the disk radius below the blow-up radius of `radial` and the
/// boundary data not above the trace of U. `tolerance` is absolute.
ComparisonResult radial_comparison(const DiskSolution& sol, const RadialSolution& radial,
                                   double tolerance = 1e-8);

struct GradientSample {
  double d;           // radius - r_i
  double tangential;  // max_j |u_theta| / r
  double radial;      // min_j u_r
};
std::vector<GradientSample> tangential_radial_diagnostic(const DiskSolution& sol);
/// Linear interpolation of the per-ring diagnostic at radius r.
GradientSample gradient_at(const std::vector<GradientSample>& diag, double radius, double r);

struct SymmetryReport {
  std::vector<std::pair<double, double>> defect_by_radius;
  double global_defect = 0.0;
  std::vector<std::pair<double, double>> movingplane_min;
  double interpolation_bound = 0.0;
  double radial_monotonicity_min = 0.0;  // min u_r over 0.05 < r/radius < 0.95
  std::vector<std::pair<double, double>> comparison_ratio;  // (r_i, max_j (U - u)/phi(U))
  std::optional<double> comparison_constant;
  std::vector<GradientSample> gradient_diag;
};
SymmetryReport symmetry_report(const DiskSolution& sol, const std::vector<double>& lambdas,
                               const RadialSolution* radial = nullptr);

}  // namespace blowup
