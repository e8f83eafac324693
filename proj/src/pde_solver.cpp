#include "blowup/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "blowup/error.hpp"
#include "blowup/parallel.hpp"
#include "pchip.hpp"

namespace blowup {

using std::numbers::pi;

namespace {

// r(s) from a monotone table by piecewise cubic Hermite interpolation.
double table_lookup(const std::vector<double>& s, const std::vector<double>& r, double x) {
  const std::size_t n = s.size();
  if (x <= s.front()) return r.front();
  if (x >= s.back()) return r.back();
  const std::size_t k = static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), x) - s.begin()) - 1;
  auto secant = [&](std::size_t i) { return (r[i + 1] - r[i]) / (s[i + 1] - s[i]); };
  auto slope = [&](std::size_t i) {
    if (n == 2) return secant(0);
    if (i == 0) return detail::pchip_end_slope(s[1] - s[0], s[2] - s[1], secant(0), secant(1));
    if (i == n - 1)
      return detail::pchip_end_slope(s[n - 1] - s[n - 2], s[n - 2] - s[n - 3], secant(n - 2), secant(n - 3));
    return detail::pchip_slope(s[i] - s[i - 1], s[i + 1] - s[i], secant(i - 1), secant(i));
  };
  return detail::cubic_hermite(s[k], r[k], slope(k), s[k + 1], r[k + 1], slope(k + 1), x);
}

void check_grid_sizes(int n_r, int n_theta, double radius) {
  if (n_r < 4 || n_theta < 4) throw DomainError("polar grid needs n_r >= 4 and n_theta >= 4");
  if (!(radius > 0.0)) throw DomainError("polar grid radius must be positive");
}

}  // namespace

PolarGrid PolarGrid::uniform(int n_r, int n_theta, double radius) {
  check_grid_sizes(n_r, n_theta, radius);
  PolarGrid g;
  g.n_r_ = n_r;
  g.n_theta_ = n_theta;
  g.s_table_ = {0.0, 1.0};
  g.r_table_ = {0.0, radius};
  for (int i = 0; i <= n_r; ++i) {
    const double s = static_cast<double>(i) / n_r;
    g.s_nodes_.push_back(s);
    g.r_.push_back(i == n_r ? radius : radius * s);
  }
  return g;
}

PolarGrid PolarGrid::graded(int n_r, int n_theta, double radius, const RadialSolution& target, double blend) {
  check_grid_sizes(n_r, n_theta, radius);
  if (!(blend > 0.0 && blend <= 1.0)) throw DomainError("grading blend must lie in (0, 1]");
  const GrowthProfile& gp = target.profile();
  auto psi_at = [&](double r) { return gp.psi(std::max(target.value(r), gp.t0())); };
  constexpr int kTable = 1024;
  std::vector<double> rt(kTable + 1), pt(kTable + 1);
  for (int k = 0; k <= kTable; ++k) rt[k] = radius * static_cast<double>(k) / kTable;
  rt[kTable] = radius;
  parallel_for(rt.size(), [&](std::size_t k) { pt[k] = psi_at(std::min(rt[k], target.r_stop())); });
  const double span = pt.front() - pt.back();
  PolarGrid g;
  g.n_r_ = n_r;
  g.n_theta_ = n_theta;
  g.s_table_.resize(rt.size());
  for (std::size_t k = 0; k < rt.size(); ++k) {
    const double w = span > 0.0 ? (pt.front() - pt[k]) / span : rt[k] / radius;
    g.s_table_[k] = blend * rt[k] / radius + (1.0 - blend) * w;
  }
  for (std::size_t k = 1; k < rt.size(); ++k) {
    if (!(g.s_table_[k] > g.s_table_[k - 1])) throw SolverError("grading map is not increasing");
  }
  g.s_table_.back() = 1.0;
  g.r_table_ = rt;
  for (int i = 0; i <= n_r; ++i) {
    const double s = static_cast<double>(i) / n_r;
    g.s_nodes_.push_back(s);
    g.r_.push_back(i == 0 ? 0.0 : i == n_r ? radius : table_lookup(g.s_table_, g.r_table_, s));
  }
  return g;
}

double PolarGrid::theta(int j) const { return 2.0 * pi * j / n_theta_; }
double PolarGrid::dtheta() const { return 2.0 * pi / n_theta_; }

PolarGrid PolarGrid::refined() const {
  PolarGrid g;
  g.n_r_ = 2 * n_r_;
  g.n_theta_ = 2 * n_theta_;
  g.s_table_ = s_table_;
  g.r_table_ = r_table_;
  for (int i = 0; i <= g.n_r_; ++i) {
    const double s = static_cast<double>(i) / g.n_r_;
    g.s_nodes_.push_back(s);
    if (i % 2 == 0) {
      g.r_.push_back(r_[i / 2]);
    } else {
      g.r_.push_back(table_lookup(s_table_, r_table_, s));
    }
  }
  return g;
}

double BoundaryData::at(double theta) const { return M * (1.0 + eps_b * std::cos(m * (theta - phase))); }

// ---------------------------------------------------------------------------
// Discrete operator

namespace {

struct Stencil {
  double inner, center, outer;  // radial coefficients on u_{i-1}, u_i, u_{i+1}
  double angular;               // 1 / (r^2 dtheta^2)
};

std::vector<Stencil> stencils(const PolarGrid& g) {
  std::vector<Stencil> st(g.n_r());
  const auto& r = g.r();
  const double dt = g.dtheta();
  for (int i = 1; i < g.n_r(); ++i) {
    const double hm = r[i] - r[i - 1];
    const double hp = r[i + 1] - r[i];
    const double s = hm + hp;
    // second derivative and centered first derivative on a nonuniform grid
    const double am = 2.0 / (hm * s), ap = 2.0 / (hp * s), a0 = -2.0 / (hm * hp);
    const double bm = -hp / (hm * s), bp = hm / (hp * s), b0 = (hp - hm) / (hm * hp);
    st[i] = {am + bm / r[i], a0 + b0 / r[i], ap + bp / r[i], 1.0 / (r[i] * r[i] * dt * dt)};
  }
  return st;
}

}  // namespace

struct DiskBuilder {
  const PolarGrid& g;
  const Nonlinearity& f;
  std::vector<Stencil> st;
  int nt;
  int nr;

  DiskBuilder(const PolarGrid& grid, const Nonlinearity& fn)
      : g(grid), f(fn), st(stencils(grid)), nt(grid.n_theta()), nr(grid.n_r()) {}

  std::size_t unknowns() const { return 1 + static_cast<std::size_t>(nr - 1) * nt; }
  std::size_t index(int i, int j) const { return 1 + static_cast<std::size_t>(i - 1) * nt + j; }

  // Residual L u - f(u) at unknown k, reading the full field u (rings 0..nr).
  void residual(const std::vector<double>& u, std::vector<double>& res) const {
    auto at = [&](int i, int j) { return u[static_cast<std::size_t>(i) * nt + j]; };
    double mean = 0.0;
    for (int j = 0; j < nt; ++j) mean += at(1, j);
    mean /= nt;
    const double r1 = g.r()[1];
    res[0] = 4.0 * (mean - at(0, 0)) / (r1 * r1) - f.value(at(0, 0));
    parallel_for(static_cast<std::size_t>(nr - 1), [&](std::size_t q) {
      const int i = static_cast<int>(q) + 1;
      const Stencil& s = st[i];
      for (int j = 0; j < nt; ++j) {
        const int jm = (j + nt - 1) % nt, jp = (j + 1) % nt;
        const double inner = i == 1 ? at(0, 0) : at(i - 1, j);
        const double Lu = s.inner * inner + s.center * at(i, j) + s.outer * at(i + 1, j) +
                          s.angular * (at(i, jp) - 2.0 * at(i, j) + at(i, jm));
        res[index(i, j)] = Lu - f.value(at(i, j));
      }
    });
  }

  Eigen::SparseMatrix<double> jacobian(const std::vector<double>& u) const {
    auto at = [&](int i, int j) { return u[static_cast<std::size_t>(i) * nt + j]; };
    using T = Eigen::Triplet<double>;
    const std::size_t center_count = static_cast<std::size_t>(nt) + 1;
    std::vector<T> trip(center_count + static_cast<std::size_t>(nr - 1) * nt * 5);
    const double r1 = g.r()[1];
    trip[0] = T(0, 0, -4.0 / (r1 * r1) - f.derivative(at(0, 0)));
    for (int j = 0; j < nt; ++j) trip[1 + j] = T(0, static_cast<int>(index(1, j)), 4.0 / (r1 * r1 * nt));
    parallel_for(static_cast<std::size_t>(nr - 1), [&](std::size_t q) {
      const int i = static_cast<int>(q) + 1;
      const Stencil& s = st[i];
      std::size_t pos = center_count + q * nt * 5;
      for (int j = 0; j < nt; ++j) {
        const int row = static_cast<int>(index(i, j));
        const int jm = (j + nt - 1) % nt, jp = (j + 1) % nt;
        trip[pos++] = T(row, row, s.center - 2.0 * s.angular - f.derivative(at(i, j)));
        trip[pos++] = T(row, static_cast<int>(index(i, jp)), s.angular);
        trip[pos++] = T(row, static_cast<int>(index(i, jm)), s.angular);
        trip[pos++] = T(row, i == 1 ? 0 : static_cast<int>(index(i - 1, j)), s.inner);
        // boundary ring is data: a zero entry keeps the pattern fixed
        trip[pos++] = T(row, i + 1 < nr ? static_cast<int>(index(i + 1, j)) : row, i + 1 < nr ? s.outer : 0.0);
      }
    });
    const int n = static_cast<int>(unknowns());
    Eigen::SparseMatrix<double> J(n, n);
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
  }

  void scatter(const Eigen::VectorXd& x, std::vector<double>& u, double step) const {
    for (int j = 0; j < nt; ++j) u[j] += step * x[0];
    for (int i = 1; i < nr; ++i)
      for (int j = 0; j < nt; ++j) u[static_cast<std::size_t>(i) * nt + j] += step * x[index(i, j)];
  }
};

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::abs(x));
  }
  return m;
}

}  // namespace

DiskSolution solve_disk(const GrowthProfile& gp, const BoundaryData& data, const PolarGrid& grid,
                        const NewtonOptions& options) {
  const Nonlinearity& f = gp.nonlinearity();
  if (!(data.M > gp.threshold())) throw DomainError("boundary level M must exceed the positivity threshold");
  if (!(std::abs(data.eps_b) < 1.0)) throw DomainError("perturbation amplitude must satisfy |eps_b| < 1");
  DiskSolution sol(grid, data, f);
  DiskBuilder b(grid, f);
  const int nr = grid.n_r(), nt = grid.n_theta();
  const double rho = grid.radius();

  // initial guess: radial Dirichlet profile times the extended relative perturbation
  const RadialSolution guess = solve_dirichlet_radial(gp, 2, rho, data.M);
  std::vector<double>& u = sol.u_;
  u.assign(static_cast<std::size_t>(nr + 1) * nt, 0.0);
  std::vector<double> ring(nr + 1);
  parallel_for(static_cast<std::size_t>(nr), [&](std::size_t i) { ring[i] = guess.value(grid.r()[i]); });
  ring[nr] = data.M;
  for (int i = 0; i <= nr; ++i) {
    const double scale = std::pow(grid.r()[i] / rho, std::abs(data.m));
    for (int j = 0; j < nt; ++j) {
      const double g = data.at(grid.theta(j));
      // relative perturbation keeps the guess inside the range of the data
      u[static_cast<std::size_t>(i) * nt + j] = i == nr ? g : ring[i] * (1.0 + (g / data.M - 1.0) * scale);
    }
  }

  const double f_top = std::abs(f.value(data.M * (1.0 + std::abs(data.eps_b))));
  sol.tolerance_ = options.rel_tol * std::max(1.0, f_top);

  const std::size_t n = b.unknowns();
  std::vector<double> res(n), trial_res(n);
  b.residual(u, res);
  double norm = max_abs(res);
  sol.history_.push_back(norm);
  if (!std::isfinite(norm)) throw SolverError("non-finite residual at the initial guess", sol.history_);

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  for (int it = 0; norm > sol.tolerance_; ++it) {
    if (it == options.max_iterations) throw SolverError("Newton iteration limit reached", sol.history_);
    const Eigen::SparseMatrix<double> J = b.jacobian(u);
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) throw SolverError("Jacobian factorization failed", sol.history_);
    const Eigen::Map<const Eigen::VectorXd> rv(res.data(), static_cast<Eigen::Index>(n));
    Eigen::VectorXd dx = lu.solve(-rv);
    // normwise backward error |J dx + F| / (|J| |dx| + |F|), infinity norms
    double jnorm = 0.0;
    {
      Eigen::VectorXd rows = Eigen::VectorXd::Zero(J.rows());
      for (int c = 0; c < J.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator e(J, c); e; ++e) rows[e.row()] += std::abs(e.value());
      jnorm = rows.maxCoeff();
    }
    auto backward_error = [&](const Eigen::VectorXd& x) {
      return (J * x + rv).lpNorm<Eigen::Infinity>() /
             (jnorm * x.lpNorm<Eigen::Infinity>() + rv.lpNorm<Eigen::Infinity>());
    };
    for (int refine = 0; backward_error(dx) > options.linear_rel_tol; ++refine) {
      if (refine == 2) throw SolverError("linear solve missed its residual tolerance (backward error " + std::to_string(backward_error(dx) * 1e12) + ")", sol.history_);
      dx += lu.solve(-(J * dx + rv));
    }

    double step = 1.0;
    std::vector<double> trial;
    while (true) {
      trial = u;
      b.scatter(dx, trial, step);
      double tn = std::numeric_limits<double>::infinity();
      try {
        b.residual(trial, trial_res);
        tn = max_abs(trial_res);
      } catch (const DomainError&) {
        // the step left the domain of f; shorten it
      }
      if (tn <= (1.0 - 1e-4 * step) * norm || tn <= sol.tolerance_) {
        norm = tn;
        break;
      }
      step *= 0.5;
      if (step < options.damping_floor) throw SolverError("Newton stagnation at the damping floor", sol.history_);
    }
    u.swap(trial);
    res.swap(trial_res);
    sol.history_.push_back(norm);
  }
  sol.residual_ = norm;
  return sol;
}

DiskSolution solve_disk(const GrowthProfile& gp, double M, double eps_b, int m, const PolarGrid& grid,
                        const NewtonOptions& options) {
  BoundaryData data;
  data.M = M;
  data.eps_b = eps_b;
  data.m = m;
  return solve_disk(gp, data, grid, options);
}

double DiskSolution::residual_max() const {
  DiskBuilder b(grid_, f_);
  std::vector<double> res(b.unknowns());
  b.residual(u_, res);
  return max_abs(res);
}

// ---------------------------------------------------------------------------
// Interpolation

template <class RadialInterp>
double DiskSolution::interpolate(double x, double y, RadialInterp&& radial) const {
  const auto& r = grid_.r();
  const int nr = grid_.n_r(), nt = grid_.n_theta();
  const double rho = std::min(std::hypot(x, y), r.back());
  const double theta = std::atan2(y, x);

  // periodic four-point Lagrange in theta on ring i (i = 0 is the center)
  auto ring_value = [&](int i, double th) {
    if (i == 0) return at(0, 0);
    double t = th / grid_.dtheta();
    t -= nt * std::floor(t / nt);
    int j = static_cast<int>(std::floor(t));
    const double p = t - j;
    auto v = [&](int k) { return at(i, ((j + k) % nt + nt) % nt); };
    return -p * (p - 1) * (p - 2) / 6.0 * v(-1) + (p + 1) * (p - 1) * (p - 2) / 2.0 * v(0) -
           (p + 1) * p * (p - 2) / 2.0 * v(1) + (p + 1) * p * (p - 1) / 6.0 * v(2);
  };

  int k = static_cast<int>(std::upper_bound(r.begin(), r.end(), rho) - r.begin()) - 1;
  k = std::clamp(k, 0, nr - 1);
  // signed positions along the diameter through the query point
  double xs[4], vs[4];
  bool have[4];
  for (int q = 0; q < 4; ++q) {
    const int idx = k - 1 + q;
    have[q] = idx <= nr;
    if (!have[q]) continue;
    if (idx >= 0) {
      xs[q] = r[idx];
      vs[q] = ring_value(idx, theta);
    } else {
      xs[q] = -r[-idx];
      vs[q] = ring_value(-idx, theta + pi);
    }
  }
  return radial(xs, vs, have, rho);
}

double DiskSolution::value(double x, double y) const {
  return interpolate(x, y, [](const double* xs, const double* vs, const bool* have, double t) {
    const double h1 = xs[2] - xs[1];
    const double d1 = (vs[2] - vs[1]) / h1;
    const double h0 = xs[1] - xs[0];
    const double d0 = (vs[1] - vs[0]) / h0;
    const double m1 = detail::pchip_slope(h0, h1, d0, d1);
    double m2;
    if (have[3]) {
      const double h2 = xs[3] - xs[2];
      m2 = detail::pchip_slope(h1, h2, d1, (vs[3] - vs[2]) / h2);
    } else {
      m2 = detail::pchip_end_slope(h1, h0, d1, d0);
    }
    return detail::cubic_hermite(xs[1], vs[1], m1, xs[2], vs[2], m2, t);
  });
}

double DiskSolution::value_lagrange(double x, double y) const {
  return interpolate(x, y, [](const double* xs, const double* vs, const bool* have, double t) {
    const int hi = have[3] ? 3 : 2;
    double sum = 0.0;
    for (int a = 0; a <= hi; ++a) {
      double w = 1.0;
      for (int c = 0; c <= hi; ++c)
        if (c != a) w *= (t - xs[c]) / (xs[a] - xs[c]);
      sum += w * vs[a];
    }
    return sum;
  });
}

// ---------------------------------------------------------------------------
// Diagnostics

SymmetryDefect symmetry_defect(const DiskSolution& sol) {
  const auto& g = sol.grid();
  SymmetryDefect out;
  for (int i = 0; i <= g.n_r(); ++i) {
    double lo = sol.at(i, 0), hi = lo;
    for (int j = 1; j < g.n_theta(); ++j) {
      lo = std::min(lo, sol.at(i, j));
      hi = std::max(hi, sol.at(i, j));
    }
    out.by_radius.emplace_back(g.r()[i], hi - lo);
    if (g.r()[i] <= 0.9 * g.radius()) out.global = std::max(out.global, hi - lo);
  }
  // include the defect at exactly 0.9 radius so the value does not jump with the ring layout
  const double cut = 0.9 * g.radius();
  for (std::size_t i = 0; i + 1 < out.by_radius.size(); ++i) {
    const auto [r0, d0] = out.by_radius[i];
    const auto [r1, d1] = out.by_radius[i + 1];
    if (r0 <= cut && cut < r1) out.global = std::max(out.global, d0 + (cut - r0) / (r1 - r0) * (d1 - d0));
  }
  return out;
}

namespace {

// Cartesian sample lattice with spacing radius / (2 n_r), restricted to x > x_min.
template <class Fn>
void for_each_sample(const DiskSolution& sol, double x_min, Fn&& fn) {
  const double rho = sol.grid().radius();
  const int n = 2 * sol.grid().n_r();
  const double h = rho / n;
  for (int a = -n; a <= n; ++a) {
    const double x = a * h;
    if (!(x > x_min)) continue;
    for (int c = -n; c <= n; ++c) {
      const double y = c * h;
      if (x * x + y * y < rho * rho) fn(x, y);
    }
  }
}

}  // namespace

MovingPlaneResult moving_plane_min(const DiskSolution& sol, const std::vector<double>& lambdas) {
  MovingPlaneResult out;
  out.min_by_lambda.resize(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t q) {
    const double lam = lambdas[q];
    if (!(lam > 0.0 && lam < 1.0)) throw DomainError("moving-plane lambda must lie in (0, 1)");
    const double L = lam * sol.grid().radius();
    double m = std::numeric_limits<double>::infinity();
    for_each_sample(sol, L, [&](double x, double y) { m = std::min(m, sol.value(x, y) - sol.value(2 * L - x, y)); });
    out.min_by_lambda[q] = {lam, m};
  });
  double bound = 0.0;
  for_each_sample(sol, -2.0 * sol.grid().radius(),
                  [&](double x, double y) { bound = std::max(bound, std::abs(sol.value(x, y) - sol.value_lagrange(x, y))); });
  out.interpolation_bound = bound;
  return out;
}

SlabResult slab_containment(const DiskSolution& sol, const RadialSolution& radial, double lambda, double C) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("slab lambda must lie in (0, 1)");
  if (std::isnan(radial.blowup_radius_raw())) throw DomainError("slab containment needs a unit-ball radial profile");
  const GrowthProfile& gp = radial.profile();
  const double L = lambda * sol.grid().radius();
  SlabResult out;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for_each_sample(sol, L, [&](double x, double y) {
    const double u = sol.value(x, y);
    const double ul = sol.value(2 * L - x, y);
    // round-off in the interpolant is not a sign change
    if (!(u < ul - 1e-12 * std::max(1.0, std::abs(u)))) return;
    ++out.region_points;
    const double Ul = radial.value(std::hypot(2 * L - x, y));
    const double H = gp.phi(Ul) * std::exp(-0.5 * gp.log_F(Ul));
    const double gap = x - L;
    out.max_ratio = std::max(out.max_ratio, gap / H);
    const double margin = C * H - gap;
    out.worst_margin = std::min(out.worst_margin, margin);
    if (margin < 0.0) ++out.violations;
  });
  return out;
}

ComparisonResult radial_comparison(const DiskSolution& sol, const RadialSolution& radial, double tolerance) {
  const auto& g = sol.grid();
  if (!(g.radius() < radial.domain_radius())) throw DomainError("comparison disk must lie inside the blow-up ball");
  const double trace = radial.value(g.radius());
  for (int j = 0; j < g.n_theta(); ++j) {
    if (sol.at(g.n_r(), j) > trace * (1.0 + 1e-12))
      throw DomainError("boundary data lies above the trace of the radial solution");
  }
  const GrowthProfile& gp = radial.profile();
  ComparisonResult out;
  out.min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= g.n_r(); ++i) {
    const double U = radial.value(g.r()[i]);
    const double phi = gp.phi(U);
    double worst = -std::numeric_limits<double>::infinity();
    const int count = i == 0 ? 1 : g.n_theta();
    for (int j = 0; j < count; ++j) {
      const double gap = U - sol.at(i, j);
      worst = std::max(worst, gap / phi);
      out.min_gap = std::min(out.min_gap, gap);
      if (gap < -tolerance) out.below = false;
    }
    out.ratio_by_radius.emplace_back(g.r()[i], worst);
    out.max_ratio = std::max(out.max_ratio, worst);
  }
  return out;
}

std::vector<GradientSample> tangential_radial_diagnostic(const DiskSolution& sol) {
  const auto& g = sol.grid();
  const auto& r = g.r();
  const int nt = g.n_theta();
  std::vector<GradientSample> out;
  for (int i = 1; i < g.n_r(); ++i) {
    const double hm = r[i] - r[i - 1], hp = r[i + 1] - r[i], s = hm + hp;
    double tang = 0.0, rad = std::numeric_limits<double>::infinity();
    for (int j = 0; j < nt; ++j) {
      const double up = sol.at(i + 1, j), uc = sol.at(i, j), um = sol.at(i - 1, i == 1 ? 0 : j);
      const double ur = (-hp / (hm * s)) * um + ((hp - hm) / (hm * hp)) * uc + (hm / (hp * s)) * up;
      const double ut = (sol.at(i, (j + 1) % nt) - sol.at(i, (j + nt - 1) % nt)) / (2.0 * g.dtheta());
      tang = std::max(tang, std::abs(ut) / r[i]);
      rad = std::min(rad, ur);
    }
    out.push_back({g.radius() - r[i], tang, rad});
  }
  return out;
}

GradientSample gradient_at(const std::vector<GradientSample>& diag, double radius, double r) {
  if (diag.empty()) throw DomainError("empty gradient diagnostic");
  const double d = radius - r;
  // samples are ordered by decreasing d
  for (std::size_t k = 0; k + 1 < diag.size(); ++k) {
    const auto& a = diag[k];
    const auto& b = diag[k + 1];
    if (d <= a.d && d >= b.d) {
      const double t = (a.d - d) / (a.d - b.d);
      return {d, a.tangential + t * (b.tangential - a.tangential), a.radial + t * (b.radial - a.radial)};
    }
  }
  throw DomainError("radius outside the sampled rings");
}

SymmetryReport symmetry_report(const DiskSolution& sol, const std::vector<double>& lambdas,
                               const RadialSolution* radial) {
  SymmetryReport rep;
  const auto defect = symmetry_defect(sol);
  rep.defect_by_radius = defect.by_radius;
  rep.global_defect = defect.global;
  const auto mp = moving_plane_min(sol, lambdas);
  rep.movingplane_min = mp.min_by_lambda;
  rep.interpolation_bound = mp.interpolation_bound;
  rep.gradient_diag = tangential_radial_diagnostic(sol);
  const double rho = sol.grid().radius();
  rep.radial_monotonicity_min = std::numeric_limits<double>::infinity();
  for (const auto& s : rep.gradient_diag) {
    const double r = rho - s.d;
    if (r > 0.05 * rho && r < 0.95 * rho) rep.radial_monotonicity_min = std::min(rep.radial_monotonicity_min, s.radial);
  }
  if (radial) {
    try {
      const auto cmp = radial_comparison(sol, *radial);
      rep.comparison_ratio = cmp.ratio_by_radius;
      rep.comparison_constant = cmp.max_ratio;
    } catch (const DomainError&) {
    }
  }
  return rep;
}

}  // namespace blowup
