#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blowup/radial_solver.hpp"

namespace blowup {

/// Points are written (x1, x2) with x2 = |x'| >= 0 or any signed coordinate
/// in the plane; U_lambda(x) = U(|x_lambda|), x_lambda = (2 lambda - x1, x2).
struct LensSpec {
  double lambda = 0.95;
  const RadialSolution* radial = nullptr;
  double C_H = 1.0;  // the lens is {lambda < x1 < lambda + C_H H(x)}
  /// Neighborhood restriction: only points with |x_lambda| >= this bound count.
  double min_reflected_radius = 0.0;
};

/// H(x) = phi(U_lambda(x)) / sqrt(F(U_lambda(x))).
/// Throws DomainError when x_lambda is not inside the domain of the profile.
double lens_width(const LensSpec& ls, double x1, double x2);

/// Thickness w(x2) of the lens over the chord point (lambda, x2): the first
/// t > 0 with t = C_H H(lambda + t, x2), or the distance to the unit sphere.
double lens_thickness(const LensSpec& ls, double x2);

/// Zeroth-order coefficient C0 U_lambda^e of the linear operator.
enum class CoefficientExponent {
  full,  // e = p - 1, the form used by the barrier estimate
  half,  // e = (p - 1)/2, the alternative printed form
};

struct BarrierOptions {
  double C_H = 1.0;
  int samples = 64;  // chord samples x lens-depth samples
  bool refine = true;
  CoefficientExponent exponent = CoefficientExponent::full;
  double margin = 0.1;  // require op <= -margin C0 U^e at every sample
  int max_doublings = 40;
  double min_reflected_radius = 0.0;
};

struct BarrierSample {
  double x1 = 0.0;
  double x2 = 0.0;
  double U = 0.0;            // U_lambda(x)
  double omega = 0.0;
  double op = 0.0;           // Delta omega + C0 U^e omega
  double requirement = 0.0;  // mu U^{(p-1)/2} (x1 - lambda)
  double margin = 0.0;       // op / (C0 U^e)
};

struct BarrierReport {
  double mu = 0.0;
  double C0 = 0.0;
  double p = 0.0;
  double lambda = 0.0;
  double C_H = 0.0;
  double coefficient_exponent = 0.0;
  int doublings = 0;
  bool margin_reached = false;
  std::vector<BarrierSample> samples;  // the finest sampling
  std::vector<int> sample_counts;      // per sampling level
  std::vector<bool> level_verdicts;
  bool verdict = false;
  std::optional<BarrierSample> witness;  // worst sample
  std::string failure;                   // empty when verdict holds
  std::string note;
};

/// omega(x) = cos(mu U_lambda^{(p-1)/2} (x1 - lambda)) with Delta omega from
/// the chain rule. mu doubles from 2 sqrt(C0 + 1) until every sample meets
/// the margin; the verdict then requires op < 0 and requirement <= pi/4 at
/// every sample of every level.
BarrierReport barrier_report(const GrowthProfile& gp, const RadialSolution& radial, double p,
                             double lambda, double C0, const BarrierOptions& options = {});

/// Operator values of omega at one point for a given mu.
BarrierSample barrier_sample(const RadialSolution& radial, double p, double lambda, double C0,
                             double mu, double exponent, double x1, double x2);

/// Solution of u'' + C0 x^{-2} u = 0 on (0, 1) with u(1) = 1:
/// x^{1/2} cos(A ln x), A = sqrt(4 C0 - 1)/2, for C0 > 1/4;
/// the sign-constant branch x^{s+}, s+ = (1 + sqrt(1 - 4 C0))/2, otherwise.
double euler_solution(double C0, double x);
/// Second derivative of euler_solution.
double euler_second_derivative(double C0, double x);
/// u'' + C0 x^{-2} u for euler_solution.
double euler_residual(double C0, double x);

struct EulerZero {
  int k;
  double x;
};

struct EulerZeros {
  std::vector<EulerZero> zeros;  // ascending in x
  /// Real indicial exponents s-, s+ when C0 <= 1/4.
  std::optional<std::pair<double, double>> real_exponents;
};

/// x_k = exp(-(pi/2 + k pi) / A) inside the open interval (a, b).
EulerZeros euler_zeros(double C0, double a, double b);

}  // namespace blowup
