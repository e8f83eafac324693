#pragma once

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "blowup/error.hpp"

namespace blowup::detail {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

// Adaptive Gauss-Kronrod on [a, b] after an explicit affine map to [-1, 1].
// Boost 1.74 compares the unscaled local error with a scaled tolerance, so
// narrow intervals would otherwise always recurse to max_depth.
template <class Fn>
QuadratureResult gauss_kronrod(Fn&& fn, double a, double b, double tol, unsigned max_depth) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  QuadratureResult r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double x) { return fn(mid + half * x); }, -1.0, 1.0, max_depth, tol, &r.error, &r.l1);
  r.value *= half;
  r.error *= std::abs(half);
  r.l1 *= std::abs(half);
  return r;
}

// Same, throwing QuadratureError when the estimate misses the tolerance.
template <class Fn>
double integrate_checked(Fn&& fn, double a, double b, double tol, unsigned max_depth = 15) {
  const auto r = gauss_kronrod(fn, a, b, tol, max_depth);
  if (!std::isfinite(r.value) || !(r.error <= 1e3 * tol * r.l1 || r.error <= 1e-300)) {
    throw QuadratureError("adaptive quadrature did not converge", r.value, r.error);
  }
  return r.value;
}

}  // namespace blowup::detail
