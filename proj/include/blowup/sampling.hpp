#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace blowup {

/// Dense scan grid used by every "for all sampled t" check.
///
/// Steps grow geometrically (t_{k+1} = t_k * ratio) but never exceed
/// `max_step`, so sin-modulated families get a fixed number of points per
/// period at large t. Both endpoints are always visited.
struct ScanGrid {
  double ratio = 1.0 + 1e-3;
  double max_step = 0.0;  // 0: unlimited
  double min_step = 1e-6;

  double next(double t) const {
    double step = std::max(std::abs(t) * (ratio - 1.0), min_step);
    if (max_step > 0.0) step = std::min(step, max_step);
    return t + step;
  }

  template <class Fn>
  void for_each(double lo, double hi, Fn&& fn) const {
    double t = lo;
    while (t < hi) {
      fn(t);
      t = next(t);
    }
    fn(hi);
  }
};

/// n points per decade on [lo, hi], geometric, endpoints included.
inline std::vector<double> geometric_points(double lo, double hi, int per_decade) {
  std::vector<double> out;
  const double decades = std::log10(hi / lo);
  const int n = std::max(1, static_cast<int>(std::ceil(decades * per_decade)));
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / n));
  }
  out.back() = hi;
  return out;
}

}  // namespace blowup
