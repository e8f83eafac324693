#pragma once

namespace blowup::detail {

struct Jet {
  double value;
  double first;
  double second;
};

// Quintic Hermite interpolant on [x0, x1] matching value, first and second
// derivative at both ends; returns the same three quantities at x.
inline Jet quintic_hermite(double x0, const Jet& a, double x1, const Jet& b, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double y0 = a.value, d0 = h * a.first, s0 = h * h * a.second;
  const double y1 = b.value, d1 = h * b.first, s1 = h * h * b.second;

  const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
  const double H3 = 0.5 * t3 - t4 + 0.5 * t5;
  const double H4 = -4 * t3 + 7 * t4 - 3 * t5;
  const double H5 = 10 * t3 - 15 * t4 + 6 * t5;

  const double D0 = -30 * t2 + 60 * t3 - 30 * t4;
  const double D1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
  const double D2 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
  const double D3 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
  const double D4 = -12 * t2 + 28 * t3 - 15 * t4;
  const double D5 = -D0;

  const double S0 = -60 * t + 180 * t2 - 120 * t3;
  const double S1 = -36 * t + 96 * t2 - 60 * t3;
  const double S2 = 1 - 9 * t + 18 * t2 - 10 * t3;
  const double S3 = 3 * t - 12 * t2 + 10 * t3;
  const double S4 = -24 * t + 84 * t2 - 60 * t3;
  const double S5 = -S0;

  Jet out;
  out.value = H0 * y0 + H1 * d0 + H2 * s0 + H3 * s1 + H4 * d1 + H5 * y1;
  out.first = (D0 * y0 + D1 * d0 + D2 * s0 + D3 * s1 + D4 * d1 + D5 * y1) / h;
  out.second = (S0 * y0 + S1 * d0 + S2 * s0 + S3 * s1 + S4 * d1 + S5 * y1) / (h * h);
  return out;
}

}  // namespace blowup::detail
