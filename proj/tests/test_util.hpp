#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "loggas/common.hpp"
#include "loggas/geometry.hpp"

namespace testutil {

using loggas::cplx;
using loggas::Field;
using loggas::geometry::LaurentContour;

inline LaurentContour circle(double r = 1.0) {
  LaurentContour c;
  c.r = r;
  return c;
}

inline LaurentContour ellipse(double q, double r = 1.0) {
  LaurentContour c;
  c.r = r;
  c.coeffs = {cplx(q * r, 0.0)};
  return c;
}

// Mildly asymmetric three-coefficient contour, comfortably univalent and
// fully resolved (including its interior map) at M = 256.
inline LaurentContour blob() {
  LaurentContour c;
  c.r = 1.0;
  c.coeffs = {cplx(0.08, 0.04), cplx(0.03, -0.015), cplx(0.01, 0.006)};
  return c;
}

// Strongly structured six-coefficient contour (still univalent) that needs a
// fine grid to resolve.
inline LaurentContour spiky() {
  LaurentContour c;
  c.r = 1.0;
  c.coeffs = {cplx(0.05, 0.0), cplx(0.05, 0.02), cplx(0.04, -0.02),
              cplx(0.03, 0.01), cplx(0.03, 0.0),  cplx(0.06, 0.03)};
  return c;
}

inline Field random_bandlimited(int M, int kmax, unsigned seed,
                                double amplitude = 1.0) {
  std::mt19937_64 rng(seed);
  auto u = [&rng]() { return (rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
  std::vector<double> a(kmax + 1), b(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    a[k] = amplitude * u() / (1.0 + k);
    b[k] = amplitude * u() / (1.0 + k);
  }
  Field f(M);
  for (int j = 0; j < M; ++j) {
    const double t = loggas::kTwoPi * j / M;
    double acc = a[0];
    for (int k = 1; k <= kmax; ++k)
      acc += a[k] * std::cos(k * t) + b[k] * std::sin(k * t);
    f[j] = acc;
  }
  return f;
}

// Complete elliptic integral of the second kind E(e) by the AGM recursion.
inline double elliptic_E(double e) {
  double a = 1.0, b = std::sqrt(1.0 - e * e), c = e;
  double sum = 0.5 * c * c;
  double pow2 = 0.5;
  for (int n = 0; n < 60 && std::abs(c) > 1e-17; ++n) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    c = 0.5 * (a - b);
    a = an;
    b = bn;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  const double K = loggas::kPi / (2.0 * a);
  return K * (1.0 - sum);
}

inline double ellipse_perimeter(double semi_a, double semi_b) {
  const double e = std::sqrt(1.0 - (semi_b * semi_b) / (semi_a * semi_a));
  return 4.0 * semi_a * elliptic_E(e);
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x,
                           const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

inline double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testutil
