#pragma once

// External potential W on the contour. Three variants: zero, a truncated
// Fourier series in the exterior angle t, and the map-derivative weight
// W = (1 - beta) log |w'_ext| whose contour-dependent free-energy
// contributions cancel. Off-contour behavior (needed for the holomorphic
// derivative dW) comes from the canonical analytic continuation through the
// exterior coordinate w.

#include "loggas/common.hpp"
#include "loggas/geometry.hpp"

namespace loggas {

struct Potential {
  enum class Kind { Zero, FourierT, WPrime };

  Kind kind = Kind::Zero;
  double c0 = 0.0;             // constant term (FourierT)
  std::vector<double> cos_k;   // coefficient of cos(k t), k = 1..
  std::vector<double> sin_k;   // coefficient of sin(k t), k = 1..

  static Potential zero() { return {}; }
  static Potential fourier(std::vector<double> cosk, std::vector<double> sink,
                           double constant = 0.0);
  static Potential wprime_mode();

  bool is_zero() const;
  int max_harmonic() const;

  // W at exterior angle t (beta enters only through the WPrime variant).
  double value(const geometry::LaurentContour& spec, double beta, double t) const;
  // dW/dt at t.
  double dt(const geometry::LaurentContour& spec, double beta, double t) const;
  // Holomorphic derivative (d/dz of the analytic completion) at a node angle.
  cplx dz(const geometry::LaurentContour& spec, double beta, double t) const;

  Field node_values(const geometry::ContourGrid& grid, double beta) const;
};

}  // namespace loggas
