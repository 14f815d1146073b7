#pragma once

// Dense Nystrom discretizations of the boundary operators on a contour grid:
// the double layer (Neumann-Poincare) operator V, the single layer operator K,
// the one-sided Dirichlet-to-Neumann maps N+ / N-, and the Neumann jump
// operator N = N+ - N-. Spectra of V give the Fredholm eigenvalues of the
// domain; their product gives det(I+V) and the regularized det' N.

#include <Eigen/Dense>

#include "loggas/common.hpp"
#include "loggas/geometry.hpp"

namespace loggas::maps {
struct InteriorMapData;
}

namespace loggas::ops {

using geometry::ContourGrid;

// Dense kernel acting against the arclength measure:
//   (A f)_i = sum_j kernel(i,j) f_j * (2*pi/M) * sp_j.
struct BoundaryOperator {
  Eigen::MatrixXd kernel;

  Field apply(const Field& f, const ContourGrid& grid) const;
  CField apply(const CField& f, const ContourGrid& grid) const;
  // Adjoint action with respect to the ds scalar product (transposed kernel).
  Field apply_adjoint(const Field& f, const ContourGrid& grid) const;
  // kernel(i,j) * w_j, the matrix whose spectrum approximates the operator's.
  Eigen::MatrixXd weighted(const ContourGrid& grid) const;
};

// Neumann-Poincare operator, kernel (1/pi) d/dn_xi log|xi - z| with diagonal
// limit kappa/(2*pi). V 1 = 1.
BoundaryOperator build_double_layer(const ContourGrid& grid);

// Single layer operator -(1/2pi) log|z - xi| with the periodic log-splitting
// quadrature (spectrally accurate for analytic densities).
BoundaryOperator build_single_layer(const ContourGrid& grid);

// Exterior Dirichlet-to-Neumann map: N- f = -|w'_ext| * Lambda f, where
// Lambda multiplies Fourier mode k in t by |k|.
Field dtn_exterior(const ContourGrid& grid, const Field& f);
CField dtn_exterior(const ContourGrid& grid, const CField& f);

// Interior Dirichlet-to-Neumann map through the interior map's boundary
// correspondence psi: resample to uniform psi, apply Lambda, pull back,
// multiply by |w'_int|.
Field dtn_interior(const ContourGrid& grid, const maps::InteriorMapData& imap,
                   const Field& f);

// Neumann jump operator N f = N+ f - N- f.
Field neumann_jump(const ContourGrid& grid, const maps::InteriorMapData& imap,
                   const Field& f);
// Fallback route N = -2 N- (I+V)^{-1} (no interior map required).
Field neumann_jump(const ContourGrid& grid, const Field& f);

// Solves (I + V) x = f with the weighted Nystrom matrix.
Field solve_I_plus_V(const ContourGrid& grid, const BoundaryOperator& V,
                     const Field& f);

// Real sorted (descending) eigenvalues of the weighted Nystrom matrix of V.
// Throws ComplexSpectrum if residual imaginary parts exceed tolerance.
std::vector<double> fredholm_spectrum(const BoundaryOperator& V,
                                      const ContourGrid& grid,
                                      double imag_tol = 1e-8);

// det(I+V) as the eigenvalue product over |lambda| > drop_tol. If alt_route
// is given, stores 2 * prod_{lambda != lambda_max} (1 - lambda) there.
double fredholm_determinant(const std::vector<double>& spectrum,
                            double drop_tol = 1e-14,
                            double* alt_route = nullptr);

// log det' N = -log det(I+V) + log P.
double detprime_neumann(const ContourGrid& grid);
double detprime_neumann(const std::vector<double>& spectrum, double perimeter);

}  // namespace loggas::ops
