#pragma once

// Off-contour evaluation of the exterior Laurent map and its inverse, the
// interior conformal map (via a double-layer Dirichlet solve and Cauchy
// conjugation), Schwarzian derivatives, Green's functions of both Dirichlet
// problems, and harmonic extensions to either side.

#include "loggas/common.hpp"
#include "loggas/geometry.hpp"

namespace loggas::maps {

using geometry::ContourGrid;
using geometry::LaurentContour;

enum class Side { Interior, Exterior };

// Inverse of the Laurent map at a strictly exterior point (Newton iteration
// seeded by w ~ (z - a0)/r). Points within 1e-3 * r of the contour are
// rejected (NotExterior).
cplx eval_w_ext(const ContourGrid& grid, cplx z);

// Boundary data of the interior map w_int with w_int(center) = 0 and
// w_int'(center) > 0.
struct InteriorMapData {
  cplx center;
  Field psi;         // monotone lift of arg w_int(z_j); psi - t is periodic
  Field wprime_int;  // |w'_int(z_j)|
  Field density;     // double-layer density g with (I+V) g = -log|z - center|
  Field conjugate;   // boundary values of the harmonic conjugate
  double rotation = 0.0;  // aligns w_int'(center) > 0
  double dirichlet_residual = 0.0;  // recomputed boundary limit vs data
  double turning_residual = 0.0;    // |closed-loop integral of |w'_int| ds - 2pi|
};

InteriorMapData interior_map(const ContourGrid& grid, cplx center);

// w_int at a strictly interior point, by the Cauchy integral of the boundary
// values e^{i psi}.
cplx w_int_at(const ContourGrid& grid, const InteriorMapData& imap, cplx z);

// Schwarzian derivative {w_side; z} at an off-contour point.
cplx schwarzian(Side side, const ContourGrid& grid, cplx z);
cplx schwarzian(Side side, const ContourGrid& grid, const InteriorMapData& imap,
                cplx z);
// Exterior-map Schwarzian on the contour itself (analytic continuation).
cplx schwarzian_ext_at_node(const ContourGrid& grid, int j);

// {z; t} along the contour from the exact Laurent derivatives.
CField schwarzian_z_of_t(const ContourGrid& grid);

// Boundary tables used by curvature/variation identities:
//   Re(nu^2 {w_ext; z}) and Im(nu^2 {w_ext; z}) at the nodes, and
//   Re(nu^2 ({w_int; z} - {w_ext; z})) from the boundary correspondence psi.
Field re_nu2_schwarzian_ext(const ContourGrid& grid);
Field im_nu2_schwarzian_ext(const ContourGrid& grid);
Field re_nu2_schwarzian_int_minus_ext(const ContourGrid& grid,
                                      const InteriorMapData& imap);

// Green's function of the Dirichlet problem on the given side.
double green_function(Side side, const ContourGrid& grid, cplx z, cplx zeta);
double green_function(Side side, const ContourGrid& grid,
                      const InteriorMapData& imap, cplx z, cplx zeta);
// G_ext(z, infinity) = -log |w_ext(z)|.
double green_ext_infinity(const ContourGrid& grid, cplx z);

// Poisson kernel d/dn_xi G(z, xi_j) at the nodes, for z on the given side.
Field poisson_kernel(Side side, const ContourGrid& grid,
                     const InteriorMapData* imap, cplx z);

// Harmonic extension of real boundary data. The grid (and the interior map,
// for Side::Interior) must outlive the returned object.
class HarmonicExtension {
 public:
  HarmonicExtension(Side side, const ContourGrid& grid, Field data,
                    const InteriorMapData* imap = nullptr);

  Side side() const { return side_; }
  const Field& boundary_data() const { return data_; }
  double value(cplx z) const;
  double value_at_infinity() const;  // exterior only

 private:
  Side side_;
  const ContourGrid* grid_;
  const InteriorMapData* imap_;
  Field data_;
  CField coeffs_;  // Fourier coefficients of the data in t
};

HarmonicExtension harmonic_extend(const ContourGrid& grid, const Field& f,
                                  Side side,
                                  const InteriorMapData* imap = nullptr);

// Contour integral of h(xi)/(xi - z) dxi by the trapezoid rule with
// nearest-node singularity subtraction (h given at the nodes; `inside` tells
// whether z lies inside the contour, which fixes the subtracted residue).
cplx cauchy_integral(const ContourGrid& grid, const CField& h, cplx z,
                     bool inside);

}  // namespace loggas::maps
