#pragma once

// Contours given by a normalized exterior Laurent map
//   z(w) = r*w + a0 + sum_{k>=1} a_k w^{-k},   |w| >= 1,
// and the differential-geometric boundary data sampled at M equispaced
// exterior angles t_j = 2*pi*j/M (t is exactly arg w on the contour).

#include <optional>
#include <string>

#include "loggas/common.hpp"

namespace loggas::geometry {

struct LaurentContour {
  double r = 1.0;                 // exterior conformal radius, r > 0
  cplx a0{0.0, 0.0};              // translation
  std::vector<cplx> coeffs;       // a_1 .. a_K

  cplx map(cplx w) const;         // z(w)
  cplx dmap(cplx w) const;        // z'(w)
  cplx d2map(cplx w) const;
  cplx d3map(cplx w) const;

  // z(e^{it}) and |z'(e^{it})| (the arclength Jacobian in t).
  cplx at_angle(double t) const { return map(std::polar(1.0, t)); }
  double speed(double t) const { return std::abs(dmap(std::polar(1.0, t))); }

  LaurentContour scaled(double c) const;  // z -> c*z
};

struct UnivalenceReport {
  bool ok = false;
  std::string reason;             // empty when ok
  double min_dmap_on_circle = 0;  // min |z'(w)| over |w| = 1
  double min_node_distance = 0;   // min pairwise node distance at the probe M
};

// Grid checks: z' has no zeros in |w| >= 1 (fine grid plus argument-principle
// winding count) and the sampled boundary curve is simple.
UnivalenceReport check_univalence(const LaurentContour& spec, int probe_M = 1024);

struct ContourGrid {
  LaurentContour spec;
  int M = 0;
  std::vector<double> t;       // exterior angles
  CField z;                    // nodes z(e^{it_j})
  CField dz;                   // dz/dt
  CField nu;                   // outward unit normals, nu = -i dz/|dz|
  Field kappa;                 // curvatures
  Field sp;                    // speeds |dz/dt|
  Field wprime_ext;            // |w'_ext(z_j)| = 1 / |z'(w_j)|
  double perimeter = 0.0;

  // Arclength quadrature of node samples: sum f_j * sp_j * (2*pi/M).
  double integrate_ds(const Field& f) const;
  cplx integrate_ds(const CField& f) const;
};

// Builds the grid; throws NonUnivalent / GridTooCoarse.
ContourGrid build_contour(const LaurentContour& spec, int M);

// d/ds of a node-sampled field via the Fourier derivative in t.
Field spectral_ds(const Field& f, const ContourGrid& grid);
CField spectral_ds(const CField& f, const ContourGrid& grid);

// Winding number of the sampled contour around z0 (1 = inside, 0 = outside).
int winding_number(const ContourGrid& grid, cplx z0);

// Distance from z0 to the sampled nodes (coarse proxy for dist(z0, contour)).
double node_distance(const ContourGrid& grid, cplx z0);

}  // namespace loggas::geometry
