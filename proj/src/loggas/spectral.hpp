#pragma once

// Boundary-integral log-determinants of the Dirichlet Laplacians on both
// sides (relative to the same-radius circle baseline), the surgery identity
// tying them to det' N and the perimeter, and a finite-difference harness for
// the first-variation formulas under exact Laurent-coefficient deformations.

#include "loggas/common.hpp"
#include "loggas/geometry.hpp"
#include "loggas/maps.hpp"

namespace loggas::spectral {

using geometry::ContourGrid;
using geometry::LaurentContour;
using maps::InteriorMapData;

struct DeformationDirection {
  int mode = 0;         // coefficient index k >= 0; ignored when dilation
  double phase = 0.0;   // dz = eps e^{i phase} w^{-k}
  bool dilation = false;  // dz = eps w (the radius mode)

  LaurentContour apply(const LaurentContour& spec, double eps) const;
  // Normal displacement per unit eps at the grid nodes: Re(conj(nu) dz).
  Field displacement(const ContourGrid& grid) const;
};

// Interior-Laplacian log-determinant (Dirichlet), from the boundary values of
// log |z'_int| on the unit circle; the unit-disk constant is dropped.
double logdet_laplacian_interior(const ContourGrid& grid,
                                 const InteriorMapData& imap);

// Exterior counterpart from log |z'_ext|, exact from the Laurent map.
double logdet_laplacian_exterior(const ContourGrid& grid);

struct DetReport {
  double logdet_int_rel = 0.0;  // relative to the same-r circle
  double logdet_ext_rel = 0.0;
  double logdetprimeN = 0.0;
  double surgery_residual = 0.0;
};

// Checks that logdet_int + logdet_ext + logdet' N - log P matches the circle
// value of the same combination.
DetReport surgery_check(const ContourGrid& grid, const InteriorMapData& imap);

enum class VariedQuantity { LogR, LogDetExt, Green, DetIV };

struct VariationRow {
  double eps;
  double fd_value;    // centered difference (Q(+eps) - Q(-eps)) / (2 eps)
  double predicted;   // boundary-integral first variation per unit eps
  double mismatch;
};

struct VariationReport {
  std::vector<VariationRow> rows;
  double slope = 0.0;  // log-log fit of mismatch against eps
};

struct VariationConfig {
  VariedQuantity quantity = VariedQuantity::LogR;
  DeformationDirection direction;
  std::vector<double> eps = {1e-2, 5e-3, 2.5e-3};
  int M = 256;
  cplx green_a{0.3, 0.0};  // interior probe points for the Green variation
  cplx green_b{-0.2, 0.1};
};

VariationReport variation_harness(const LaurentContour& spec,
                                  const VariationConfig& config);

}  // namespace loggas::spectral
