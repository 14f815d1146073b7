#pragma once

// Leading-order two-point functions of the Coulomb field and vertex-operator
// correlators at exterior points.

#include "loggas/common.hpp"
#include "loggas/geometry.hpp"
#include "loggas/maps.hpp"

namespace loggas::correlators {

using geometry::ContourGrid;
using maps::InteriorMapData;
using maps::Side;

struct Probe {
  cplx z;
  double alpha = 1.0;
};

struct ProbeSet {
  std::vector<Probe> probes;
  long N = 1;
};

enum class VertexKind { Holomorphic, Absolute };

// Connected pair correlator of the Coulomb potential, normalized by
// 2 beta hbar^2 (the normalized object is beta-independent). Three cases by
// the sides of z and zeta.
double phi_pair_connected(const ContourGrid& grid, const InteriorMapData& imap,
                          cplx z, cplx zeta);

// Connected <(d phi)^2> normalized by beta hbar^2: one sixth of the
// Schwarzian of the side's conformal map.
cplx dphi_sq_connected(const ContourGrid& grid, const InteriorMapData& imap,
                       cplx z);

// Leading-order vertex-operator mean at a strictly exterior point.
cplx vertex_mean(const ContourGrid& grid, double beta, cplx z, double alpha,
                 long N, VertexKind kind);

// Product of vertex operators: singles times pair factors.
cplx vertex_product(const ContourGrid& grid, double beta, const ProbeSet& set,
                    VertexKind kind);

}  // namespace loggas::correlators
