#pragma once

// Large-N expansion of the free energy: density corrections rho_1, rho_2 from
// the Neumann-jump iteration, potential corrections, and the coefficients
// F_0, F_1, F_2 = F_2^(cl) + F_2^(q).

#include <optional>

#include "loggas/common.hpp"
#include "loggas/geometry.hpp"
#include "loggas/maps.hpp"
#include "loggas/potential.hpp"

namespace loggas::expansion {

using geometry::ContourGrid;
using maps::InteriorMapData;

struct ExpansionResult {
  double F0 = 0.0;
  double F1 = 0.0;
  double F2cl = 0.0;
  double F2q = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  Field rho0, rho1, rho2;
  Field phi1;             // boundary values of the O(hbar) potential correction
  double phi0_inside = 0.0;  // phi_0 = -2 beta log r inside the contour
  double lambda0 = 0.0;      // lambda = lambda0 + hbar * lambda1
  double lambda1 = 0.0;
  double detIV = 0.0;        // det(I + V)
  double logdetprimeN = 0.0;
  double F2q_alt = 0.0;      // F2q via det' N; must agree with F2q
};

// Leading-order density |w'_ext| / (2 pi).
Field rho0(const ContourGrid& grid);

// rho_1 and rho_2 from the jump-operator iteration. Uses N+ - N- when an
// interior map is supplied, otherwise the -2 N- (I+V)^{-1} route.
std::pair<Field, Field> density_corrections(const ContourGrid& grid,
                                            const InteriorMapData* imap,
                                            double beta, const Potential& W);

struct PhiData {
  double phi0_inside;
  Field phi1;
  double lambda0;
  double lambda1;
};
PhiData phi_corrections(const ContourGrid& grid, double beta, const Potential& W);

// Universal constants fixed by the circle case.
double c1_constant(double beta);
double c2_constant(double beta);

ExpansionResult free_energy(const ContourGrid& grid, const InteriorMapData* imap,
                            double beta, const Potential& W);

// log Z prediction: log N! + (beta-1) N log N + F0 N^2 + F1 N + F2.
double predict_logZ(const ExpansionResult& result, double beta, long N);

struct ConsistencyReport {
  double entropy_residual;    // |∮ rho0 log rho0 ds + log(2 pi r)|
  double f2q_route_residual;  // |F2q - F2q_alt|
  double phi_relation_residual;  // boundary relation at hbar = 1/16
  double phi_relation_order;     // fitted residual ratio between hbar halvings
};
ConsistencyReport internal_consistency(const ContourGrid& grid,
                                       const InteriorMapData* imap, double beta);

}  // namespace loggas::expansion
