#include "loggas/correlators.hpp"

#include <cmath>

namespace loggas::correlators {

double phi_pair_connected(const ContourGrid& grid, const InteriorMapData& imap,
                          cplx z, cplx zeta) {
  if (std::abs(z - zeta) < 1e-12 * grid.spec.r) {
    throw Error(ErrorCode::CoincidentPoints, "coincident correlator points");
  }
  const int wz = geometry::winding_number(grid, z);
  const int wzeta = geometry::winding_number(grid, zeta);
  const double logsep = std::log(std::abs(z - zeta) / grid.spec.r);
  if (wz == 0 && wzeta == 0) {
    return maps::green_function(Side::Exterior, grid, z, zeta) -
           maps::green_ext_infinity(grid, z) -
           maps::green_ext_infinity(grid, zeta) - logsep;
  }
  if (wz == 1 && wzeta == 1) {
    return maps::green_function(Side::Interior, grid, imap, z, zeta) - logsep;
  }
  const cplx outer = wz == 0 ? z : zeta;
  return -maps::green_ext_infinity(grid, outer) - logsep;
}

cplx dphi_sq_connected(const ContourGrid& grid, const InteriorMapData& imap,
                       cplx z) {
  const Side side =
      geometry::winding_number(grid, z) == 1 ? Side::Interior : Side::Exterior;
  return maps::schwarzian(side, grid, imap, z) / 6.0;
}

cplx vertex_mean(const ContourGrid& grid, double beta, cplx z, double alpha,
                 long N, VertexKind kind) {
  if (geometry::winding_number(grid, z) != 0) {
    throw Error(ErrorCode::SideMismatch,
                "vertex correlators are exterior-point formulas");
  }
  if (alpha == 0.0) return 1.0;
  const double r = grid.spec.r;
  const cplx w = maps::eval_w_ext(grid, z);
  const cplx wprime = 1.0 / grid.spec.dmap(w);  // dw/dz off the contour
  const double n = static_cast<double>(N);
  if (kind == VertexKind::Holomorphic) {
    // Principal branches; the cut of (r w)^{alpha N} lies along arg w = pi.
    return std::pow(r * w, alpha * n) *
           std::pow(r * wprime, alpha / (2.0 * beta) * (alpha + 1.0 - beta));
  }
  const double aw = std::abs(r * w);
  const double ap = std::abs(r * wprime);
  const double tail = 1.0 - 1.0 / std::norm(w);
  return std::pow(aw, 2.0 * alpha * n) *
         std::pow(ap, alpha / beta * (alpha + 1.0 - beta)) *
         std::pow(tail, -alpha * alpha / beta);
}

cplx vertex_product(const ContourGrid& grid, double beta, const ProbeSet& set,
                    VertexKind kind) {
  const double r = grid.spec.r;
  cplx acc = 1.0;
  std::vector<cplx> ws(set.probes.size());
  for (size_t p = 0; p < set.probes.size(); ++p) {
    const Probe& pr = set.probes[p];
    acc *= vertex_mean(grid, beta, pr.z, pr.alpha, set.N, kind);
    ws[p] = maps::eval_w_ext(grid, pr.z);
  }
  for (size_t p = 0; p < set.probes.size(); ++p) {
    for (size_t q = p + 1; q < set.probes.size(); ++q) {
      const Probe& a = set.probes[p];
      const Probe& b = set.probes[q];
      if (std::abs(a.z - b.z) < 1e-12 * r) {
        throw Error(ErrorCode::CoincidentPoints, "coincident vertex probes");
      }
      const cplx num = r * ws[p] - r * ws[q];
      const cplx den = a.z - b.z;
      const double ee = a.alpha * b.alpha / beta;
      if (kind == VertexKind::Holomorphic) {
        acc *= std::pow(num / den, ee);
      } else {
        const cplx blaschke = 1.0 - (1.0 / ws[p]) * std::conj(1.0 / ws[q]);
        acc *= std::pow(std::abs(num / (den * blaschke)), 2.0 * ee);
      }
    }
  }
  return acc;
}

}  // namespace loggas::correlators
