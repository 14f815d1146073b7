#pragma once

// Finite-N ground truth: the joint weight of the gas, exact log Z oracles
// (circle closed form, beta = 1 moment determinant, small-N quadrature),
// a deterministic single-site Metropolis sampler in the exterior angle, and
// the N = 2 stress / loop-equation checks.

#include <cstdint>

#include "loggas/common.hpp"
#include "loggas/geometry.hpp"
#include "loggas/potential.hpp"

namespace loggas::ensemble {

using geometry::ContourGrid;
using geometry::LaurentContour;

struct GasConfig {
  const ContourGrid* grid = nullptr;
  double beta = 1.0;
  long N = 1;
  Potential W;

  double hbar() const { return 1.0 / static_cast<double>(N); }
};

// Joint log weight of positions t_1..t_N (sampling coordinate is t, so the
// arclength Jacobian log sp enters per particle). Coincident positions give
// -inf.
double gas_log_weight(const GasConfig& config, const std::vector<double>& ts);

struct VertexProbe {
  cplx z;
  double alpha = 1.0;
  bool absolute = true;  // |z - z_j|^{2 alpha} vs (z - z_j)^{alpha}
};

struct ChainConfig {
  std::uint64_t seed = 1;
  long steps = 100000;   // single-site Metropolis proposals
  long burnin = 10000;
  double width = 0.5;    // wrapped uniform proposal half-width in t
  int density_bins = 64;
  int pair_bins = 64;
  long sample_stride = 0;  // 0: one sweep (N proposals) between samples
  std::vector<VertexProbe> probes;
  std::vector<cplx> field_points;  // Coulomb-potential covariance probes
};

struct VertexStats {
  cplx mean;
  double stderr_abs = 0.0;  // batch-means error of the modulus
};

struct ChainStats {
  double acceptance_rate = 0.0;
  bool acceptance_ok = true;  // within [0.2, 0.6]
  Field density;              // per density bin, integrates to 1 against ds
  Field density_err;
  Field density_bin_arclen;
  Field pair_hist;  // fraction of pairs per |dt| bin over [0, pi]
  std::vector<VertexStats> vertex;
  std::vector<double> field_mean;             // <u_p>, u_p = sum_i log|z_p - z_i|^2
  std::vector<std::vector<double>> field_cov;  // cov(u_p, u_q)
  std::vector<std::vector<double>> field_cov_err;
  long samples = 0;
};

ChainStats mcmc_run(const GasConfig& config, const ChainConfig& chain);

// log Z at beta = 1 via the moment-matrix determinant, using the grid nodes
// as the quadrature rule (requires M >= 8 N).
double beta1_logZ(const ContourGrid& grid, long N, const Potential& W);

struct OracleValue {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Tensor-product trapezoid quadrature of the defining integral for N <= 3,
// Richardson-extrapolated over M in {128, 256, 512} at the coincidence-cusp
// limited order.
OracleValue smallN_logZ(const LaurentContour& spec, double beta, int N,
                        const Potential& W);

// Closed form on the circle of radius r.
double circle_logZ(double r, double beta, long N);

// Mean stress <T(z)> for the N = 2 gas, z off the contour.
cplx mean_stress_finiteN(const ContourGrid& grid, double beta,
                         const Potential& W, cplx z);

// Max-norm defect of the N = 2 loop equation at the grid resolution.
double bbgky_residual(const ContourGrid& grid, double beta, const Potential& W);

// N = 2 distribution functions by quadrature (R and its normalization are
// used by the stress and loop-equation checks and by MC cross-checks).
struct TwoGas {
  double logZ2;
  Field R;       // mean density, ∮ R ds = 1
  // pair distribution R2(i,j) with the hbar (N-1) prefactor included
  std::vector<Field> R2;
};
TwoGas two_particle_gas(const ContourGrid& grid, double beta, const Potential& W);

// log Z_2 for a parametric curve given by samples (used by deformation
// tests; sp must be the |dz/dt| of the sampled curve).
double logZ2_samples(const CField& z, const Field& sp, const Field& Wv,
                     double beta);

}  // namespace loggas::ensemble
