#include "loggas/expansion.hpp"

#include <cmath>

#include "loggas/fourier.hpp"
#include "loggas/operators.hpp"

namespace loggas::expansion {

namespace {

Field apply_jump(const ContourGrid& grid, const InteriorMapData* imap,
                 const Field& f) {
  if (imap != nullptr) return ops::neumann_jump(grid, *imap, f);
  return ops::neumann_jump(grid, f);
}

void check_band_limit(const ContourGrid& grid, const Potential& W) {
  if (W.kind == Potential::Kind::FourierT && W.max_harmonic() >= grid.M / 4) {
    throw Error(ErrorCode::InvalidArgument,
                "potential harmonics must stay below M/4");
  }
}

}  // namespace

Field rho0(const ContourGrid& grid) {
  Field out(grid.M);
  for (int j = 0; j < grid.M; ++j) out[j] = grid.wprime_ext[j] / kTwoPi;
  return out;
}

std::pair<Field, Field> density_corrections(const ContourGrid& grid,
                                            const InteriorMapData* imap,
                                            double beta, const Potential& W) {
  if (!(beta > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  }
  check_band_limit(grid, W);
  const int M = grid.M;
  const Field r0 = rho0(grid);

  Field log_r0(M);
  for (int j = 0; j < M; ++j) log_r0[j] = std::log(r0[j]);
  const Field Wv = W.node_values(grid, beta);

  const double ca = (beta - 1.0) / (4.0 * kPi * beta);
  const double cb = 1.0 / (4.0 * kPi * beta);

  const Field N_logr0 = apply_jump(grid, imap, log_r0);
  const Field N_W = apply_jump(grid, imap, Wv);

  Field rho1(M);
  for (int j = 0; j < M; ++j) rho1[j] = ca * N_logr0[j] + cb * N_W[j];

  // rho2 = N (rho1 / rho0) * (beta-1)/(4 pi beta).
  Field ratio(M);
  for (int j = 0; j < M; ++j) ratio[j] = rho1[j] / r0[j];
  const Field N_ratio = apply_jump(grid, imap, ratio);
  Field rho2(M);
  for (int j = 0; j < M; ++j) rho2[j] = ca * N_ratio[j];

  return {rho1, rho2};
}

PhiData phi_corrections(const ContourGrid& grid, double beta,
                        const Potential& W) {
  check_band_limit(grid, W);
  const int M = grid.M;
  const Field r0 = rho0(grid);
  Field log_r0(M);
  for (int j = 0; j < M; ++j) log_r0[j] = std::log(r0[j]);
  const Field Wv = W.node_values(grid, beta);

  // Means in the exterior angle give the harmonic-extension values at infinity.
  const double logr0_inf = fourier::mean(log_r0);
  const double W_inf = fourier::mean(Wv);

  PhiData out;
  out.phi0_inside = -2.0 * beta * std::log(grid.spec.r);
  out.phi1.resize(M);
  for (int j = 0; j < M; ++j) {
    out.phi1[j] = (beta - 1.0) * (log_r0[j] - logr0_inf) + Wv[j] - W_inf;
  }
  out.lambda0 = out.phi0_inside;
  out.lambda1 = -W_inf - (beta - 1.0) * logr0_inf;
  return out;
}

double c1_constant(double beta) {
  return (beta - 1.0) * std::log(kTwoPi * beta / std::exp(1.0)) +
         std::log(kTwoPi) - std::lgamma(beta);
}

double c2_constant(double beta) { return 0.5 * std::log(2.0 * beta); }

ExpansionResult free_energy(const ContourGrid& grid,
                            const InteriorMapData* imap, double beta,
                            const Potential& W) {
  if (!(beta > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  }
  check_band_limit(grid, W);
  const int M = grid.M;

  ExpansionResult res;
  res.rho0 = rho0(grid);
  std::tie(res.rho1, res.rho2) = density_corrections(grid, imap, beta, W);

  const PhiData phi = phi_corrections(grid, beta, W);
  res.phi1 = phi.phi1;
  res.phi0_inside = phi.phi0_inside;
  res.lambda0 = phi.lambda0;
  res.lambda1 = phi.lambda1;

  res.c1 = c1_constant(beta);
  res.c2 = c2_constant(beta);

  res.F0 = beta * std::log(grid.spec.r);

  Field log_r0(M);
  for (int j = 0; j < M; ++j) log_r0[j] = std::log(res.rho0[j]);
  const Field Wv = W.node_values(grid, beta);

  Field ent(M), rW(M);
  for (int j = 0; j < M; ++j) {
    ent[j] = res.rho0[j] * log_r0[j];
    rW[j] = res.rho0[j] * Wv[j];
  }
  res.F1 = (beta - 1.0) * grid.integrate_ds(ent) + grid.integrate_ds(rW) + res.c1;

  // Classical quadratic form (1/8 pi beta) ∮ u N u ds, u = (beta-1) log rho0 + W.
  Field u(M);
  for (int j = 0; j < M; ++j) u[j] = (beta - 1.0) * log_r0[j] + Wv[j];
  const Field Nu = apply_jump(grid, imap, u);
  Field uNu(M);
  for (int j = 0; j < M; ++j) uNu[j] = u[j] * Nu[j];
  res.F2cl = grid.integrate_ds(uNu) / (8.0 * kPi * beta);

  const ops::BoundaryOperator V = ops::build_double_layer(grid);
  const std::vector<double> spec = ops::fredholm_spectrum(V, grid);
  res.detIV = ops::fredholm_determinant(spec);
  res.logdetprimeN = ops::detprime_neumann(spec, grid.perimeter);
  res.F2q = -0.5 * std::log(res.detIV) + res.c2;
  res.F2q_alt = 0.5 * res.logdetprimeN - 0.5 * std::log(grid.perimeter) + res.c2;

  return res;
}

double predict_logZ(const ExpansionResult& result, double beta, long N) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  const double n = static_cast<double>(N);
  return std::lgamma(n + 1.0) + (beta - 1.0) * n * std::log(n) +
         result.F0 * n * n + result.F1 * n + result.F2cl + result.F2q;
}

ConsistencyReport internal_consistency(const ContourGrid& grid,
                                       const InteriorMapData* imap,
                                       double beta) {
  const Potential W = Potential::zero();
  const ExpansionResult res = free_energy(grid, imap, beta, W);
  const int M = grid.M;

  ConsistencyReport rep;

  Field ent(M);
  for (int j = 0; j < M; ++j) ent[j] = res.rho0[j] * std::log(res.rho0[j]);
  rep.entropy_residual =
      std::abs(grid.integrate_ds(ent) + std::log(kTwoPi * grid.spec.r));

  rep.f2q_route_residual = std::abs(res.F2q - res.F2q_alt);

  // Boundary relation <phi> = hbar W + hbar (beta-1) log <rho> + lambda,
  // truncated at O(hbar): the defect must shrink like hbar^2.
  auto relation_residual = [&](double hbar) {
    double worst = 0.0;
    for (int j = 0; j < M; ++j) {
      const double lhs = res.phi0_inside + hbar * res.phi1[j];
      const double rho = res.rho0[j] + hbar * res.rho1[j];
      const double rhs = hbar * (beta - 1.0) * std::log(rho) + res.lambda0 +
                         hbar * res.lambda1;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
  };
  const double r16 = relation_residual(1.0 / 16.0);
  const double r32 = relation_residual(1.0 / 32.0);
  rep.phi_relation_residual = r16;
  rep.phi_relation_order =
      (r32 > 0.0) ? std::log2(r16 / r32) : 2.0;
  return rep;
}

}  // namespace loggas::expansion
