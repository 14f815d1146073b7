#include "loggas/operators.hpp"

#include <algorithm>
#include <cmath>

#include "loggas/fourier.hpp"
#include "loggas/maps.hpp"

namespace loggas::ops {

Field BoundaryOperator::apply(const Field& f, const ContourGrid& grid) const {
  const int M = grid.M;
  Field out(M, 0.0);
  const double h = kTwoPi / M;
  for (int i = 0; i < M; ++i) {
    double s = 0.0;
    for (int j = 0; j < M; ++j) s += kernel(i, j) * f[j] * grid.sp[j];
    out[i] = s * h;
  }
  return out;
}

CField BoundaryOperator::apply(const CField& f, const ContourGrid& grid) const {
  const int M = grid.M;
  Field re(M), im(M);
  for (int j = 0; j < M; ++j) {
    re[j] = f[j].real();
    im[j] = f[j].imag();
  }
  const Field ure = apply(re, grid);
  const Field uim = apply(im, grid);
  CField out(M);
  for (int j = 0; j < M; ++j) out[j] = cplx(ure[j], uim[j]);
  return out;
}

Field BoundaryOperator::apply_adjoint(const Field& f,
                                      const ContourGrid& grid) const {
  const int M = grid.M;
  Field out(M, 0.0);
  const double h = kTwoPi / M;
  for (int i = 0; i < M; ++i) {
    double s = 0.0;
    for (int j = 0; j < M; ++j) s += kernel(j, i) * f[j] * grid.sp[j];
    out[i] = s * h;
  }
  return out;
}

Eigen::MatrixXd BoundaryOperator::weighted(const ContourGrid& grid) const {
  const int M = grid.M;
  Eigen::MatrixXd B = kernel;
  const double h = kTwoPi / M;
  for (int j = 0; j < M; ++j) B.col(j) *= h * grid.sp[j];
  return B;
}

BoundaryOperator build_double_layer(const ContourGrid& grid) {
  const int M = grid.M;
  BoundaryOperator op;
  op.kernel.resize(M, M);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      if (i == j) {
        op.kernel(i, j) = grid.kappa[i] / kTwoPi;
      } else {
        const cplx q = grid.nu[j] / (grid.z[j] - grid.z[i]);
        op.kernel(i, j) = q.real() / kPi;
      }
    }
  }
  return op;
}

BoundaryOperator build_single_layer(const ContourGrid& grid) {
  const int M = grid.M;
  // Quadrature weights for the periodic log kernel: exact on trigonometric
  // polynomials of degree < M/2 (Martensen/Kussmaul).
  std::vector<double> R(M);
  for (int m = 0; m < M; ++m) {
    double s = 0.0;
    for (int n = 1; n < M / 2; ++n) {
      s += std::cos(kTwoPi * n * m / M) / n;
    }
    s += (m % 2 == 0 ? 1.0 : -1.0) / M;
    R[m] = -(kTwoPi / M) * s;
  }

  BoundaryOperator op;
  op.kernel.resize(M, M);
  const double scale = static_cast<double>(M) / kTwoPi;
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      double S;
      if (i == j) {
        S = std::log(grid.sp[i]);
      } else {
        const double chord = std::abs(grid.z[i] - grid.z[j]);
        const double s2 = 2.0 * std::abs(std::sin(0.5 * (grid.t[i] - grid.t[j])));
        S = std::log(chord / s2);
      }
      op.kernel(i, j) = -(R[std::abs(i - j)] * scale + S) / kTwoPi;
    }
  }
  return op;
}

Field dtn_exterior(const ContourGrid& grid, const Field& f) {
  Field lam = fourier::abs_k_multiplier(f);
  for (int j = 0; j < grid.M; ++j) lam[j] *= -grid.wprime_ext[j];
  return lam;
}

CField dtn_exterior(const ContourGrid& grid, const CField& f) {
  CField lam = fourier::abs_k_multiplier(f);
  for (int j = 0; j < grid.M; ++j) lam[j] *= -grid.wprime_ext[j];
  return lam;
}

namespace {

// Inverts the monotone correspondence x(t) = t + p(t) (p periodic) at x.
double invert_psi(const fourier::TrigInterp& p, double x) {
  double t = x;
  for (int it = 0; it < 100; ++it) {
    const double val = t + p.eval_real(t) - x;
    if (std::abs(val) < 1e-13) return t;
    const double slope = 1.0 + p.eval_deriv(t).real();
    t -= val / std::max(slope, 0.1);
  }
  throw Error(ErrorCode::NoConvergence, "psi inversion did not converge");
}

}  // namespace

Field dtn_interior(const ContourGrid& grid, const maps::InteriorMapData& imap,
                   const Field& f) {
  const int M = grid.M;
  const double psi0 = imap.psi[0] - grid.t[0];

  Field p(M);
  for (int j = 0; j < M; ++j) p[j] = imap.psi[j] - grid.t[j] - psi0;
  const fourier::TrigInterp pint(p);
  const fourier::TrigInterp fint(f);

  // Resample onto the uniform-psi grid x_m = 2*pi*m/M (x = psi - psi(0)).
  Field ftil(M);
  for (int m = 0; m < M; ++m) {
    const double x = kTwoPi * m / M;
    const double t = invert_psi(pint, x);
    ftil[m] = fint.eval_real(t);
  }

  Field lam = fourier::abs_k_multiplier(ftil);

  const fourier::TrigInterp lint(lam);
  Field out(M);
  for (int j = 0; j < M; ++j) {
    const double x = imap.psi[j] - imap.psi[0];
    out[j] = imap.wprime_int[j] * lint.eval_real(x);
  }
  return out;
}

Field neumann_jump(const ContourGrid& grid, const maps::InteriorMapData& imap,
                   const Field& f) {
  const Field plus = dtn_interior(grid, imap, f);
  const Field minus = dtn_exterior(grid, f);
  Field out(grid.M);
  for (int j = 0; j < grid.M; ++j) out[j] = plus[j] - minus[j];
  return out;
}

Field neumann_jump(const ContourGrid& grid, const Field& f) {
  const BoundaryOperator V = build_double_layer(grid);
  const Field x = solve_I_plus_V(grid, V, f);
  Field out = dtn_exterior(grid, x);
  for (auto& v : out) v *= -2.0;
  return out;
}

Field solve_I_plus_V(const ContourGrid& grid, const BoundaryOperator& V,
                     const Field& f) {
  const int M = grid.M;
  Eigen::MatrixXd A = V.weighted(grid);
  A += Eigen::MatrixXd::Identity(M, M);
  Eigen::VectorXd b(M);
  for (int j = 0; j < M; ++j) b(j) = f[j];
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Eigen::VectorXd x = lu.solve(b);
  const double resid = (A * x - b).norm();
  if (!(resid < 1e-8 * (1.0 + b.norm()))) {
    throw Error(ErrorCode::SolveFailure,
                "(I+V) solve residual " + std::to_string(resid));
  }
  Field out(M);
  for (int j = 0; j < M; ++j) out[j] = x(j);
  return out;
}

std::vector<double> fredholm_spectrum(const BoundaryOperator& V,
                                      const ContourGrid& grid,
                                      double imag_tol) {
  Eigen::MatrixXd B = V.weighted(grid);
  Eigen::EigenSolver<Eigen::MatrixXd> es(B, /*computeEigenvectors=*/false);
  const auto& ev = es.eigenvalues();
  std::vector<double> out(ev.size());
  double max_imag = 0.0;
  for (int i = 0; i < ev.size(); ++i) {
    max_imag = std::max(max_imag, std::abs(ev(i).imag()));
    out[i] = ev(i).real();
  }
  if (max_imag > imag_tol) {
    throw Error(ErrorCode::ComplexSpectrum,
                "residual imaginary parts " + std::to_string(max_imag) +
                    " exceed tolerance (grid too coarse)");
  }
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

double fredholm_determinant(const std::vector<double>& spectrum,
                            double drop_tol, double* alt_route) {
  double det = 1.0;
  for (double lam : spectrum) {
    if (std::abs(lam) > drop_tol) det *= 1.0 + lam;
  }
  if (alt_route != nullptr) {
    // 2 * det'(I - V): the unit eigenvalue of V (zero mode of I - V) removed.
    double d = 2.0;
    bool skipped_unit = false;
    for (double lam : spectrum) {
      if (!skipped_unit && std::abs(lam - 1.0) < 1e-6) {
        skipped_unit = true;
        continue;
      }
      if (std::abs(lam) > drop_tol) d *= 1.0 - lam;
    }
    *alt_route = d;
  }
  return det;
}

double detprime_neumann(const std::vector<double>& spectrum, double perimeter) {
  const double det = fredholm_determinant(spectrum);
  return -std::log(det) + std::log(perimeter);
}

double detprime_neumann(const ContourGrid& grid) {
  const BoundaryOperator V = build_double_layer(grid);
  const std::vector<double> spec = fredholm_spectrum(V, grid);
  return detprime_neumann(spec, grid.perimeter);
}

}  // namespace loggas::ops
