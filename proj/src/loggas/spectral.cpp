#include "loggas/spectral.hpp"

#include <cmath>

#include "loggas/fourier.hpp"
#include "loggas/operators.hpp"

namespace loggas::spectral {

LaurentContour DeformationDirection::apply(const LaurentContour& spec,
                                           double eps) const {
  LaurentContour out = spec;
  if (dilation) {
    out.r += eps;
    return out;
  }
  if (mode == 0) {
    out.a0 += eps * std::polar(1.0, phase);
    return out;
  }
  if (static_cast<size_t>(mode) > out.coeffs.size()) {
    out.coeffs.resize(mode, cplx(0.0, 0.0));
  }
  out.coeffs[mode - 1] += eps * std::polar(1.0, phase);
  return out;
}

Field DeformationDirection::displacement(const ContourGrid& grid) const {
  Field out(grid.M);
  for (int j = 0; j < grid.M; ++j) {
    const cplx w = std::polar(1.0, grid.t[j]);
    const cplx dz = dilation ? w : std::polar(1.0, phase) * std::pow(w, -mode);
    out[j] = (std::conj(grid.nu[j]) * dz).real();
  }
  return out;
}

namespace {

// (1/12 pi) ∮_{|w|=1} (phi dphi/dn + 2 phi) |dw| with the +|k| (interior) or
// -|k| (exterior) harmonic-extension multiplier for the normal derivative.
double pa_integral(const Field& phi, double multiplier_sign) {
  const int M = static_cast<int>(phi.size());
  Field dn = fourier::abs_k_multiplier(phi);
  double acc = 0.0;
  for (int j = 0; j < M; ++j) {
    acc += phi[j] * multiplier_sign * dn[j] + 2.0 * phi[j];
  }
  return acc * (kTwoPi / M) / (12.0 * kPi);
}

}  // namespace

double logdet_laplacian_exterior(const ContourGrid& grid) {
  const int M = grid.M;
  Field phi(M);
  for (int j = 0; j < M; ++j) {
    phi[j] = std::log(std::abs(grid.spec.dmap(std::polar(1.0, grid.t[j]))));
  }
  return pa_integral(phi, -1.0);
}

double logdet_laplacian_interior(const ContourGrid& grid,
                                 const InteriorMapData& imap) {
  const int M = grid.M;
  // phi_int = log |z'_int| = -log |w'_int| at the boundary correspondence;
  // resample onto the uniform-psi grid before applying the multiplier.
  Field phi_nodes(M);
  for (int j = 0; j < M; ++j) phi_nodes[j] = -std::log(imap.wprime_int[j]);

  Field p(M);
  for (int j = 0; j < M; ++j) p[j] = imap.psi[j] - grid.t[j] - imap.psi[0];
  const fourier::TrigInterp pint(p);
  const fourier::TrigInterp fint(phi_nodes);
  Field phi(M);
  for (int m = 0; m < M; ++m) {
    const double x = kTwoPi * m / M;
    double t = x;
    for (int it = 0; it < 100; ++it) {
      const double val = t + pint.eval_real(t) - x;
      if (std::abs(val) < 1e-13) break;
      t -= val / std::max(1.0 + pint.eval_deriv(t).real(), 0.1);
    }
    phi[m] = fint.eval_real(t);
  }
  return -pa_integral(phi, 1.0);
}

DetReport surgery_check(const ContourGrid& grid, const InteriorMapData& imap) {
  const double li = logdet_laplacian_interior(grid, imap);
  const double le = logdet_laplacian_exterior(grid);
  const double ln = ops::detprime_neumann(grid);
  const double logr = std::log(grid.spec.r);

  DetReport rep;
  rep.logdet_int_rel = li + logr / 3.0;   // circle value is -(1/3) log r
  rep.logdet_ext_rel = le - logr / 3.0;   // circle value is +(1/3) log r
  rep.logdetprimeN = ln;
  // Circle baseline of li + le + ln - log P is -log 2 for every radius.
  rep.surgery_residual =
      li + le + ln - std::log(grid.perimeter) + std::log(2.0);
  return rep;
}

namespace {

double quantity_value(VariedQuantity q, const LaurentContour& spec, int M,
                      const VariationConfig& cfg) {
  switch (q) {
    case VariedQuantity::LogR:
      return std::log(spec.r);
    case VariedQuantity::LogDetExt: {
      const ContourGrid g = geometry::build_contour(spec, M);
      return logdet_laplacian_exterior(g);
    }
    case VariedQuantity::Green: {
      const ContourGrid g = geometry::build_contour(spec, M);
      const InteriorMapData imap = maps::interior_map(g, cplx(0.0, 0.0));
      return maps::green_function(maps::Side::Interior, g, imap, cfg.green_a,
                                  cfg.green_b);
    }
    case VariedQuantity::DetIV: {
      const ContourGrid g = geometry::build_contour(spec, M);
      const auto spect = ops::fredholm_spectrum(ops::build_double_layer(g), g);
      return std::log(ops::fredholm_determinant(spect));
    }
  }
  return 0.0;
}

double predicted_variation(VariedQuantity q, const ContourGrid& grid,
                           const Field& eta, const VariationConfig& cfg) {
  const int M = grid.M;
  Field integrand(M, 0.0);
  switch (q) {
    case VariedQuantity::LogR: {
      // d log r = (1/2 pi) ∮ |w'_ext|^2 dn ds
      for (int j = 0; j < M; ++j) {
        integrand[j] = grid.wprime_ext[j] * grid.wprime_ext[j] * eta[j];
      }
      return grid.integrate_ds(integrand) / kTwoPi;
    }
    case VariedQuantity::LogDetExt: {
      // -(1/6 pi) ∮ (Re(nu^2 {w_ext; z}) - kappa^2) dn ds
      const Field s = maps::re_nu2_schwarzian_ext(grid);
      for (int j = 0; j < M; ++j) {
        integrand[j] = (s[j] - grid.kappa[j] * grid.kappa[j]) * eta[j];
      }
      return -grid.integrate_ds(integrand) / (6.0 * kPi);
    }
    case VariedQuantity::Green: {
      // Interior Hadamard formula: -(1/2 pi) ∮ dG/dn(a) dG/dn(b) dn ds
      const InteriorMapData imap = maps::interior_map(grid, cplx(0.0, 0.0));
      const Field Pa =
          maps::poisson_kernel(maps::Side::Interior, grid, &imap, cfg.green_a);
      const Field Pb =
          maps::poisson_kernel(maps::Side::Interior, grid, &imap, cfg.green_b);
      for (int j = 0; j < M; ++j) integrand[j] = Pa[j] * Pb[j] * eta[j];
      return -grid.integrate_ds(integrand) / kTwoPi;
    }
    case VariedQuantity::DetIV: {
      // d log det(I+V) = (1/6 pi) ∮ Re(nu^2 ({w_int} - {w_ext})) dn ds
      const InteriorMapData imap = maps::interior_map(grid, cplx(0.0, 0.0));
      const Field s = maps::re_nu2_schwarzian_int_minus_ext(grid, imap);
      for (int j = 0; j < M; ++j) integrand[j] = s[j] * eta[j];
      return grid.integrate_ds(integrand) / (6.0 * kPi);
    }
  }
  return 0.0;
}

}  // namespace

VariationReport variation_harness(const LaurentContour& spec,
                                  const VariationConfig& config) {
  const ContourGrid base = geometry::build_contour(spec, config.M);
  const Field eta = config.direction.displacement(base);
  const double pred = predicted_variation(config.quantity, base, eta, config);

  VariationReport rep;
  for (double eps : config.eps) {
    const LaurentContour plus = config.direction.apply(spec, eps);
    const LaurentContour minus = config.direction.apply(spec, -eps);
    if (!geometry::check_univalence(plus).ok ||
        !geometry::check_univalence(minus).ok) {
      throw Error(ErrorCode::DeformationBreaksUnivalence,
                  "deformed contour fails the univalence check");
    }
    const double qp = quantity_value(config.quantity, plus, config.M, config);
    const double qm = quantity_value(config.quantity, minus, config.M, config);
    VariationRow row;
    row.eps = eps;
    row.fd_value = (qp - qm) / (2.0 * eps);
    row.predicted = pred;
    row.mismatch = std::abs(row.fd_value - pred);
    rep.rows.push_back(row);
  }

  if (rep.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& r : rep.rows) {
      if (r.mismatch <= 0.0) continue;
      const double lx = std::log(r.eps), ly = std::log(r.mismatch);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++n;
    }
    if (n >= 2) rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return rep;
}

}  // namespace loggas::spectral
