#include "loggas/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "loggas/fourier.hpp"

namespace loggas::geometry {

cplx LaurentContour::map(cplx w) const {
  cplx acc = r * w + a0;
  cplx u = 1.0 / w;
  cplx p = u;
  for (const cplx& a : coeffs) {
    acc += a * p;
    p *= u;
  }
  return acc;
}

cplx LaurentContour::dmap(cplx w) const {
  cplx acc = r;
  cplx u = 1.0 / w;
  cplx p = u * u;
  for (size_t k = 0; k < coeffs.size(); ++k) {
    acc -= static_cast<double>(k + 1) * coeffs[k] * p;
    p *= u;
  }
  return acc;
}

cplx LaurentContour::d2map(cplx w) const {
  cplx acc = 0.0;
  cplx u = 1.0 / w;
  cplx p = u * u * u;
  for (size_t k = 0; k < coeffs.size(); ++k) {
    const double kk = static_cast<double>(k + 1);
    acc += kk * (kk + 1.0) * coeffs[k] * p;
    p *= u;
  }
  return acc;
}

cplx LaurentContour::d3map(cplx w) const {
  cplx acc = 0.0;
  cplx u = 1.0 / w;
  cplx p = u * u * u * u;
  for (size_t k = 0; k < coeffs.size(); ++k) {
    const double kk = static_cast<double>(k + 1);
    acc -= kk * (kk + 1.0) * (kk + 2.0) * coeffs[k] * p;
    p *= u;
  }
  return acc;
}

LaurentContour LaurentContour::scaled(double c) const {
  LaurentContour out = *this;
  out.r *= c;
  out.a0 *= c;
  for (auto& a : out.coeffs) a *= c;
  return out;
}

UnivalenceReport check_univalence(const LaurentContour& spec, int probe_M) {
  UnivalenceReport rep;
  if (!(spec.r > 0.0)) {
    rep.reason = "exterior conformal radius must be positive";
    return rep;
  }

  // z'(w) = r - sum k a_k w^{-k-1}; with u = 1/w this is the polynomial
  // g(u) = r - sum k a_k u^{k+1}, to be zero-free on |u| <= 1.
  const int n = std::max(probe_M, 4096);
  double min_abs = std::abs(spec.dmap(cplx(1.0, 0.0)));
  double winding = 0.0;
  cplx prev = spec.dmap(std::polar(1.0, 0.0));
  for (int j = 1; j <= n; ++j) {
    const double t = kTwoPi * j / n;
    const cplx g = spec.dmap(std::polar(1.0, t));
    min_abs = std::min(min_abs, std::abs(g));
    winding += std::arg(g / prev);
    prev = g;
  }
  rep.min_dmap_on_circle = min_abs;
  if (min_abs <= 1e-12 * spec.r) {
    rep.reason = "z'(w) vanishes on |w| = 1";
    return rep;
  }
  const long wind = std::lround(winding / kTwoPi);
  if (wind != 0) {
    rep.reason = "z'(w) has zeros in |w| > 1 (winding count " +
                 std::to_string(wind) + ")";
    return rep;
  }

  // Simplicity of the sampled boundary: positive pairwise distance between
  // nodes more than a few steps apart.
  std::vector<cplx> pts(probe_M);
  double scale = 0.0;
  for (int j = 0; j < probe_M; ++j) {
    pts[j] = spec.at_angle(kTwoPi * j / probe_M);
    scale = std::max(scale, std::abs(pts[j] - spec.a0));
  }
  double min_dist = 2.0 * scale;
  const int sep = 4;
  for (int i = 0; i < probe_M; ++i) {
    for (int j = i + sep; j < probe_M; ++j) {
      if (i + probe_M - j < sep) continue;  // cyclic separation
      min_dist = std::min(min_dist, std::abs(pts[i] - pts[j]));
    }
  }
  rep.min_node_distance = min_dist;
  if (!(min_dist > 1e-9 * scale)) {
    rep.reason = "sampled boundary curve is not simple";
    return rep;
  }

  rep.ok = true;
  return rep;
}

ContourGrid build_contour(const LaurentContour& spec, int M) {
  if (M < 8 || M % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "M must be even and >= 8");
  }
  const UnivalenceReport rep = check_univalence(spec);
  if (!rep.ok) {
    throw Error(ErrorCode::NonUnivalent, rep.reason);
  }

  ContourGrid g;
  g.spec = spec;
  g.M = M;
  g.t.resize(M);
  g.z.resize(M);
  g.dz.resize(M);
  g.nu.resize(M);
  g.kappa.resize(M);
  g.sp.resize(M);
  g.wprime_ext.resize(M);

  for (int j = 0; j < M; ++j) {
    const double t = kTwoPi * j / M;
    const cplx w = std::polar(1.0, t);
    const cplx zp = spec.dmap(w);
    g.t[j] = t;
    g.z[j] = spec.map(w);
    g.dz[j] = cplx(0.0, 1.0) * w * zp;  // dz/dt = i w z'(w)
    g.sp[j] = std::abs(zp);
    g.wprime_ext[j] = 1.0 / g.sp[j];
    g.nu[j] = -cplx(0.0, 1.0) * g.dz[j] / g.sp[j];
  }

  // Spectral tail of z(e^{it}): the highest mode must be resolved.
  {
    Field re(M), im(M);
    for (int j = 0; j < M; ++j) {
      re[j] = g.z[j].real();
      im[j] = g.z[j].imag();
    }
    const double tail = fourier::tail_fraction(re, im, M / 2 - 1);
    if (tail > 1e-12) {
      throw Error(ErrorCode::GridTooCoarse,
                  "spectral tail of z(e^{it}) not resolved: " +
                      std::to_string(tail));
    }
  }

  // Curvature kappa = i nu d/ds(conj nu); the imaginary residue must vanish.
  {
    Field nur(M), nui(M);
    for (int j = 0; j < M; ++j) {
      nur[j] = g.nu[j].real();
      nui[j] = -g.nu[j].imag();  // conj(nu)
    }
    const Field dr = fourier::deriv_t(nur);
    const Field di = fourier::deriv_t(nui);
    double max_imag = 0.0;
    for (int j = 0; j < M; ++j) {
      const cplx dnubar = cplx(dr[j], di[j]) / g.sp[j];
      const cplx k = cplx(0.0, 1.0) * g.nu[j] * dnubar;
      g.kappa[j] = k.real();
      max_imag = std::max(max_imag, std::abs(k.imag()));
    }
    if (max_imag > 1e-10 * (1.0 + std::abs(g.kappa[0]))) {
      throw Error(ErrorCode::GridTooCoarse,
                  "curvature imaginary residue " + std::to_string(max_imag));
    }
  }

  g.perimeter = 0.0;
  for (int j = 0; j < M; ++j) g.perimeter += g.sp[j];
  g.perimeter *= kTwoPi / M;

  return g;
}

double ContourGrid::integrate_ds(const Field& f) const {
  double s = 0.0;
  for (int j = 0; j < M; ++j) s += f[j] * sp[j];
  return s * kTwoPi / M;
}

cplx ContourGrid::integrate_ds(const CField& f) const {
  cplx s = 0.0;
  for (int j = 0; j < M; ++j) s += f[j] * sp[j];
  return s * (kTwoPi / M);
}

Field spectral_ds(const Field& f, const ContourGrid& grid) {
  Field d = fourier::deriv_t(f);
  for (int j = 0; j < grid.M; ++j) d[j] /= grid.sp[j];
  return d;
}

CField spectral_ds(const CField& f, const ContourGrid& grid) {
  CField d = fourier::deriv_t(f);
  for (int j = 0; j < grid.M; ++j) d[j] /= grid.sp[j];
  return d;
}

int winding_number(const ContourGrid& grid, cplx z0) {
  double acc = 0.0;
  cplx prev = grid.z[grid.M - 1] - z0;
  for (int j = 0; j < grid.M; ++j) {
    const cplx cur = grid.z[j] - z0;
    acc += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(acc / kTwoPi));
}

double node_distance(const ContourGrid& grid, cplx z0) {
  double d = std::abs(grid.z[0] - z0);
  for (int j = 1; j < grid.M; ++j) d = std::min(d, std::abs(grid.z[j] - z0));
  return d;
}

}  // namespace loggas::geometry
