#include "loggas/maps.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "loggas/fourier.hpp"
#include "loggas/operators.hpp"

namespace loggas::maps {

namespace {

double contour_scale(const ContourGrid& grid) {
  return std::max(grid.spec.r, grid.perimeter / kTwoPi);
}

}  // namespace

cplx eval_w_ext(const ContourGrid& grid, cplx z) {
  const LaurentContour& spec = grid.spec;
  const double guard = 1e-3 * spec.r;
  if (geometry::node_distance(grid, z) < guard) {
    throw Error(ErrorCode::NotExterior, "point within the guard band of the contour");
  }
  if (geometry::winding_number(grid, z) != 0) {
    throw Error(ErrorCode::NotExterior, "point lies inside the contour");
  }
  cplx w = (z - spec.a0) / spec.r;
  if (std::abs(w) < 1.0) w /= std::abs(w);
  const double tol = 1e-12 * std::max(spec.r, std::abs(z));
  for (int it = 0; it < 100; ++it) {
    const cplx res = spec.map(w) - z;
    if (std::abs(res) < tol) {
      if (std::abs(w) <= 1.0) {
        throw Error(ErrorCode::NoConvergence, "inverse landed inside the unit disk");
      }
      return w;
    }
    cplx step = res / spec.dmap(w);
    // Keep iterates out of the unit disk where the map is not defined.
    cplx next = w - step;
    while (std::abs(next) < 1.0 + 1e-14 && std::abs(step) > 1e-15) {
      step *= 0.5;
      next = w - step;
    }
    w = next;
  }
  throw Error(ErrorCode::NoConvergence, "Newton iteration for w_ext did not converge");
}

InteriorMapData interior_map(const ContourGrid& grid, cplx center) {
  const int M = grid.M;
  if (geometry::winding_number(grid, center) != 1) {
    throw Error(ErrorCode::CenterOutside, "center is not strictly inside the contour");
  }

  Field f(M);
  for (int j = 0; j < M; ++j) f[j] = -std::log(std::abs(grid.z[j] - center));

  const ops::BoundaryOperator V = ops::build_double_layer(grid);
  Eigen::MatrixXd A = V.weighted(grid);
  A += Eigen::MatrixXd::Identity(M, M);
  Eigen::VectorXd b(M);
  for (int j = 0; j < M; ++j) b(j) = f[j];
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Eigen::VectorXd gv = lu.solve(b);
  const double resid = (A * gv - b).norm() / (1.0 + b.norm());
  if (!(resid < 1e-10)) {
    throw Error(ErrorCode::IllConditioned,
                "(I+V) Dirichlet solve residual " + std::to_string(resid));
  }
  Field g(M);
  for (int j = 0; j < M; ++j) g[j] = gv(j);

  // Boundary limit of the Cauchy transform F(z) = (-i/pi) \oint g/(xi-z) dxi:
  // F(z_i+) = (-i/pi) \oint (g - g_i)/(xi - z_i) dxi + 2 g_i. Re F recovers
  // the Dirichlet data, Im F is the harmonic conjugate.
  const Field gdot = fourier::deriv_t(g);
  Field u(M), v(M);
  const double h = kTwoPi / M;
  for (int i = 0; i < M; ++i) {
    cplx acc(0.0, 0.0);
    for (int j = 0; j < M; ++j) {
      if (j == i) continue;
      acc += (g[j] - g[i]) * grid.dz[j] / (grid.z[j] - grid.z[i]);
    }
    acc += gdot[i];  // removable-singularity limit of the integrand
    acc *= h;
    const cplx F = cplx(0.0, -1.0 / kPi) * acc + 2.0 * g[i];
    u[i] = F.real();
    v[i] = F.imag();
  }

  InteriorMapData out;
  out.center = center;
  out.density = g;
  out.conjugate = v;

  double dres = 0.0;
  for (int i = 0; i < M; ++i) dres = std::max(dres, std::abs(u[i] - f[i]));
  out.dirichlet_residual = dres;

  const Field dsv = geometry::spectral_ds(v, grid);
  out.wprime_int.resize(M);
  for (int i = 0; i < M; ++i) {
    const cplx q = grid.nu[i] / (grid.z[i] - center);
    out.wprime_int[i] = q.real() + dsv[i];
  }

  double turning = 0.0;
  for (int i = 0; i < M; ++i) turning += out.wprime_int[i] * grid.sp[i];
  turning *= h;
  out.turning_residual = std::abs(turning - kTwoPi);

  for (int i = 0; i < M; ++i) {
    if (!(out.wprime_int[i] * grid.sp[i] > 0.0)) {
      throw Error(ErrorCode::IllConditioned,
                  "boundary correspondence is not monotone");
    }
  }

  // Rotation constant: w_int = (z - center) exp(F(z) + i c), c = -Im F(center).
  {
    cplx acc(0.0, 0.0);
    for (int j = 0; j < M; ++j) acc += g[j] * grid.dz[j] / (grid.z[j] - center);
    acc *= h;
    const cplx Fc = cplx(0.0, -1.0 / kPi) * acc;
    out.rotation = -Fc.imag();
  }

  // psi as the cumulative arclength integral of |w'_int| (slope-one ramp in t
  // plus a periodic part), anchored at node zero.
  Field integrand(M);
  for (int i = 0; i < M; ++i) integrand[i] = out.wprime_int[i] * grid.sp[i];
  Field cumulative = fourier::antideriv_t(integrand);
  const double psi0 = std::arg(grid.z[0] - center) + v[0] + out.rotation;
  out.psi.resize(M);
  for (int i = 0; i < M; ++i) out.psi[i] = psi0 + cumulative[i];

  return out;
}

cplx w_int_at(const ContourGrid& grid, const InteriorMapData& imap, cplx z) {
  const int M = grid.M;
  cplx acc(0.0, 0.0);
  for (int j = 0; j < M; ++j) {
    acc += std::polar(1.0, imap.psi[j]) * grid.dz[j] / (grid.z[j] - z);
  }
  acc *= kTwoPi / M;
  return acc / cplx(0.0, kTwoPi);
}

namespace {

cplx schwarzian_of_laurent_at_w(const LaurentContour& spec, cplx w) {
  const cplx d1 = spec.dmap(w);
  const cplx d2 = spec.d2map(w);
  const cplx d3 = spec.d3map(w);
  const cplx S_zw = d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1);
  return -S_zw / (d1 * d1);  // inverse-function rule gives {w; z}
}

cplx schwarzian_interior_fd(const ContourGrid& grid,
                            const InteriorMapData& imap, cplx z) {
  const double dist = geometry::node_distance(grid, z);
  const double h = std::max(0.02 * dist, 1e-4 * contour_scale(grid));
  auto f = [&](cplx p) { return w_int_at(grid, imap, p); };

  auto derivs_at = [&](double step) {
    const cplx fp1 = f(z + step), fm1 = f(z - step);
    const cplx fp2 = f(z + 2.0 * step), fm2 = f(z - 2.0 * step);
    const cplx f0 = f(z);
    const cplx d1 = (fp1 - fm1) / (2.0 * step);
    const cplx d2 = (fp1 - 2.0 * f0 + fm1) / (step * step);
    const cplx d3 = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * step * step * step);
    return std::array<cplx, 3>{d1, d2, d3};
  };

  const auto ch = derivs_at(h);
  const auto ch2 = derivs_at(0.5 * h);
  const cplx d1 = (4.0 * ch2[0] - ch[0]) / 3.0;
  const cplx d2 = (4.0 * ch2[1] - ch[1]) / 3.0;
  const cplx d3 = (4.0 * ch2[2] - ch[2]) / 3.0;
  return d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1);
}

}  // namespace

cplx schwarzian(Side side, const ContourGrid& grid, cplx z) {
  if (side != Side::Exterior) {
    throw Error(ErrorCode::SideMismatch,
                "interior Schwarzian requires the interior map");
  }
  const cplx w = eval_w_ext(grid, z);
  return schwarzian_of_laurent_at_w(grid.spec, w);
}

cplx schwarzian(Side side, const ContourGrid& grid, const InteriorMapData& imap,
                cplx z) {
  const int wind = geometry::winding_number(grid, z);
  if (side == Side::Exterior) {
    if (wind != 0) throw Error(ErrorCode::SideMismatch, "point not exterior");
    return schwarzian(Side::Exterior, grid, z);
  }
  if (wind != 1) throw Error(ErrorCode::SideMismatch, "point not interior");
  return schwarzian_interior_fd(grid, imap, z);
}

cplx schwarzian_ext_at_node(const ContourGrid& grid, int j) {
  return schwarzian_of_laurent_at_w(grid.spec, std::polar(1.0, grid.t[j]));
}

CField schwarzian_z_of_t(const ContourGrid& grid) {
  const int M = grid.M;
  CField out(M);
  for (int j = 0; j < M; ++j) {
    const cplx w = std::polar(1.0, grid.t[j]);
    const cplx d1 = grid.spec.dmap(w);
    const cplx d2 = grid.spec.d2map(w);
    const cplx d3 = grid.spec.d3map(w);
    const cplx zdot = cplx(0.0, 1.0) * w * d1;
    const cplx zddot = -w * d1 - w * w * d2;
    const cplx zdddot = -cplx(0.0, 1.0) * (w * d1 + 3.0 * w * w * d2 + w * w * w * d3);
    out[j] = zdddot / zdot - 1.5 * (zddot / zdot) * (zddot / zdot);
  }
  return out;
}

Field re_nu2_schwarzian_ext(const ContourGrid& grid) {
  const CField zt = schwarzian_z_of_t(grid);
  Field out(grid.M);
  for (int j = 0; j < grid.M; ++j) {
    out[j] = (zt[j].real() - 0.5) / (grid.sp[j] * grid.sp[j]);
  }
  return out;
}

Field im_nu2_schwarzian_ext(const ContourGrid& grid) {
  const CField zt = schwarzian_z_of_t(grid);
  Field out(grid.M);
  for (int j = 0; j < grid.M; ++j) {
    out[j] = zt[j].imag() / (grid.sp[j] * grid.sp[j]);
  }
  return out;
}

Field re_nu2_schwarzian_int_minus_ext(const ContourGrid& grid,
                                      const InteriorMapData& imap) {
  // Boundary correspondence route: with boundary values e^{i psi(t)},
  //   {w_int; z} zdot^2 = psi'^2/2 + {psi; t} - {z; t},
  // so nu^2({w_int}-{w_ext}) = -(psi'^2/2 + {psi; t} - 1/2)/sp^2.
  const int M = grid.M;
  Field p(M);
  for (int j = 0; j < M; ++j) p[j] = imap.psi[j] - grid.t[j];
  const Field p1 = fourier::deriv_t(p);
  const Field p2 = fourier::deriv_t(p1);
  const Field p3 = fourier::deriv_t(p2);
  Field out(M);
  for (int j = 0; j < M; ++j) {
    const double d1 = 1.0 + p1[j];
    const double d2 = p2[j];
    const double d3 = p3[j];
    const double spsi = d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1);
    out[j] = -(0.5 * d1 * d1 + spsi - 0.5) / (grid.sp[j] * grid.sp[j]);
  }
  return out;
}

namespace {

double green_from_w(cplx wz, cplx wzeta) {
  return std::log(std::abs((wz - wzeta) / (1.0 - wz * std::conj(wzeta))));
}

}  // namespace

double green_function(Side side, const ContourGrid& grid, cplx z, cplx zeta) {
  if (side != Side::Exterior) {
    throw Error(ErrorCode::SideMismatch,
                "interior Green's function requires the interior map");
  }
  if (std::abs(z - zeta) < 1e-12 * contour_scale(grid)) {
    throw Error(ErrorCode::CoincidentPoints, "Green's function at coincident points");
  }
  return green_from_w(eval_w_ext(grid, z), eval_w_ext(grid, zeta));
}

double green_function(Side side, const ContourGrid& grid,
                      const InteriorMapData& imap, cplx z, cplx zeta) {
  if (side == Side::Exterior) return green_function(side, grid, z, zeta);
  if (std::abs(z - zeta) < 1e-12 * contour_scale(grid)) {
    throw Error(ErrorCode::CoincidentPoints, "Green's function at coincident points");
  }
  if (geometry::winding_number(grid, z) != 1 ||
      geometry::winding_number(grid, zeta) != 1) {
    throw Error(ErrorCode::SideMismatch, "points not interior");
  }
  return green_from_w(w_int_at(grid, imap, z), w_int_at(grid, imap, zeta));
}

double green_ext_infinity(const ContourGrid& grid, cplx z) {
  return -std::log(std::abs(eval_w_ext(grid, z)));
}

Field poisson_kernel(Side side, const ContourGrid& grid,
                     const InteriorMapData* imap, cplx z) {
  const int M = grid.M;
  Field out(M);
  if (side == Side::Interior) {
    if (imap == nullptr) {
      throw Error(ErrorCode::InvalidArgument, "interior Poisson kernel needs the interior map");
    }
    const cplx wz = w_int_at(grid, *imap, z);
    for (int j = 0; j < M; ++j) {
      const cplx wj = std::polar(1.0, imap->psi[j]);
      out[j] = imap->wprime_int[j] * (1.0 - std::norm(wz)) / std::norm(wj - wz);
    }
  } else {
    const cplx wz = eval_w_ext(grid, z);
    for (int j = 0; j < M; ++j) {
      const cplx wj = std::polar(1.0, grid.t[j]);
      out[j] = grid.wprime_ext[j] * (1.0 - std::norm(wz)) / std::norm(wj - wz);
    }
  }
  return out;
}

HarmonicExtension::HarmonicExtension(Side side, const ContourGrid& grid,
                                     Field data, const InteriorMapData* imap)
    : side_(side), grid_(&grid), imap_(imap), data_(std::move(data)) {
  if (side_ == Side::Interior && imap_ == nullptr) {
    throw Error(ErrorCode::InvalidArgument,
                "interior harmonic extension needs the interior map");
  }
  coeffs_ = fourier::coeffs(data_);
}

double HarmonicExtension::value(cplx z) const {
  const int M = grid_->M;
  if (side_ == Side::Exterior) {
    const cplx w = eval_w_ext(*grid_, z);
    const double rho = std::abs(w);
    const double theta = std::arg(w);
    cplx acc(0.0, 0.0);
    for (int j = 0; j < M; ++j) {
      const int k = fourier::freq(j, M);
      const double damp = std::pow(rho, -std::abs(k));
      if (2 * k == M) {
        acc += coeffs_[j] * damp * std::cos(0.5 * M * theta);
      } else {
        acc += coeffs_[j] * damp * std::polar(1.0, k * theta);
      }
    }
    return acc.real();
  }
  const Field P = poisson_kernel(Side::Interior, *grid_, imap_, z);
  double acc = 0.0;
  for (int j = 0; j < M; ++j) acc += data_[j] * P[j] * grid_->sp[j];
  return acc * (kTwoPi / M) / kTwoPi;
}

double HarmonicExtension::value_at_infinity() const {
  if (side_ != Side::Exterior) {
    throw Error(ErrorCode::InvalidArgument, "value at infinity is exterior-only");
  }
  return coeffs_[0].real();
}

HarmonicExtension harmonic_extend(const ContourGrid& grid, const Field& f,
                                  Side side, const InteriorMapData* imap) {
  return HarmonicExtension(side, grid, f, imap);
}

cplx cauchy_integral(const ContourGrid& grid, const CField& h, cplx z,
                     bool inside) {
  const int M = grid.M;
  int jstar = 0;
  double best = std::abs(grid.z[0] - z);
  for (int j = 1; j < M; ++j) {
    const double d = std::abs(grid.z[j] - z);
    if (d < best) {
      best = d;
      jstar = j;
    }
  }
  cplx acc(0.0, 0.0);
  for (int j = 0; j < M; ++j) {
    acc += (h[j] - h[jstar]) * grid.dz[j] / (grid.z[j] - z);
  }
  acc *= kTwoPi / M;
  if (inside) acc += h[jstar] * cplx(0.0, kTwoPi);
  return acc;
}

}  // namespace loggas::maps
