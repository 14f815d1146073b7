#include "loggas/verify.hpp"

#include <cmath>
#include <random>

#include "loggas/expansion.hpp"
#include "loggas/fourier.hpp"
#include "loggas/maps.hpp"
#include "loggas/operators.hpp"
#include "loggas/spectral.hpp"

namespace loggas::verify {

namespace {

Field random_bandlimited(int M, int kmax, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto u = [&rng]() { return (rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
  std::vector<double> a(kmax + 1), b(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    a[k] = u() / (1.0 + k);
    b[k] = u() / (1.0 + k);
  }
  Field f(M);
  for (int j = 0; j < M; ++j) {
    const double t = kTwoPi * j / M;
    double acc = a[0];
    for (int k = 1; k <= kmax; ++k) {
      acc += a[k] * std::cos(k * t) + b[k] * std::sin(k * t);
    }
    f[j] = acc;
  }
  return f;
}

double maxdiff(const Field& a, const Field& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

struct Suite {
  VerifyReport report;

  void add(const std::string& id, double residual, double tol,
           const std::string& message = {}) {
    Check c;
    c.id = id;
    c.residual = residual;
    c.tol = tol;
    c.pass = message.empty() && std::isfinite(residual) && residual <= tol;
    c.message = message;
    report.checks.push_back(c);
    if (!c.pass) report.all_pass = false;
  }
};

}  // namespace

VerifyReport verify_suite(const geometry::LaurentContour& spec, int M,
                          double beta, const Potential& W, std::uint64_t seed) {
  Suite s;

  geometry::ContourGrid grid;
  try {
    grid = geometry::build_contour(spec, M);
    s.add("grid-build", 0.0, 1.0);
  } catch (const Error& e) {
    s.add("grid-build", std::numeric_limits<double>::quiet_NaN(), 0.0,
          std::string(error_code_name(e.code())) + ": " + e.what());
    return s.report;
  }

  // Geometry.
  s.add("gauss-bonnet", std::abs(grid.integrate_ds(grid.kappa) - kTwoPi), 1e-8);
  {
    double worst = 0.0;
    for (int j = 0; j < M; ++j) {
      worst = std::max(worst, std::abs(std::abs(grid.nu[j]) - 1.0));
    }
    s.add("nu-unit", worst, 1e-12);
  }
  {
    const Field lhs = maps::im_nu2_schwarzian_ext(grid);
    const Field dsk = geometry::spectral_ds(grid.kappa, grid);
    s.add("it2", maxdiff(lhs, dsk), 1e-6);
  }

  maps::InteriorMapData imap;
  try {
    imap = maps::interior_map(grid, spec.a0);
  } catch (const Error& e) {
    s.add("interior-map", std::numeric_limits<double>::quiet_NaN(), 0.0,
          std::string(error_code_name(e.code())) + ": " + e.what());
    return s.report;
  }
  s.add("dirichlet-residual", imap.dirichlet_residual, 1e-8);
  s.add("turning-number", imap.turning_residual, 1e-8);

  // Equilibrium profile of the leading density.
  {
    const Field r0 = expansion::rho0(grid);
    double worst = 0.0;
    const cplx probes_in[] = {spec.a0 + cplx(0.05 * spec.r, 0.02 * spec.r)};
    const cplx probes_out[] = {spec.a0 + cplx(2.5 * spec.r, 1.0 * spec.r)};
    auto layer = [&](cplx z) {
      Field integ(M);
      for (int j = 0; j < M; ++j) {
        integ[j] = std::log(std::abs(z - grid.z[j])) * r0[j];
      }
      return -2.0 * beta * grid.integrate_ds(integ);
    };
    const double inside = -2.0 * beta * std::log(spec.r);
    for (cplx z : probes_in) worst = std::max(worst, std::abs(layer(z) - inside));
    for (cplx z : probes_out) {
      const double expect =
          inside - 2.0 * beta * std::log(std::abs(maps::eval_w_ext(grid, z)));
      worst = std::max(worst, std::abs(layer(z) - expect));
    }
    s.add("lead100", worst, 1e-6);
  }

  // Operator identities on random band-limited fields.
  const ops::BoundaryOperator V = ops::build_double_layer(grid);
  const ops::BoundaryOperator K = ops::build_single_layer(grid);
  {
    const Field ones(M, 1.0);
    const Field v1 = V.apply(ones, grid);
    double worst = 0.0;
    for (double v : v1) worst = std::max(worst, std::abs(v - 1.0));
    s.add("V1", worst, 1e-10);
  }
  {
    const Field kw = K.apply(grid.wprime_ext, grid);
    double worst = 0.0;
    for (double v : kw) {
      worst = std::max(worst, std::abs(v - std::log(1.0 / spec.r)));
    }
    s.add("ap10", worst, 1e-9);
  }
  {
    const Field f = random_bandlimited(M, std::min(14, M / 8), seed);
    const Field g2 = random_bandlimited(M, std::min(14, M / 8), seed + 17);

    const Field nk = ops::neumann_jump(grid, imap, K.apply(f, grid));
    const double mass = grid.integrate_ds(f);
    double worst = 0.0;
    for (int j = 0; j < M; ++j) {
      worst = std::max(
          worst, std::abs(nk[j] - (f[j] - grid.wprime_ext[j] * mass / kTwoPi)));
    }
    s.add("ap8", worst, 1e-6);

    const Field kn = K.apply(ops::neumann_jump(grid, imap, f), grid);
    Field wf(M);
    for (int j = 0; j < M; ++j) wf[j] = grid.wprime_ext[j] * f[j];
    const double wmass = grid.integrate_ds(wf);
    worst = 0.0;
    for (int j = 0; j < M; ++j) {
      worst = std::max(worst, std::abs(kn[j] - (f[j] - wmass / kTwoPi)));
    }
    s.add("ap9", worst, 1e-6);

    const Field vf = V.apply(f, grid);
    Field fp(M), fm(M);
    for (int j = 0; j < M; ++j) {
      fp[j] = f[j] + vf[j];
      fm[j] = f[j] - vf[j];
    }
    const Field lhs1 = ops::neumann_jump(grid, imap, fp);
    const Field nminus = ops::dtn_exterior(grid, f);
    worst = 0.0;
    for (int j = 0; j < M; ++j) {
      worst = std::max(worst, std::abs(lhs1[j] + 2.0 * nminus[j]));
    }
    const Field lhs2 = ops::neumann_jump(grid, imap, fm);
    const Field nplus = ops::dtn_interior(grid, imap, f);
    for (int j = 0; j < M; ++j) {
      worst = std::max(worst, std::abs(lhs2[j] - 2.0 * nplus[j]));
    }
    s.add("double5", worst, 1e-6);

    const Field nvf = ops::neumann_jump(grid, imap, V.apply(f, grid));
    const Field nvg = ops::neumann_jump(grid, imap, V.apply(g2, grid));
    Field p1(M), p2(M);
    for (int j = 0; j < M; ++j) {
      p1[j] = g2[j] * nvf[j];
      p2[j] = f[j] * nvg[j];
    }
    s.add("double5a",
          std::abs(grid.integrate_ds(p1) - grid.integrate_ds(p2)), 1e-6);

    const Field kf = K.apply(f, grid);
    const Field dplus = ops::dtn_interior(grid, imap, kf);
    const Field dminus = ops::dtn_exterior(grid, kf);
    const Field vtf = V.apply_adjoint(f, grid);
    worst = 0.0;
    for (int j = 0; j < M; ++j) {
      const double dm = dminus[j] - mass / kTwoPi * grid.wprime_ext[j];
      worst = std::max(worst, std::abs(-2.0 * dplus[j] - (-f[j] + vtf[j])));
      worst = std::max(worst, std::abs(-2.0 * dm - (f[j] + vtf[j])));
    }
    s.add("double5b", worst, 1e-6);

    const Field l3 = ops::dtn_interior(grid, imap,
                                       K.apply(ops::dtn_exterior(grid, f), grid));
    const Field r3 = ops::dtn_exterior(
        grid, K.apply(ops::dtn_interior(grid, imap, f), grid));
    s.add("double1b", maxdiff(l3, r3), 1e-6);
  }

  // Spectrum of the Neumann-Poincare operator.
  std::vector<double> spectrum;
  try {
    spectrum = ops::fredholm_spectrum(V, grid);
  } catch (const Error& e) {
    s.add("spectrum-real", std::numeric_limits<double>::quiet_NaN(), 0.0,
          std::string(error_code_name(e.code())) + ": " + e.what());
    return s.report;
  }
  s.add("lambda-max", std::abs(spectrum.front() - 1.0), 1e-10);
  {
    double bound = 0.0, pairing = 0.0;
    for (double lam : spectrum) {
      bound = std::max(bound, std::abs(lam) - 1.0);
      if (std::abs(lam) < 1e-6 || std::abs(lam - 1.0) < 1e-8) continue;
      double best = 1e18;
      for (double mu : spectrum) best = std::min(best, std::abs(mu + lam));
      pairing = std::max(pairing, best);
    }
    s.add("spectrum-bound", bound, 1e-10);
    s.add("spectrum-pairing", pairing, 1e-8);
  }
  {
    double alt = 0.0;
    const double det = ops::fredholm_determinant(spectrum, 1e-14, &alt);
    s.add("double7a", std::abs(det - alt), 1e-8);
  }

  // Expansion consistency.
  {
    const auto res = expansion::free_energy(grid, &imap, beta, W);
    s.add("rho0-mass", std::abs(grid.integrate_ds(res.rho0) - 1.0), 1e-10);
    s.add("rho1-mean", std::abs(grid.integrate_ds(res.rho1)), 1e-9);
    s.add("rho2-mean", std::abs(grid.integrate_ds(res.rho2)), 1e-9);
    s.add("f2q-routes", std::abs(res.F2q - res.F2q_alt), 1e-10);
    if (W.is_zero()) {
      Field ent(M);
      for (int j = 0; j < M; ++j) ent[j] = res.rho0[j] * std::log(res.rho0[j]);
      s.add("next3a",
            std::abs(grid.integrate_ds(ent) + std::log(kTwoPi * spec.r)), 1e-9);
      s.add("f2cl-positive", std::max(0.0, -res.F2cl), 1e-12);

      const auto big = expansion::free_energy(
          geometry::build_contour(spec.scaled(2.0), M), nullptr, beta, W);
      double worst = std::abs(big.F0 - res.F0 - beta * std::log(2.0));
      worst = std::max(worst, std::abs(big.F1 - res.F1 +
                                       (beta - 1.0) * std::log(2.0)));
      worst = std::max(
          worst, std::abs((big.F2cl + big.F2q) - (res.F2cl + res.F2q)));
      s.add("scaling", worst, 1e-9);
    }

    const Field f = random_bandlimited(M, std::min(10, M / 8), seed + 5);
    const Field ja = ops::neumann_jump(grid, imap, f);
    const Field jb = ops::neumann_jump(grid, f);
    s.add("njump-routes", maxdiff(ja, jb), 1e-8);
  }

  // Surgery identity and a variation spot check.
  {
    const auto rep = spectral::surgery_check(grid, imap);
    s.add("surgery", std::abs(rep.surgery_residual), 1e-6);
  }
  {
    spectral::VariationConfig cfg;
    cfg.quantity = spectral::VariedQuantity::LogR;
    cfg.direction.dilation = true;
    cfg.eps = {2e-3};
    cfg.M = std::min(M, 128);
    const auto rep = spectral::variation_harness(spec, cfg);
    s.add("r4-variation", rep.rows[0].mismatch, 1e-5);

    spectral::VariationConfig cfg2;
    cfg2.quantity = spectral::VariedQuantity::LogDetExt;
    cfg2.direction.mode = 1;
    cfg2.eps = {5e-3};
    cfg2.M = std::min(M, 256);
    const auto rep2 = spectral::variation_harness(spec, cfg2);
    s.add("q2a-variation", rep2.rows[0].mismatch, 1e-5);
  }

  return s.report;
}

}  // namespace loggas::verify
