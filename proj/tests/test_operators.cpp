#include <cmath>

#include "doctest.h"
#include "loggas/fourier.hpp"
#include "loggas/maps.hpp"
#include "loggas/operators.hpp"
#include "test_util.hpp"

using namespace loggas;
using namespace loggas::geometry;
using namespace loggas::ops;

namespace {

Field apply_ds_product(const ContourGrid& g, const Field& a, const Field& b) {
  Field out(g.M);
  for (int j = 0; j < g.M; ++j) out[j] = a[j] * b[j];
  return out;
}

}  // namespace

TEST_CASE("double layer on a circle projects onto constants") {
  const double r = 2.0;
  const ContourGrid g = build_contour(testutil::circle(r), 64);
  const BoundaryOperator V = build_double_layer(g);
  for (int i = 0; i < g.M; ++i) {
    for (int j = 0; j < g.M; ++j) {
      CHECK(V.kernel(i, j) == doctest::Approx(1.0 / (kTwoPi * r)).epsilon(1e-12));
    }
  }
  const Field f = testutil::random_bandlimited(g.M, 10, 11);
  const Field Vf = V.apply(f, g);
  const double proj = g.integrate_ds(f) / (kTwoPi * r);
  for (int j = 0; j < g.M; ++j) CHECK(Vf[j] == doctest::Approx(proj).epsilon(1e-12));
}

TEST_CASE("V 1 = 1 (Gauss identity) on the ellipse") {
  const ContourGrid g = build_contour(testutil::ellipse(0.3), 128);
  const BoundaryOperator V = build_double_layer(g);
  const Field ones(g.M, 1.0);
  const Field v = V.apply(ones, g);
  for (int j = 0; j < g.M; ++j) CHECK(std::abs(v[j] - 1.0) < 1e-12);
}

TEST_CASE("double-layer diagonal equals kappa/(2 pi)") {
  const ContourGrid g = build_contour(testutil::ellipse(0.3), 512);
  const BoundaryOperator V = build_double_layer(g);
  // Off-diagonal extrapolation: the symmetric average approaches the
  // diagonal limit at O(h^2).
  for (int i = 0; i < g.M; i += 37) {
    const int ip = (i + 1) % g.M, im = (i + g.M - 1) % g.M;
    const double avg = 0.5 * (V.kernel(i, ip) + V.kernel(i, im));
    CHECK(std::abs(avg - V.kernel(i, i)) < 1e-3);
    CHECK(V.kernel(i, i) == doctest::Approx(g.kappa[i] / kTwoPi).epsilon(1e-12));
  }
}

TEST_CASE("single layer on circles: constants and Fourier modes") {
  for (double r : {0.5, 2.0}) {
    const ContourGrid g = build_contour(testutil::circle(r), 64);
    const BoundaryOperator K = build_single_layer(g);
    const Field ones(g.M, 1.0);
    const Field k1 = K.apply(ones, g);
    for (int j = 0; j < g.M; ++j) {
      CHECK(k1[j] == doctest::Approx(-r * std::log(r)).epsilon(1e-12));
    }
    // K e^{ikt} = (r / 2|k|) e^{ikt}
    for (int k : {1, 3, 7}) {
      CField f(g.M);
      for (int j = 0; j < g.M; ++j) f[j] = std::polar(1.0, k * g.t[j]);
      const CField kf = K.apply(f, g);
      for (int j = 0; j < g.M; ++j) {
        CHECK(std::abs(kf[j] - (r / (2.0 * k)) * f[j]) < 1e-12);
      }
    }
  }
}

TEST_CASE("K |w'_ext| = log(1/r) on ellipse and blob") {
  for (const auto& spec : {testutil::ellipse(0.3, 1.5), testutil::blob()}) {
    const ContourGrid g = build_contour(spec, 256);
    const BoundaryOperator K = build_single_layer(g);
    const Field kw = K.apply(g.wprime_ext, g);
    for (int j = 0; j < g.M; ++j) {
      CHECK(kw[j] == doctest::Approx(std::log(1.0 / spec.r)).epsilon(1e-11));
    }
  }
}

TEST_CASE("exterior DtN: constants to zero, circle modes to -|k|/r") {
  const double r = 2.0;
  const ContourGrid g = build_contour(testutil::circle(r), 64);
  CHECK(testutil::max_abs(dtn_exterior(g, Field(g.M, 1.0))) < 1e-13);
  for (int k : {1, 4}) {
    CField f(g.M);
    for (int j = 0; j < g.M; ++j) f[j] = std::polar(1.0, k * g.t[j]);
    const CField nf = dtn_exterior(g, f);
    for (int j = 0; j < g.M; ++j) {
      CHECK(std::abs(nf[j] + (k / r) * f[j]) < 1e-12);
    }
  }
}

TEST_CASE("interior DtN via the boundary correspondence") {
  const double r = 2.0;
  const ContourGrid g = build_contour(testutil::circle(r), 64);
  const maps::InteriorMapData imap = maps::interior_map(g, cplx(0.0, 0.0));
  CHECK(testutil::max_abs(dtn_interior(g, imap, Field(g.M, 1.0))) < 1e-11);
  for (int k : {1, 4}) {
    Field f(g.M);
    for (int j = 0; j < g.M; ++j) f[j] = std::cos(k * g.t[j]);
    const Field nf = dtn_interior(g, imap, f);
    for (int j = 0; j < g.M; ++j) {
      CHECK(nf[j] == doctest::Approx((k / r) * f[j]).epsilon(1e-10));
    }
  }

  // Self-adjointness w.r.t. the ds scalar product on the ellipse.
  const ContourGrid ge = build_contour(testutil::ellipse(0.2), 256);
  const maps::InteriorMapData ime = maps::interior_map(ge, cplx(0.0, 0.0));
  const Field a = testutil::random_bandlimited(ge.M, 12, 5);
  const Field b = testutil::random_bandlimited(ge.M, 12, 6);
  const double lhs = ge.integrate_ds(apply_ds_product(ge, a, dtn_interior(ge, ime, b)));
  const double rhs = ge.integrate_ds(apply_ds_product(ge, b, dtn_interior(ge, ime, a)));
  CHECK(std::abs(lhs - rhs) < 1e-8);
}

TEST_CASE("Neumann jump on the circle and its zero mean") {
  const double r = 2.0;
  const ContourGrid g = build_contour(testutil::circle(r), 64);
  const maps::InteriorMapData imap = maps::interior_map(g, cplx(0.0, 0.0));
  for (int k : {1, 3}) {
    Field f(g.M);
    for (int j = 0; j < g.M; ++j) f[j] = std::cos(k * g.t[j]);
    const Field nf = neumann_jump(g, imap, f);
    for (int j = 0; j < g.M; ++j) {
      CHECK(nf[j] == doctest::Approx((2.0 * k / r) * f[j]).epsilon(1e-10));
    }
  }
  const ContourGrid ge = build_contour(testutil::blob(), 256);
  const maps::InteriorMapData ime = maps::interior_map(ge, cplx(0.0, 0.0));
  const Field f = testutil::random_bandlimited(ge.M, 15, 9);
  CHECK(std::abs(ge.integrate_ds(neumann_jump(ge, ime, f))) < 1e-9);
}

TEST_CASE("jump-operator routes agree: N+ - N- vs -2 N- (I+V)^{-1}") {
  const ContourGrid g = build_contour(testutil::ellipse(0.2), 256);
  const maps::InteriorMapData imap = maps::interior_map(g, cplx(0.0, 0.0));
  const Field f = testutil::random_bandlimited(g.M, 6, 17);
  const Field via_imap = neumann_jump(g, imap, f);
  const Field via_solve = neumann_jump(g, f);
  CHECK(testutil::max_abs_diff(via_imap, via_solve) < 1e-8);
}

TEST_CASE("operator identity suite on random band-limited fields") {
  for (const auto& spec : {testutil::circle(1.0), testutil::ellipse(0.2),
                           testutil::blob()}) {
    const ContourGrid g = build_contour(spec, 256);
    const maps::InteriorMapData imap = maps::interior_map(g, cplx(0.0, 0.0));
    const BoundaryOperator V = build_double_layer(g);
    const BoundaryOperator K = build_single_layer(g);

    for (unsigned seed : {21u, 22u, 23u}) {
      const Field f = testutil::random_bandlimited(g.M, 14, seed);
      const Field g2 = testutil::random_bandlimited(g.M, 14, seed + 100);

      // N K f = f - (|w'_ext| / 2 pi) ∮ f ds
      {
        const Field nk = neumann_jump(g, imap, K.apply(f, g));
        const double mass = g.integrate_ds(f);
        double worst = 0.0;
        for (int j = 0; j < g.M; ++j) {
          worst = std::max(worst, std::abs(nk[j] - (f[j] - g.wprime_ext[j] * mass / kTwoPi)));
        }
        CHECK(worst < 1e-6);
      }
      // K N f = f - (1/2 pi) ∮ |w'_ext| f ds
      {
        const Field kn = K.apply(neumann_jump(g, imap, f), g);
        const double mass = g.integrate_ds(apply_ds_product(g, g.wprime_ext, f));
        double worst = 0.0;
        for (int j = 0; j < g.M; ++j) {
          worst = std::max(worst, std::abs(kn[j] - (f[j] - mass / kTwoPi)));
        }
        CHECK(worst < 1e-6);
      }
      // N (I+V) = -2 N-, N (I-V) = 2 N+
      {
        const Field vf = V.apply(f, g);
        Field fp(g.M), fm(g.M);
        for (int j = 0; j < g.M; ++j) {
          fp[j] = f[j] + vf[j];
          fm[j] = f[j] - vf[j];
        }
        const Field lhs1 = neumann_jump(g, imap, fp);
        const Field rhs1 = dtn_exterior(g, f);
        double worst = 0.0;
        for (int j = 0; j < g.M; ++j) {
          worst = std::max(worst, std::abs(lhs1[j] - (-2.0) * rhs1[j]));
        }
        CHECK(worst < 1e-6);

        const Field lhs2 = neumann_jump(g, imap, fm);
        const Field rhs2 = dtn_interior(g, imap, f);
        worst = 0.0;
        for (int j = 0; j < g.M; ++j) {
          worst = std::max(worst, std::abs(lhs2[j] - 2.0 * rhs2[j]));
        }
        CHECK(worst < 1e-6);
      }
      // Self-adjointness of N V (N V = V^dag N)
      {
        const Field nvf = neumann_jump(g, imap, V.apply(f, g));
        const Field nvg = neumann_jump(g, imap, V.apply(g2, g));
        const double lhs = g.integrate_ds(apply_ds_product(g, g2, nvf));
        const double rhs = g.integrate_ds(apply_ds_product(g, f, nvg));
        CHECK(std::abs(lhs - rhs) < 1e-6);
      }
      // -2 dn± of the single layer potential equals (∓I + V^dag) f. On the
      // exterior side the potential carries the log-growth piece
      // -(∮f ds / 2 pi) log|w_ext|, absent from the bounded extension.
      {
        const Field kf = K.apply(f, g);
        const Field dplus = dtn_interior(g, imap, kf);
        const Field dminus = dtn_exterior(g, kf);
        const Field vtf = V.apply_adjoint(f, g);
        const double mass = g.integrate_ds(f);
        double worst = 0.0;
        for (int j = 0; j < g.M; ++j) {
          const double dm = dminus[j] - mass / kTwoPi * g.wprime_ext[j];
          worst = std::max(worst, std::abs(-2.0 * dplus[j] - (-f[j] + vtf[j])));
          worst = std::max(worst, std::abs(-2.0 * dm - (f[j] + vtf[j])));
        }
        CHECK(worst < 1e-6);
      }
      // N+ K N- = N- K N+
      {
        const Field lhs = dtn_interior(g, imap, K.apply(dtn_exterior(g, f), g));
        const Field rhs = dtn_exterior(g, K.apply(dtn_interior(g, imap, f), g));
        CHECK(testutil::max_abs_diff(lhs, rhs) < 1e-6);
      }
      // Positivity of ∮ f N f ds for mean-zero data
      {
        Field f0 = f;
        const double mean_ds = g.integrate_ds(f0) / g.perimeter;
        for (auto& v : f0) v -= mean_ds;
        const double quad = g.integrate_ds(apply_ds_product(g, f0, neumann_jump(g, imap, f0)));
        CHECK(quad > 0.0);
      }
    }
  }
}

TEST_CASE("Fredholm spectrum: circle is rank one") {
  const ContourGrid g = build_contour(testutil::circle(1.5), 64);
  const auto spec = fredholm_spectrum(build_double_layer(g), g);
  CHECK(spec[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (size_t i = 1; i < spec.size(); ++i) CHECK(std::abs(spec[i]) < 1e-12);
}

TEST_CASE("Fredholm spectrum of the ellipse is the geometric ladder") {
  // Nonunit eigenvalues of the ellipse come in pairs ±q^n; oracle checked by
  // M-doubling (spectrum converges spectrally, so M=256 is converged).
  const double q = 0.3;
  const ContourGrid g = build_contour(testutil::ellipse(q), 256);
  const auto spec = fredholm_spectrum(build_double_layer(g), g);
  CHECK(spec[0] == doctest::Approx(1.0).epsilon(1e-10));
  for (int n = 1; n <= 4; ++n) {
    const double target = std::pow(q, n);
    double best_pos = 1e9, best_neg = 1e9;
    for (double lam : spec) {
      best_pos = std::min(best_pos, std::abs(lam - target));
      best_neg = std::min(best_neg, std::abs(lam + target));
    }
    CHECK(best_pos < 1e-9);
    CHECK(best_neg < 1e-9);
  }
  // M-doubling stability of the leading nonunit eigenvalue.
  const ContourGrid g2 = build_contour(testutil::ellipse(q), 512);
  const auto spec2 = fredholm_spectrum(build_double_layer(g2), g2);
  CHECK(std::abs(spec[1] - spec2[1]) < 1e-10);
}

TEST_CASE("spectrum pairing and bound on a generic contour") {
  const ContourGrid g = build_contour(testutil::blob(), 256);
  const auto spec = fredholm_spectrum(build_double_layer(g), g);
  CHECK(std::abs(spec[0] - 1.0) < 1e-10);
  for (double lam : spec) CHECK(std::abs(lam) <= 1.0 + 1e-10);
  for (double lam : spec) {
    if (std::abs(lam) < 1e-6 || std::abs(lam - 1.0) < 1e-8) continue;
    double best = 1e9;
    for (double mu : spec) best = std::min(best, std::abs(mu + lam));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("Fredholm determinant: circle value, stability, isometry invariance") {
  const ContourGrid g = build_contour(testutil::circle(0.8), 64);
  CHECK(fredholm_determinant(fredholm_spectrum(build_double_layer(g), g)) ==
        doctest::Approx(2.0).epsilon(1e-13));

  const ContourGrid e1 = build_contour(testutil::ellipse(0.2), 256);
  const ContourGrid e2 = build_contour(testutil::ellipse(0.2), 512);
  const double d1 = fredholm_determinant(fredholm_spectrum(build_double_layer(e1), e1));
  const double d2 = fredholm_determinant(fredholm_spectrum(build_double_layer(e2), e2));
  CHECK(std::abs(d1 - d2) < 1e-10);

  double alt = 0.0;
  fredholm_determinant(fredholm_spectrum(build_double_layer(e1), e1), 1e-14, &alt);
  CHECK(std::abs(d1 - alt) < 1e-8);

  // Rotation + translation leave the kernel (hence the determinant) invariant.
  LaurentContour rot = testutil::ellipse(0.2);
  const double phi = 0.7;
  rot.a0 = cplx(1.3, -0.4);
  rot.coeffs[0] *= std::polar(1.0, 2.0 * phi);
  const ContourGrid e3 = build_contour(rot, 256);
  const double d3 = fredholm_determinant(fredholm_spectrum(build_double_layer(e3), e3));
  CHECK(std::abs(d1 - d3) < 1e-12);
}

TEST_CASE("regularized Neumann determinant") {
  for (double r : {0.5, 1.0, 2.0}) {
    const ContourGrid g = build_contour(testutil::circle(r), 64);
    CHECK(detprime_neumann(g) == doctest::Approx(std::log(kPi * r)).epsilon(1e-12));
  }
  // Scale covariance: z -> c z adds log c (P scales, det(I+V) invariant).
  const double c = 2.0;
  const ContourGrid b1 = build_contour(testutil::blob(), 256);
  const ContourGrid b2 = build_contour(testutil::blob().scaled(c), 256);
  CHECK(detprime_neumann(b2) - detprime_neumann(b1) ==
        doctest::Approx(std::log(c)).epsilon(1e-10));

  // Against the circle of equal perimeter the difference is the rearranged
  // Fredholm-determinant gap.
  const ContourGrid e = build_contour(testutil::ellipse(0.2), 256);
  const ContourGrid ceq = build_contour(testutil::circle(e.perimeter / kTwoPi), 64);
  const double detq = fredholm_determinant(fredholm_spectrum(build_double_layer(e), e));
  CHECK(detprime_neumann(e) - detprime_neumann(ceq) ==
        doctest::Approx(-(std::log(detq) - std::log(2.0))).epsilon(1e-10));
}

TEST_CASE("normal/tangential derivative identities for harmonic data") {
  // f, g are boundary data of bounded exterior harmonic functions. The
  // Wirtinger derivatives come from the analytic completion
  // f^H = Re G(w_ext(z)), G(w) = c0 + 2 sum_{m>=1} c_{-m} w^{-m}, while the
  // normal derivatives come independently from the multiplier route.
  for (const auto& spec : {testutil::ellipse(0.2), testutil::blob()}) {
    const ContourGrid g = build_contour(spec, 256);
    const int M = g.M;

    auto analytic_derivs = [&](const Field& f) {
      const CField c = fourier::coeffs(f);
      std::vector<cplx> d1(M), d2(M);
      for (int j = 0; j < M; ++j) {
        const cplx w = std::polar(1.0, g.t[j]);
        cplx G1 = 0.0, G2 = 0.0;
        for (int m = 1; m < M / 2; ++m) {
          const cplx cm = c[M - m];  // coefficient of e^{-i m t}
          const cplx wm = std::pow(w, -m - 1);
          G1 += -2.0 * static_cast<double>(m) * cm * wm;
          G2 += 2.0 * static_cast<double>(m) * (m + 1.0) * cm * wm / w;
        }
        const cplx zp = spec.dmap(w);
        const cplx zpp = spec.d2map(w);
        const cplx wprime = 1.0 / zp;
        const cplx wsecond = -zpp / (zp * zp * zp);
        d1[j] = 0.5 * G1 * wprime;
        d2[j] = 0.5 * (G2 * wprime * wprime + G1 * wsecond);
      }
      return std::pair(d1, d2);
    };

    const Field f = testutil::random_bandlimited(M, 12, 301);
    const Field g2 = testutil::random_bandlimited(M, 12, 302);
    const auto [df, d2f] = analytic_derivs(f);
    const auto [dg, d2g] = analytic_derivs(g2);

    const Field dnf = dtn_exterior(g, f);
    const Field dng = dtn_exterior(g, g2);
    const Field dsf = spectral_ds(f, g);
    const Field dsg = spectral_ds(g2, g);
    const Field ds2f = spectral_ds(dsf, g);
    const Field dsdnf = spectral_ds(dnf, g);

    double e1 = 0, e2 = 0, e3 = 0, e4 = 0;
    for (int j = 0; j < M; ++j) {
      const cplx nu2 = g.nu[j] * g.nu[j];
      const cplx prod = nu2 * df[j] * dg[j];
      e1 = std::max(e1, std::abs(2.0 * prod.real() -
                                 0.5 * (dnf[j] * dng[j] - dsf[j] * dsg[j])));
      e2 = std::max(e2, std::abs(2.0 * prod.imag() +
                                 0.5 * (dnf[j] * dsg[j] + dsf[j] * dng[j])));
      const cplx curv = nu2 * d2f[j];
      e3 = std::max(e3, std::abs(2.0 * curv.real() -
                                 (-ds2f[j] - g.kappa[j] * dnf[j])));
      e4 = std::max(e4, std::abs(2.0 * curv.imag() -
                                 (-dsdnf[j] + g.kappa[j] * dsf[j])));
    }
    CHECK(e1 < 1e-6);
    CHECK(e2 < 1e-6);
    CHECK(e3 < 1e-6);
    CHECK(e4 < 1e-6);
  }
}

TEST_CASE("the unit Fredholm eigenvalue carries the constant eigenvector") {
  const ContourGrid g = build_contour(testutil::ellipse(0.25), 128);
  const Eigen::MatrixXd B = build_double_layer(g).weighted(g);
  Eigen::EigenSolver<Eigen::MatrixXd> es(B);
  int unit = -1;
  for (int i = 0; i < B.rows(); ++i) {
    if (std::abs(es.eigenvalues()(i) - 1.0) < 1e-8) {
      unit = i;
      break;
    }
  }
  REQUIRE(unit >= 0);
  const Eigen::VectorXcd v = es.eigenvectors().col(unit);
  const cplx mean = v.mean();
  double worst = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    worst = std::max(worst, std::abs(v(i) - mean));
  }
  CHECK(worst < 1e-8 * std::abs(mean));
}
