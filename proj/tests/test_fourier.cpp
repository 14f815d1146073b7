#include <cmath>

#include "doctest.h"
#include "loggas/fourier.hpp"
#include "test_util.hpp"

using namespace loggas;
namespace ff = loggas::fourier;

TEST_CASE("dft roundtrip is exact to 1e-13") {
  const int M = 96;
  Field f = testutil::random_bandlimited(M, 40, 7);
  CField cf(f.begin(), f.end());
  CField back = ff::ifft(ff::fft(cf));
  double worst = 0.0;
  for (int j = 0; j < M; ++j) worst = std::max(worst, std::abs(back[j] - cf[j]));
  CHECK(worst < 1e-13);
}

TEST_CASE("real fields have conjugate-symmetric spectra") {
  const int M = 64;
  Field f = testutil::random_bandlimited(M, 20, 3);
  CField c = ff::coeffs(f);
  for (int j = 1; j < M / 2; ++j) {
    CHECK(std::abs(c[j] - std::conj(c[M - j])) < 1e-14);
  }
}

TEST_CASE("derivative of cos is -sin") {
  const int M = 32;
  Field f(M), expect(M);
  for (int j = 0; j < M; ++j) {
    const double t = kTwoPi * j / M;
    f[j] = std::cos(t);
    expect[j] = -std::sin(t);
  }
  const Field d = ff::deriv_t(f);
  CHECK(testutil::max_abs_diff(d, expect) < 1e-13);
}

TEST_CASE("derivative of a constant vanishes") {
  Field f(40, 3.25);
  CHECK(testutil::max_abs(ff::deriv_t(f)) < 1e-14);
}

TEST_CASE("antideriv recovers the ramp plus periodic part") {
  const int M = 64;
  Field f(M);
  for (int j = 0; j < M; ++j) {
    const double t = kTwoPi * j / M;
    f[j] = 1.5 + std::cos(2.0 * t);  // integral: 1.5 t + sin(2t)/2
  }
  const Field F = ff::antideriv_t(f);
  for (int j = 0; j < M; ++j) {
    const double t = kTwoPi * j / M;
    CHECK(F[j] == doctest::Approx(1.5 * t + 0.5 * std::sin(2.0 * t)).epsilon(1e-12));
  }
}

TEST_CASE("trig interpolation reproduces band-limited data between nodes") {
  const int M = 48;
  auto fval = [](double t) { return 0.3 + std::cos(3 * t) - 0.2 * std::sin(5 * t); };
  Field f(M);
  for (int j = 0; j < M; ++j) f[j] = fval(kTwoPi * j / M);
  const ff::TrigInterp interp(f);
  for (double t : {0.123, 1.77, 4.56, 6.11}) {
    CHECK(interp.eval_real(t) == doctest::Approx(fval(t)).epsilon(1e-12));
    const double expect_d = -3 * std::sin(3 * t) - std::cos(5 * t);
    CHECK(interp.eval_deriv(t).real() == doctest::Approx(expect_d).epsilon(1e-11));
  }
}

TEST_CASE("abs-k multiplier acts as the circle Dirichlet-to-Neumann symbol") {
  const int M = 32;
  Field f(M);
  for (int j = 0; j < M; ++j) f[j] = std::cos(4.0 * kTwoPi * j / M);
  const Field g = ff::abs_k_multiplier(f);
  for (int j = 0; j < M; ++j) {
    CHECK(g[j] == doctest::Approx(4.0 * f[j]).epsilon(1e-12));
  }
}
