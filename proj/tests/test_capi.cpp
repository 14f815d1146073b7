#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "loggas.h"

namespace {

const char* kEllipse = R"({"r": 1.0, "a0": [0.0, 0.0], "coeffs": [[0.2, 0.0]]})";
const char* kCircle = R"({"r": 1.0, "a0": [0.0, 0.0], "coeffs": []})";

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("capi: lifecycle, geometry accessors, univalence") {
  CHECK(lg_version() != nullptr);

  lg_model* m = nullptr;
  REQUIRE(lg_model_create(kEllipse, 256, &m) == LG_OK);
  CHECK(lg_model_size(m) == 256);
  CHECK(lg_model_radius(m) == doctest::Approx(1.0));
  CHECK(lg_model_perimeter(m) > 6.28);

  std::vector<double> re(256), im(256), kap(256), sp(256);
  CHECK(lg_model_nodes(m, re.data(), im.data(), kap.data(), sp.data()) == LG_OK);
  CHECK(re[0] == doctest::Approx(1.2).epsilon(1e-12));
  lg_model_destroy(m);

  int ok = -1;
  char reason[256];
  CHECK(lg_check_univalence(kEllipse, &ok, reason, sizeof(reason)) == LG_OK);
  CHECK(ok == 1);
  CHECK(lg_check_univalence(R"({"r": 1.0, "coeffs": [[1.2, 0.0]]})", &ok,
                            reason, sizeof(reason)) == LG_OK);
  CHECK(ok == 0);
  CHECK(reason[0] != '\0');

  lg_model* bad = nullptr;
  CHECK(lg_model_create(R"({"r": 1.0, "coeffs": [[1.2, 0.0]]})", 64, &bad) ==
        LG_ERR_NON_UNIVALENT);
  CHECK(bad == nullptr);
  CHECK(lg_model_create("not json", 64, &bad) == LG_ERR_CONFIG);
  CHECK(std::string(lg_last_error()).size() > 0);
}

TEST_CASE("capi: expansion, prediction, and the circle oracle") {
  lg_model* m = nullptr;
  REQUIRE(lg_model_create(kCircle, 64, &m) == LG_OK);
  lg_expansion e;
  REQUIRE(lg_expand(m, 1.0, nullptr, &e, nullptr, nullptr, nullptr) == LG_OK);
  CHECK(e.F0 == doctest::Approx(0.0));
  CHECK(std::abs(e.F2cl + e.F2q) < 1e-11);

  for (long N : {2L, 16L}) {
    double pred = 0.0, exact = 0.0;
    REQUIRE(lg_predict_logz(&e, 1.0, N, &pred) == LG_OK);
    REQUIRE(lg_circle_logz(1.0, 1.0, N, &exact) == LG_OK);
    CHECK(std::abs(pred - exact) < 1e-10);
  }
  lg_model_destroy(m);
}

TEST_CASE("capi: spectrum, determinants, surgery") {
  lg_model* m = nullptr;
  REQUIRE(lg_model_create(kEllipse, 256, &m) == LG_OK);
  int count = 0;
  std::vector<double> eig(256);
  REQUIRE(lg_spectrum(m, eig.data(), 256, &count) == LG_OK);
  CHECK(count == 256);
  CHECK(eig[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(eig[1] == doctest::Approx(0.2).epsilon(1e-9));

  double det = 0.0, lpn = 0.0;
  REQUIRE(lg_determinants(m, &det, &lpn) == LG_OK);
  CHECK(lpn == doctest::Approx(-std::log(det) +
                               std::log(lg_model_perimeter(m)))
                   .epsilon(1e-12));

  lg_det_report rep;
  REQUIRE(lg_surgery_check(m, &rep) == LG_OK);
  CHECK(std::abs(rep.surgery_residual) < 1e-6);

  double li = 0.0, le = 0.0;
  REQUIRE(lg_logdet_interior(m, &li) == LG_OK);
  REQUIRE(lg_logdet_exterior(m, &le) == LG_OK);
  CHECK(le == doctest::Approx(std::log(0.96) / 6.0).epsilon(1e-10));
  lg_model_destroy(m);
}

TEST_CASE("capi: finite-N oracles and correlators") {
  lg_model* m = nullptr;
  REQUIRE(lg_model_create(kCircle, 256, &m) == LG_OK);

  double logz = 0.0;
  REQUIRE(lg_beta1_logz(m, 8, nullptr, &logz) == LG_OK);
  double exact = 0.0;
  lg_circle_logz(1.0, 1.0, 8, &exact);
  CHECK(logz == doctest::Approx(exact).epsilon(1e-11));

  double val = 0.0, err = 0.0;
  REQUIRE(lg_smalln_logz(m, 2.0, 2, nullptr, &val, &err) == LG_OK);
  lg_circle_logz(1.0, 2.0, 2, &exact);
  CHECK(std::abs(val - exact) < 1e-9);

  const double z[2] = {1.8, 0.0}, zeta[2] = {0.0, 2.4};
  double corr = 0.0;
  REQUIRE(lg_phi_pair(m, z, zeta, &corr) == LG_OK);
  CHECK(std::isfinite(corr));

  double dphi[2];
  REQUIRE(lg_dphi_sq(m, z, dphi) == LG_OK);
  CHECK(std::abs(dphi[0]) < 1e-12);  // Mobius map

  double v[2];
  REQUIRE(lg_vertex_mean(m, 2.0, z, 1.0, 4, 0, v) == LG_OK);
  CHECK(v[0] == doctest::Approx(std::pow(1.8, 4)).epsilon(1e-10));

  double resid = 0.0;
  REQUIRE(lg_bbgky_residual(m, 2.0, nullptr, &resid) == LG_OK);
  CHECK(resid < 1e-8);

  double T[2];
  const double a[2] = {2.0, 1.0};
  REQUIRE(lg_mean_stress(m, 1.5, nullptr, a, T) == LG_OK);
  CHECK(std::isfinite(T[0]));
  lg_model_destroy(m);
}

TEST_CASE("capi: sampler determinism") {
  lg_model* m = nullptr;
  REQUIRE(lg_model_create(kCircle, 64, &m) == LG_OK);
  lg_chain_config chain;
  chain.seed = 99;
  chain.N = 8;
  chain.steps = 50000;
  chain.burnin = 5000;
  chain.width = 0.8;
  chain.density_bins = 16;
  std::vector<double> d1(16), d2(16), e1(16), e2(16);
  double acc1 = 0.0, acc2 = 0.0;
  REQUIRE(lg_sample_density(m, 2.0, nullptr, &chain, d1.data(), e1.data(),
                            nullptr, &acc1) == LG_OK);
  REQUIRE(lg_sample_density(m, 2.0, nullptr, &chain, d2.data(), e2.data(),
                            nullptr, &acc2) == LG_OK);
  CHECK(acc1 == acc2);
  for (int b = 0; b < 16; ++b) {
    CHECK(d1[b] == d2[b]);
    CHECK(e1[b] == e2[b]);
  }
  lg_model_destroy(m);
}

TEST_CASE("capi: config-driven runs are deterministic and carry metadata") {
  const std::filesystem::path dir1 = "capi_run_a";
  const std::filesystem::path dir2 = "capi_run_b";
  const std::string config = R"({
    "contour": {"r": 1.0, "a0": [0.0, 0.0], "coeffs": [[0.2, 0.0]]},
    "grid": {"M": 64},
    "beta": 1.5,
    "potential": {"type": "zero"},
    "seed": 3,
    "sample": {"N": 8, "steps": 40000, "burnin": 4000, "width": 0.8}
  })";

  for (const char* cmd : {"expand", "sample"}) {
    int code1 = -1, code2 = -1;
    char* s1 = nullptr;
    char* s2 = nullptr;
    REQUIRE(lg_run(cmd, config.c_str(), dir1.string().c_str(), &code1, &s1) ==
            LG_OK);
    REQUIRE(lg_run(cmd, config.c_str(), dir2.string().c_str(), &code2, &s2) ==
            LG_OK);
    CHECK(code1 == 0);
    CHECK(code2 == 0);
    CHECK(std::string(s1) == std::string(s2));
    CHECK(std::string(s1).find("config_hash") != std::string::npos);
    lg_string_free(s1);
    lg_string_free(s2);
  }
  CHECK(read_file(dir1 / "summary.json") == read_file(dir2 / "summary.json"));
  CHECK(read_file(dir1 / "density_hist.csv") ==
        read_file(dir2 / "density_hist.csv"));

  // Configuration errors surface as exit code 2, not API failures.
  int code = -1;
  char* s = nullptr;
  REQUIRE(lg_run("expand", "{bad json", nullptr, &code, &s) == LG_OK);
  CHECK(code == 2);
  lg_string_free(s);

  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
}

TEST_CASE("capi: an underresolved contour fails verify as data, not a crash") {
  const std::string config = R"({
    "contour": {"r": 1.0, "a0": [0.0, 0.0],
      "coeffs": [[0.05,0.0],[0.05,0.02],[0.04,-0.02],[0.03,0.01],[0.03,0.0],[0.06,0.03]]},
    "grid": {"M": 32},
    "beta": 1.0
  })";
  int code = -1;
  char* s = nullptr;
  REQUIRE(lg_run("verify", config.c_str(), "capi_verify_coarse", &code, &s) ==
          LG_OK);
  CHECK(code == 1);
  const std::string summary(s);
  CHECK(summary.find("GridTooCoarse") != std::string::npos);
  CHECK(summary.find("\"all_pass\": false") != std::string::npos);
  lg_string_free(s);
  std::filesystem::remove_all("capi_verify_coarse");
}
