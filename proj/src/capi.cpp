#include "loggas.h"

#include <cstring>
#include <mutex>
#include <optional>
#include <string>

#include "json.hpp"
#include "loggas/correlators.hpp"
#include "loggas/ensemble.hpp"
#include "loggas/expansion.hpp"
#include "loggas/geometry.hpp"
#include "loggas/maps.hpp"
#include "loggas/operators.hpp"
#include "loggas/potential.hpp"
#include "loggas/run.hpp"
#include "loggas/spectral.hpp"

using namespace loggas;

extern "C" {

struct lg_model {
  geometry::ContourGrid grid;
  std::mutex mu;
  std::optional<maps::InteriorMapData> imap;
  std::optional<std::vector<double>> spectrum;

  const maps::InteriorMapData& interior() {
    std::lock_guard<std::mutex> lock(mu);
    if (!imap) imap = maps::interior_map(grid, grid.spec.a0);
    return *imap;
  }
  const std::vector<double>& eigenvalues() {
    std::lock_guard<std::mutex> lock(mu);
    if (!spectrum) {
      spectrum = ops::fredholm_spectrum(ops::build_double_layer(grid), grid);
    }
    return *spectrum;
  }
};

}  // extern "C"

namespace {

thread_local std::string g_last_error;

lg_status status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return LG_ERR_INVALID_ARGUMENT;
    case ErrorCode::NonUnivalent: return LG_ERR_NON_UNIVALENT;
    case ErrorCode::GridTooCoarse: return LG_ERR_GRID_TOO_COARSE;
    case ErrorCode::NotExterior: return LG_ERR_NOT_EXTERIOR;
    case ErrorCode::NoConvergence: return LG_ERR_NO_CONVERGENCE;
    case ErrorCode::CenterOutside: return LG_ERR_CENTER_OUTSIDE;
    case ErrorCode::IllConditioned: return LG_ERR_ILL_CONDITIONED;
    case ErrorCode::SolveFailure: return LG_ERR_SOLVE_FAILURE;
    case ErrorCode::ComplexSpectrum: return LG_ERR_COMPLEX_SPECTRUM;
    case ErrorCode::SideMismatch: return LG_ERR_SIDE_MISMATCH;
    case ErrorCode::CoincidentPoints: return LG_ERR_COINCIDENT_POINTS;
    case ErrorCode::DeformationBreaksUnivalence:
      return LG_ERR_DEFORMATION_BREAKS_UNIVALENCE;
    case ErrorCode::ConfigError: return LG_ERR_CONFIG;
    case ErrorCode::IoError: return LG_ERR_IO;
  }
  return LG_ERR_UNKNOWN;
}

template <typename F>
lg_status guarded(F&& f) {
  try {
    f();
    return LG_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LG_ERR_UNKNOWN;
  }
}

geometry::LaurentContour contour_from_json(const char* text) {
  if (text == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "contour JSON is null");
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("contour: ") + e.what());
  }
  geometry::LaurentContour c;
  c.r = j.value("r", 1.0);
  if (j.contains("a0")) c.a0 = cplx(j["a0"][0], j["a0"][1]);
  if (j.contains("coeffs")) {
    for (const auto& item : j["coeffs"]) {
      c.coeffs.emplace_back(item[0].get<double>(), item[1].get<double>());
    }
  }
  return c;
}

Potential potential_from_json(const char* text) {
  if (text == nullptr) return Potential::zero();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("potential: ") + e.what());
  }
  const std::string type = j.value("type", "zero");
  if (type == "zero") return Potential::zero();
  if (type == "wprime") return Potential::wprime_mode();
  if (type == "fourier") {
    std::vector<double> ck, sk;
    if (j.contains("cos")) ck = j["cos"].get<std::vector<double>>();
    if (j.contains("sin")) sk = j["sin"].get<std::vector<double>>();
    return Potential::fourier(ck, sk, j.value("c0", 0.0));
  }
  throw Error(ErrorCode::ConfigError, "unknown potential type '" + type + "'");
}

}  // namespace

extern "C" {

const char* lg_version(void) { return run::version(); }

const char* lg_last_error(void) { return g_last_error.c_str(); }

void lg_string_free(char* s) { std::free(s); }

lg_status lg_model_create(const char* contour_json, int M, lg_model** out) {
  return guarded([&] {
    if (out == nullptr) {
      throw Error(ErrorCode::InvalidArgument, "output handle is null");
    }
    auto model = std::make_unique<lg_model>();
    model->grid = geometry::build_contour(contour_from_json(contour_json), M);
    *out = model.release();
  });
}

void lg_model_destroy(lg_model* m) { delete m; }

lg_status lg_check_univalence(const char* contour_json, int* ok, char* reason,
                              size_t reason_cap) {
  return guarded([&] {
    const auto rep = geometry::check_univalence(contour_from_json(contour_json));
    if (ok != nullptr) *ok = rep.ok ? 1 : 0;
    if (reason != nullptr && reason_cap > 0) {
      std::strncpy(reason, rep.reason.c_str(), reason_cap - 1);
      reason[reason_cap - 1] = '\0';
    }
  });
}

int lg_model_size(const lg_model* m) { return m ? m->grid.M : 0; }

double lg_model_perimeter(const lg_model* m) {
  return m ? m->grid.perimeter : 0.0;
}

double lg_model_radius(const lg_model* m) { return m ? m->grid.spec.r : 0.0; }

lg_status lg_model_nodes(const lg_model* m, double* re, double* im,
                         double* curvature, double* speed) {
  return guarded([&] {
    if (m == nullptr) throw Error(ErrorCode::InvalidArgument, "null model");
    for (int j = 0; j < m->grid.M; ++j) {
      if (re) re[j] = m->grid.z[j].real();
      if (im) im[j] = m->grid.z[j].imag();
      if (curvature) curvature[j] = m->grid.kappa[j];
      if (speed) speed[j] = m->grid.sp[j];
    }
  });
}

lg_status lg_expand(lg_model* m, double beta, const char* potential_json,
                    lg_expansion* out, double* rho0, double* rho1,
                    double* rho2) {
  return guarded([&] {
    if (m == nullptr || out == nullptr) {
      throw Error(ErrorCode::InvalidArgument, "null argument");
    }
    const Potential W = potential_from_json(potential_json);
    const auto res = expansion::free_energy(m->grid, &m->interior(), beta, W);
    out->F0 = res.F0;
    out->F1 = res.F1;
    out->F2cl = res.F2cl;
    out->F2q = res.F2q;
    out->c1 = res.c1;
    out->c2 = res.c2;
    out->detIV = res.detIV;
    out->logdetprimeN = res.logdetprimeN;
    out->perimeter = m->grid.perimeter;
    out->radius = m->grid.spec.r;
    out->lambda0 = res.lambda0;
    out->lambda1 = res.lambda1;
    for (int j = 0; j < m->grid.M; ++j) {
      if (rho0) rho0[j] = res.rho0[j];
      if (rho1) rho1[j] = res.rho1[j];
      if (rho2) rho2[j] = res.rho2[j];
    }
  });
}

lg_status lg_predict_logz(const lg_expansion* e, double beta, long N,
                          double* out) {
  return guarded([&] {
    if (e == nullptr || out == nullptr) {
      throw Error(ErrorCode::InvalidArgument, "null argument");
    }
    expansion::ExpansionResult res;
    res.F0 = e->F0;
    res.F1 = e->F1;
    res.F2cl = e->F2cl;
    res.F2q = e->F2q;
    *out = expansion::predict_logZ(res, beta, N);
  });
}

lg_status lg_spectrum(lg_model* m, double* eigenvalues, int cap, int* count) {
  return guarded([&] {
    if (m == nullptr) throw Error(ErrorCode::InvalidArgument, "null model");
    const auto& spec = m->eigenvalues();
    if (count != nullptr) *count = static_cast<int>(spec.size());
    if (eigenvalues != nullptr) {
      const int n = std::min<int>(cap, static_cast<int>(spec.size()));
      for (int i = 0; i < n; ++i) eigenvalues[i] = spec[i];
    }
  });
}

lg_status lg_determinants(lg_model* m, double* detIV, double* logdetprimeN) {
  return guarded([&] {
    if (m == nullptr) throw Error(ErrorCode::InvalidArgument, "null model");
    const auto& spec = m->eigenvalues();
    const double det = ops::fredholm_determinant(spec);
    if (detIV != nullptr) *detIV = det;
    if (logdetprimeN != nullptr) {
      *logdetprimeN = ops::detprime_neumann(spec, m->grid.perimeter);
    }
  });
}

lg_status lg_logdet_interior(lg_model* m, double* out) {
  return guarded([&] {
    *out = spectral::logdet_laplacian_interior(m->grid, m->interior());
  });
}

lg_status lg_logdet_exterior(lg_model* m, double* out) {
  return guarded([&] { *out = spectral::logdet_laplacian_exterior(m->grid); });
}

lg_status lg_surgery_check(lg_model* m, lg_det_report* out) {
  return guarded([&] {
    const auto rep = spectral::surgery_check(m->grid, m->interior());
    out->logdet_int_rel = rep.logdet_int_rel;
    out->logdet_ext_rel = rep.logdet_ext_rel;
    out->logdetprimeN = rep.logdetprimeN;
    out->surgery_residual = rep.surgery_residual;
  });
}

lg_status lg_circle_logz(double r, double beta, long N, double* out) {
  return guarded([&] { *out = ensemble::circle_logZ(r, beta, N); });
}

lg_status lg_beta1_logz(lg_model* m, long N, const char* potential_json,
                        double* out) {
  return guarded([&] {
    *out = ensemble::beta1_logZ(m->grid, N, potential_from_json(potential_json));
  });
}

lg_status lg_smalln_logz(lg_model* m, double beta, int N,
                         const char* potential_json, double* value,
                         double* error_estimate) {
  return guarded([&] {
    const auto v = ensemble::smallN_logZ(m->grid.spec, beta, N,
                                         potential_from_json(potential_json));
    if (value != nullptr) *value = v.value;
    if (error_estimate != nullptr) *error_estimate = v.error_estimate;
  });
}

lg_status lg_mean_stress(lg_model* m, double beta, const char* potential_json,
                         const double z[2], double out[2]) {
  return guarded([&] {
    const cplx t = ensemble::mean_stress_finiteN(
        m->grid, beta, potential_from_json(potential_json), cplx(z[0], z[1]));
    out[0] = t.real();
    out[1] = t.imag();
  });
}

lg_status lg_bbgky_residual(lg_model* m, double beta,
                            const char* potential_json, double* out) {
  return guarded([&] {
    *out = ensemble::bbgky_residual(m->grid, beta,
                                    potential_from_json(potential_json));
  });
}

lg_status lg_sample_density(lg_model* m, double beta,
                            const char* potential_json,
                            const lg_chain_config* chain, double* density,
                            double* density_err, double* bin_arclen,
                            double* acceptance_rate) {
  return guarded([&] {
    if (m == nullptr || chain == nullptr) {
      throw Error(ErrorCode::InvalidArgument, "null argument");
    }
    ensemble::GasConfig gas;
    gas.grid = &m->grid;
    gas.beta = beta;
    gas.N = chain->N;
    gas.W = potential_from_json(potential_json);
    ensemble::ChainConfig cc;
    cc.seed = chain->seed;
    cc.steps = chain->steps;
    cc.burnin = chain->burnin;
    cc.width = chain->width;
    cc.density_bins = chain->density_bins;
    const auto st = ensemble::mcmc_run(gas, cc);
    for (int b = 0; b < cc.density_bins; ++b) {
      if (density) density[b] = st.density[b];
      if (density_err) density_err[b] = st.density_err[b];
      if (bin_arclen) bin_arclen[b] = st.density_bin_arclen[b];
    }
    if (acceptance_rate) *acceptance_rate = st.acceptance_rate;
  });
}

lg_status lg_phi_pair(lg_model* m, const double z[2], const double zeta[2],
                      double* out) {
  return guarded([&] {
    *out = correlators::phi_pair_connected(m->grid, m->interior(),
                                           cplx(z[0], z[1]),
                                           cplx(zeta[0], zeta[1]));
  });
}

lg_status lg_dphi_sq(lg_model* m, const double z[2], double out[2]) {
  return guarded([&] {
    const cplx v =
        correlators::dphi_sq_connected(m->grid, m->interior(), cplx(z[0], z[1]));
    out[0] = v.real();
    out[1] = v.imag();
  });
}

lg_status lg_vertex_mean(lg_model* m, double beta, const double z[2],
                         double alpha, long N, int kind, double out[2]) {
  return guarded([&] {
    const auto k = kind == 0 ? correlators::VertexKind::Holomorphic
                             : correlators::VertexKind::Absolute;
    const cplx v =
        correlators::vertex_mean(m->grid, beta, cplx(z[0], z[1]), alpha, N, k);
    out[0] = v.real();
    out[1] = v.imag();
  });
}

lg_status lg_run(const char* command, const char* config_json,
                 const char* out_dir, int* exit_code, char** summary_json) {
  return guarded([&] {
    if (command == nullptr || config_json == nullptr) {
      throw Error(ErrorCode::InvalidArgument, "command/config is null");
    }
    const auto result = run::run_command(
        command, config_json, out_dir == nullptr ? "." : out_dir);
    if (exit_code != nullptr) *exit_code = result.exit_code;
    if (summary_json != nullptr) {
      *summary_json =
          static_cast<char*>(std::malloc(result.summary_json.size() + 1));
      std::memcpy(*summary_json, result.summary_json.c_str(),
                  result.summary_json.size() + 1);
    }
  });
}

}  // extern "C"
