#include "loggas/run.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "loggas/correlators.hpp"
#include "loggas/ensemble.hpp"
#include "loggas/expansion.hpp"
#include "loggas/fourier.hpp"
#include "loggas/geometry.hpp"
#include "loggas/maps.hpp"
#include "loggas/operators.hpp"
#include "loggas/potential.hpp"
#include "loggas/spectral.hpp"
#include "loggas/verify.hpp"

namespace loggas::run {

using json = nlohmann::ordered_json;

const char* version() { return "0.1.0"; }

namespace {

std::string fnv1a_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

struct RunConfig {
  geometry::LaurentContour contour;
  int M = 256;
  double beta = 1.0;
  Potential potential;
  std::uint64_t seed = 1;
  json raw;
};

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ConfigError, path + ": " + what);
}

double finite_number(const json& j, const std::string& path) {
  if (!j.is_number()) config_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) config_error(path, "must be finite");
  return v;
}

cplx complex_pair(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) {
    config_error(path, "expected a [re, im] pair");
  }
  return cplx(finite_number(j[0], path + "[0]"), finite_number(j[1], path + "[1]"));
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("config: ") + e.what());
  }
  RunConfig cfg;
  cfg.raw = j;

  if (!j.contains("contour")) config_error("config.contour", "missing");
  const json& c = j["contour"];
  cfg.contour.r = finite_number(c.value("r", json(1.0)), "config.contour.r");
  if (!(cfg.contour.r > 0.0)) config_error("config.contour.r", "must be positive");
  if (c.contains("a0")) cfg.contour.a0 = complex_pair(c["a0"], "config.contour.a0");
  if (c.contains("coeffs")) {
    if (!c["coeffs"].is_array()) config_error("config.contour.coeffs", "expected array");
    int k = 0;
    for (const auto& item : c["coeffs"]) {
      cfg.contour.coeffs.push_back(
          complex_pair(item, "config.contour.coeffs[" + std::to_string(k) + "]"));
      ++k;
    }
  }

  cfg.M = 256;
  if (j.contains("grid")) {
    cfg.M = static_cast<int>(finite_number(j["grid"].value("M", json(256)),
                                           "config.grid.M"));
  }
  if (cfg.M < 32 || cfg.M > 2048 || (cfg.M & (cfg.M - 1)) != 0) {
    config_error("config.grid.M", "must be a power of two in [32, 2048]");
  }

  cfg.beta = finite_number(j.value("beta", json(1.0)), "config.beta");
  if (!(cfg.beta >= 0.1)) {
    config_error("config.beta", "must be >= 0.1 (small-beta regime unsupported)");
  }

  if (j.contains("potential")) {
    const json& p = j["potential"];
    const std::string type = p.value("type", "zero");
    if (type == "zero") {
      cfg.potential = Potential::zero();
    } else if (type == "fourier") {
      std::vector<double> ck, sk;
      if (p.contains("cos")) {
        for (size_t i = 0; i < p["cos"].size(); ++i) {
          ck.push_back(finite_number(p["cos"][i], "config.potential.cos"));
        }
      }
      if (p.contains("sin")) {
        for (size_t i = 0; i < p["sin"].size(); ++i) {
          sk.push_back(finite_number(p["sin"][i], "config.potential.sin"));
        }
      }
      const double c0 =
          p.contains("c0") ? finite_number(p["c0"], "config.potential.c0") : 0.0;
      cfg.potential = Potential::fourier(ck, sk, c0);
    } else if (type == "wprime") {
      cfg.potential = Potential::wprime_mode();
    } else {
      config_error("config.potential.type", "unknown type '" + type + "'");
    }
  }

  if (j.contains("seed")) {
    cfg.seed = static_cast<std::uint64_t>(
        finite_number(j["seed"], "config.seed"));
  }
  return cfg;
}

void ensure_finite(const json& j, const std::string& path) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) {
    throw Error(ErrorCode::SolveFailure, "non-finite output at " + path);
  }
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) ensure_finite(v, path + "." + k);
  } else if (j.is_array()) {
    int i = 0;
    for (const auto& v : j) ensure_finite(v, path + "[" + std::to_string(i++) + "]");
  }
}

class Emitter {
 public:
  Emitter(std::string out_dir, std::string hash)
      : dir_(std::move(out_dir)), hash_(std::move(hash)) {
    std::filesystem::create_directories(dir_);
  }

  void write_csv(const std::string& name, const std::string& header,
                 const std::vector<std::vector<double>>& rows) {
    std::ofstream f(std::filesystem::path(dir_) / name);
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + name);
    f << "# config_hash=" << hash_ << " version=" << version() << "\n";
    f << header << "\n";
    char buf[40];
    for (const auto& row : rows) {
      for (size_t i = 0; i < row.size(); ++i) {
        if (!std::isfinite(row[i])) {
          throw Error(ErrorCode::SolveFailure, "non-finite output in " + name);
        }
        std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
        f << (i ? "," : "") << buf;
      }
      f << "\n";
    }
  }

  void write_summary(json& summary) {
    summary["config_hash"] = hash_;
    summary["version"] = version();
    ensure_finite(summary, "summary");
    std::ofstream f(std::filesystem::path(dir_) / "summary.json");
    if (!f) throw Error(ErrorCode::IoError, "cannot open summary.json");
    f << summary.dump(2) << "\n";
  }

 private:
  std::string dir_;
  std::string hash_;
};

// Probe-point CSV: one "re,im[,alpha]" row per point; '#' lines skipped.
std::vector<std::vector<double>> read_probe_csv(const std::string& path,
                                                size_t min_cols) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read probe CSV " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigError, "bad probe CSV cell '" + cell + "'");
      }
    }
    if (row.size() < min_cols) {
      throw Error(ErrorCode::ConfigError, "probe CSV row too short in " + path);
    }
    rows.push_back(row);
  }
  return rows;
}

json cmd_expand(const RunConfig& cfg, Emitter& em) {
  const auto grid = geometry::build_contour(cfg.contour, cfg.M);
  const auto imap = maps::interior_map(grid, cfg.contour.a0);
  const auto res = expansion::free_energy(grid, &imap, cfg.beta, cfg.potential);

  std::vector<std::vector<double>> rows;
  for (int j = 0; j < grid.M; ++j) {
    rows.push_back({grid.t[j], res.rho0[j], res.rho1[j], res.rho2[j]});
  }
  em.write_csv("density.csv", "t,rho0,rho1,rho2", rows);

  // Optional off-contour probe list (columns re, im): equilibrium potential
  // and the derivative correlator at each point.
  if (cfg.raw.contains("expand") && cfg.raw["expand"].contains("probes_csv")) {
    const auto pts = read_probe_csv(cfg.raw["expand"]["probes_csv"], 2);
    std::vector<std::vector<double>> out;
    for (size_t i = 0; i < pts.size(); ++i) {
      const cplx z(pts[i][0], pts[i][1]);
      const int side = geometry::winding_number(grid, z);
      double phi0 = -2.0 * cfg.beta * std::log(cfg.contour.r);
      if (side == 0) {
        phi0 -= 2.0 * cfg.beta * std::log(std::abs(maps::eval_w_ext(grid, z)));
      }
      const cplx dphi = correlators::dphi_sq_connected(grid, imap, z);
      out.push_back({static_cast<double>(i), z.real(), z.imag(),
                     static_cast<double>(side), phi0, dphi.real(),
                     dphi.imag()});
    }
    em.write_csv("probes.csv", "id,re,im,inside,phi0,dphi_sq_re,dphi_sq_im",
                 out);
  }

  json out;
  out["F0"] = res.F0;
  out["F1"] = res.F1;
  out["F2cl"] = res.F2cl;
  out["F2q"] = res.F2q;
  out["F2"] = res.F2cl + res.F2q;
  out["c1"] = res.c1;
  out["c2"] = res.c2;
  out["P"] = grid.perimeter;
  out["r"] = cfg.contour.r;
  out["detIV"] = res.detIV;
  out["logdetprimeN"] = res.logdetprimeN;
  out["lambda0"] = res.lambda0;
  out["lambda1"] = res.lambda1;
  return out;
}

json cmd_spectrum(const RunConfig& cfg, Emitter& em) {
  const auto grid = geometry::build_contour(cfg.contour, cfg.M);
  const auto V = ops::build_double_layer(grid);
  const auto spec = ops::fredholm_spectrum(V, grid);

  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < spec.size(); ++i) {
    double pairing = 0.0;
    if (std::abs(spec[i] - 1.0) > 1e-8 && std::abs(spec[i]) > 1e-12) {
      pairing = 1e18;
      for (double mu : spec) pairing = std::min(pairing, std::abs(mu + spec[i]));
    }
    rows.push_back({static_cast<double>(i), spec[i], pairing});
  }
  em.write_csv("spectrum.csv", "index,lambda,pair_residual", rows);

  json out;
  out["detIV"] = ops::fredholm_determinant(spec);
  out["logdetprimeN"] = ops::detprime_neumann(spec, grid.perimeter);
  out["P"] = grid.perimeter;
  return out;
}

json cmd_sample(const RunConfig& cfg, Emitter& em) {
  const auto grid = geometry::build_contour(cfg.contour, cfg.M);
  const json& jc = cfg.raw.value("sample", json::object());

  ensemble::GasConfig gas;
  gas.grid = &grid;
  gas.beta = cfg.beta;
  gas.N = static_cast<long>(finite_number(jc.value("N", json(16)), "config.sample.N"));
  gas.W = cfg.potential;

  ensemble::ChainConfig chain;
  chain.seed = cfg.seed;
  chain.steps = static_cast<long>(
      finite_number(jc.value("steps", json(100000)), "config.sample.steps"));
  chain.burnin = static_cast<long>(
      finite_number(jc.value("burnin", json(10000)), "config.sample.burnin"));
  chain.width =
      finite_number(jc.value("width", json(0.5)), "config.sample.width");
  chain.density_bins = static_cast<int>(finite_number(
      jc.value("density_bins", json(64)), "config.sample.density_bins"));
  chain.pair_bins = static_cast<int>(finite_number(
      jc.value("pair_bins", json(64)), "config.sample.pair_bins"));
  if (jc.contains("probes")) {
    int i = 0;
    for (const auto& p : jc["probes"]) {
      ensemble::VertexProbe vp;
      vp.z = complex_pair(p.at("z"), "config.sample.probes[" + std::to_string(i) + "].z");
      vp.alpha = finite_number(p.value("alpha", json(1.0)), "config.sample.probes.alpha");
      vp.absolute = p.value("kind", "absolute") != "holomorphic";
      chain.probes.push_back(vp);
      ++i;
    }
  }
  // Vertex probe list as CSV (columns re, im, alpha), absolute kind.
  if (jc.contains("probes_csv")) {
    for (const auto& row : read_probe_csv(jc["probes_csv"], 3)) {
      ensemble::VertexProbe vp;
      vp.z = cplx(row[0], row[1]);
      vp.alpha = row[2];
      vp.absolute = true;
      chain.probes.push_back(vp);
    }
  }

  const auto st = ensemble::mcmc_run(gas, chain);

  std::vector<std::vector<double>> rows;
  for (int b = 0; b < chain.density_bins; ++b) {
    rows.push_back({kTwoPi * (b + 0.5) / chain.density_bins, st.density[b],
                    st.density_err[b], st.density_bin_arclen[b]});
  }
  em.write_csv("density_hist.csv", "t,density,stderr,bin_arclen", rows);

  rows.clear();
  for (int b = 0; b < chain.pair_bins; ++b) {
    rows.push_back({kPi * (b + 0.5) / chain.pair_bins, st.pair_hist[b]});
  }
  em.write_csv("pair_hist.csv", "dt,fraction", rows);

  if (!chain.probes.empty()) {
    // Sampled means next to the leading-order vertex formulas.
    std::vector<std::vector<double>> vrows;
    for (size_t p = 0; p < chain.probes.size(); ++p) {
      const auto& pr = chain.probes[p];
      cplx pred(0.0, 0.0);
      try {
        pred = correlators::vertex_mean(
            grid, cfg.beta, pr.z, pr.alpha, gas.N,
            pr.absolute ? correlators::VertexKind::Absolute
                        : correlators::VertexKind::Holomorphic);
      } catch (const Error&) {
        // interior probes have no closed form; leave the prediction at zero
      }
      vrows.push_back({static_cast<double>(p), st.vertex[p].mean.real(),
                       st.vertex[p].mean.imag(), st.vertex[p].stderr_abs,
                       pred.real(), pred.imag()});
    }
    em.write_csv("vertex.csv", "id,value_re,value_im,stderr,pred_re,pred_im",
                 vrows);
  }

  json out;
  out["acceptance_rate"] = st.acceptance_rate;
  out["acceptance_ok"] = st.acceptance_ok;
  out["samples"] = st.samples;
  out["N"] = gas.N;
  json probes = json::array();
  for (size_t p = 0; p < st.vertex.size(); ++p) {
    json v;
    v["z"] = {chain.probes[p].z.real(), chain.probes[p].z.imag()};
    v["alpha"] = chain.probes[p].alpha;
    v["kind"] = chain.probes[p].absolute ? "absolute" : "holomorphic";
    v["mean_re"] = st.vertex[p].mean.real();
    v["mean_im"] = st.vertex[p].mean.imag();
    v["stderr"] = st.vertex[p].stderr_abs;
    probes.push_back(v);
  }
  out["vertex"] = probes;
  return out;
}

json cmd_oracle(const RunConfig& cfg, Emitter&) {
  const json& jo = cfg.raw.value("oracle", json::object());
  const std::string mode = jo.value("mode", "circle");
  const long N = static_cast<long>(
      finite_number(jo.value("N", json(2)), "config.oracle.N"));

  json out;
  out["mode"] = mode;
  out["N"] = N;
  if (mode == "circle") {
    if (!cfg.contour.coeffs.empty()) {
      config_error("config.oracle.mode", "circle oracle needs a pure circle contour");
    }
    out["logZ"] = ensemble::circle_logZ(cfg.contour.r, cfg.beta, N);
    out["error_estimate"] = 0.0;
  } else if (mode == "beta1") {
    const auto grid = geometry::build_contour(cfg.contour, cfg.M);
    out["logZ"] = ensemble::beta1_logZ(grid, N, cfg.potential);
    out["error_estimate"] = 0.0;
  } else if (mode == "smallN") {
    const auto v = ensemble::smallN_logZ(cfg.contour, cfg.beta,
                                         static_cast<int>(N), cfg.potential);
    out["logZ"] = v.value;
    out["error_estimate"] = v.error_estimate;
  } else {
    config_error("config.oracle.mode", "unknown mode '" + mode + "'");
  }
  return out;
}

json cmd_deform(const RunConfig& cfg, Emitter& em) {
  const json& jd = cfg.raw.value("deform", json::object());
  spectral::VariationConfig vc;
  vc.M = cfg.M;
  const std::string q = jd.value("quantity", "logr");
  if (q == "logr") {
    vc.quantity = spectral::VariedQuantity::LogR;
  } else if (q == "logdet_ext") {
    vc.quantity = spectral::VariedQuantity::LogDetExt;
  } else if (q == "green") {
    vc.quantity = spectral::VariedQuantity::Green;
  } else if (q == "detIV") {
    vc.quantity = spectral::VariedQuantity::DetIV;
  } else {
    config_error("config.deform.quantity", "unknown quantity '" + q + "'");
  }
  vc.direction.mode = static_cast<int>(
      finite_number(jd.value("mode", json(1)), "config.deform.mode"));
  vc.direction.phase =
      finite_number(jd.value("phase", json(0.0)), "config.deform.phase");
  vc.direction.dilation = jd.value("dilation", false);
  if (jd.contains("eps")) {
    vc.eps.clear();
    for (const auto& e : jd["eps"]) {
      vc.eps.push_back(finite_number(e, "config.deform.eps"));
    }
  }
  if (jd.contains("green_a")) vc.green_a = complex_pair(jd["green_a"], "config.deform.green_a");
  if (jd.contains("green_b")) vc.green_b = complex_pair(jd["green_b"], "config.deform.green_b");

  const auto rep = spectral::variation_harness(cfg.contour, vc);
  std::vector<std::vector<double>> rows;
  for (const auto& r : rep.rows) {
    rows.push_back({r.eps, r.fd_value, r.predicted, r.mismatch});
  }
  em.write_csv("deform.csv", "eps,fd_value,predicted,mismatch", rows);

  json out;
  out["quantity"] = q;
  out["slope"] = rep.slope;
  return out;
}

json cmd_verify(const RunConfig& cfg, Emitter&, int* exit_code) {
  const auto rep =
      verify::verify_suite(cfg.contour, cfg.M, cfg.beta, cfg.potential, cfg.seed);
  json out;
  out["all_pass"] = rep.all_pass;
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json jc;
    jc["id"] = c.id;
    jc["pass"] = c.pass;
    if (std::isfinite(c.residual)) jc["residual"] = c.residual;
    jc["tol"] = c.tol;
    if (!c.message.empty()) jc["message"] = c.message;
    checks.push_back(jc);
  }
  out["checks"] = checks;
  if (!rep.all_pass) *exit_code = 1;
  return out;
}

}  // namespace

RunResult run_command(const std::string& command,
                      const std::string& config_json,
                      const std::string& out_dir) {
  RunResult result;
  json summary;
  try {
    const RunConfig cfg = parse_config(config_json);
    Emitter em(out_dir.empty() ? "." : out_dir, fnv1a_hash(config_json));
    summary["command"] = command;
    int exit_code = 0;
    if (command == "expand") {
      summary["expand"] = cmd_expand(cfg, em);
    } else if (command == "spectrum") {
      summary["spectrum"] = cmd_spectrum(cfg, em);
    } else if (command == "sample") {
      summary["sample"] = cmd_sample(cfg, em);
    } else if (command == "oracle") {
      summary["oracle"] = cmd_oracle(cfg, em);
    } else if (command == "deform") {
      summary["deform"] = cmd_deform(cfg, em);
    } else if (command == "verify") {
      summary["verify"] = cmd_verify(cfg, em, &exit_code);
    } else {
      config_error("command", "unknown command '" + command + "'");
    }
    em.write_summary(summary);
    result.exit_code = exit_code;
    result.summary_json = summary.dump(2);
    return result;
  } catch (const Error& e) {
    json err;
    err["command"] = command;
    err["error"] = e.what();
    err["code"] = error_code_name(e.code());
    result.summary_json = err.dump(2);
    result.exit_code = e.code() == ErrorCode::ConfigError ? 2 : 1;
    return result;
  } catch (const std::exception& e) {
    json err;
    err["command"] = command;
    err["error"] = e.what();
    result.summary_json = err.dump(2);
    result.exit_code = 1;
    return result;
  }
}

}  // namespace loggas::run
