#include "loggas/ensemble.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "loggas/fourier.hpp"
#include "loggas/maps.hpp"

namespace loggas::ensemble {

namespace {

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

// Deterministic uniform deviate in [0, 1) from the raw generator stream.
double u01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

}  // namespace

double gas_log_weight(const GasConfig& config, const std::vector<double>& ts) {
  const LaurentContour& spec = config.grid->spec;
  const long N = config.N;
  if (static_cast<long>(ts.size()) != N) {
    throw Error(ErrorCode::InvalidArgument, "position count must equal N");
  }
  std::vector<cplx> zs(N);
  for (long i = 0; i < N; ++i) zs[i] = spec.at_angle(ts[i]);
  double acc = 0.0;
  for (long i = 0; i < N; ++i) {
    for (long j = i + 1; j < N; ++j) {
      const double d = std::abs(zs[i] - zs[j]);
      if (d == 0.0) return -std::numeric_limits<double>::infinity();
      acc += 2.0 * config.beta * std::log(d);
    }
  }
  for (long i = 0; i < N; ++i) {
    acc += config.W.value(spec, config.beta, ts[i]) + std::log(spec.speed(ts[i]));
  }
  return acc;
}

ChainStats mcmc_run(const GasConfig& config, const ChainConfig& chain) {
  const LaurentContour& spec = config.grid->spec;
  const long N = config.N;
  const double beta = config.beta;
  if (chain.steps <= chain.burnin) {
    throw Error(ErrorCode::InvalidArgument, "steps must exceed burnin");
  }

  std::mt19937_64 rng(chain.seed);
  std::vector<double> ts(N);
  std::vector<cplx> zs(N);
  std::vector<double> site_w(N);  // W + log sp at current positions
  for (long i = 0; i < N; ++i) {
    ts[i] = kTwoPi * (i + 0.5) / N;
    zs[i] = spec.at_angle(ts[i]);
    site_w[i] = config.W.value(spec, beta, ts[i]) + std::log(spec.speed(ts[i]));
  }

  const int B = chain.density_bins;
  const int PB = chain.pair_bins;
  const long stride = chain.sample_stride > 0 ? chain.sample_stride : N;
  const int nbatch = 32;
  const long usable = chain.steps - chain.burnin;
  const long batch_len = std::max<long>(usable / nbatch, 1);

  std::vector<int> bin_of(N);
  std::vector<long> counts(B, 0);
  auto bin_index = [&](double t) {
    int b = static_cast<int>(t / kTwoPi * B);
    return std::min(std::max(b, 0), B - 1);
  };
  for (long i = 0; i < N; ++i) {
    bin_of[i] = bin_index(ts[i]);
    ++counts[bin_of[i]];
  }

  const size_t NP = chain.probes.size();
  const size_t NF = chain.field_points.size();

  std::vector<std::vector<double>> batch_density(nbatch, std::vector<double>(B, 0.0));
  std::vector<long> batch_steps(nbatch, 0);
  std::vector<double> pair_counts(PB, 0.0);
  long pair_samples = 0;
  std::vector<std::vector<cplx>> batch_vertex(nbatch, std::vector<cplx>(NP, 0.0));
  std::vector<std::vector<double>> batch_field(nbatch, std::vector<double>(NF, 0.0));
  std::vector<std::vector<double>> batch_field2(
      nbatch, std::vector<double>(NF * NF, 0.0));
  std::vector<long> batch_samples(nbatch, 0);

  long accepted = 0, proposed = 0;
  for (long step = 0; step < chain.steps; ++step) {
    const long i = static_cast<long>(rng() % static_cast<std::uint64_t>(N));
    const double tnew = wrap_angle(ts[i] + chain.width * (2.0 * u01(rng) - 1.0));
    const cplx znew = spec.at_angle(tnew);
    const double wnew =
        config.W.value(spec, beta, tnew) + std::log(spec.speed(tnew));

    double dlog = wnew - site_w[i];
    bool reject = false;
    for (long j = 0; j < N; ++j) {
      if (j == i) continue;
      const double dn = std::abs(znew - zs[j]);
      if (dn == 0.0) {
        reject = true;
        break;
      }
      dlog += 2.0 * beta * (std::log(dn) - std::log(std::abs(zs[i] - zs[j])));
    }
    const double u = u01(rng);  // drawn every step to keep the stream aligned
    if (!reject && std::log(u) < dlog) {
      ts[i] = tnew;
      zs[i] = znew;
      site_w[i] = wnew;
      const int nb = bin_index(tnew);
      if (nb != bin_of[i]) {
        --counts[bin_of[i]];
        ++counts[nb];
        bin_of[i] = nb;
      }
      if (step >= chain.burnin) ++accepted;
    }
    if (step >= chain.burnin) {
      ++proposed;
      const long k = step - chain.burnin;
      const int batch = std::min<long>(k / batch_len, nbatch - 1);
      for (int b = 0; b < B; ++b) batch_density[batch][b] += counts[b];
      ++batch_steps[batch];

      if (k % stride == 0) {
        ++batch_samples[batch];
        if (PB > 0 && N >= 2) {
          ++pair_samples;
          for (long a = 0; a < N; ++a) {
            for (long b2 = a + 1; b2 < N; ++b2) {
              double dt = std::abs(ts[a] - ts[b2]);
              dt = std::min(dt, kTwoPi - dt);  // fold to [0, pi]
              int pb = static_cast<int>(dt / kPi * PB);
              pb = std::min(pb, PB - 1);
              pair_counts[pb] += 1.0;
            }
          }
        }
        for (size_t p = 0; p < NP; ++p) {
          const VertexProbe& pr = chain.probes[p];
          cplx acc = 0.0;
          if (pr.absolute) {
            double s = 0.0;
            for (long j = 0; j < N; ++j) s += std::log(std::abs(pr.z - zs[j]));
            acc = std::exp(2.0 * pr.alpha * s);
          } else {
            cplx s = 0.0;
            for (long j = 0; j < N; ++j) s += std::log(pr.z - zs[j]);
            acc = std::exp(pr.alpha * s);
          }
          batch_vertex[batch][p] += acc;
        }
        if (NF > 0) {
          std::vector<double> u_p(NF);
          for (size_t p = 0; p < NF; ++p) {
            double s = 0.0;
            for (long j = 0; j < N; ++j) {
              s += std::log(std::norm(chain.field_points[p] - zs[j]));
            }
            u_p[p] = s;
          }
          for (size_t p = 0; p < NF; ++p) {
            batch_field[batch][p] += u_p[p];
            for (size_t q = 0; q < NF; ++q) {
              batch_field2[batch][p * NF + q] += u_p[p] * u_p[q];
            }
          }
        }
      }
    }
  }

  ChainStats out;
  out.acceptance_rate = proposed > 0 ? static_cast<double>(accepted) / proposed : 0.0;
  out.acceptance_ok = out.acceptance_rate >= 0.2 && out.acceptance_rate <= 0.6;

  // Bin arclengths by dense subsampling of the speed.
  out.density_bin_arclen.assign(B, 0.0);
  {
    const int sub = 16;
    for (int b = 0; b < B; ++b) {
      double s = 0.0;
      for (int m = 0; m < sub; ++m) {
        const double t = kTwoPi * (b + (m + 0.5) / sub) / B;
        s += spec.speed(t);
      }
      out.density_bin_arclen[b] = s * kTwoPi / (B * sub);
    }
  }

  out.density.assign(B, 0.0);
  out.density_err.assign(B, 0.0);
  {
    for (int b = 0; b < B; ++b) {
      std::vector<double> vals;
      for (int k = 0; k < nbatch; ++k) {
        if (batch_steps[k] == 0) continue;
        vals.push_back(batch_density[k][b] / batch_steps[k]);
      }
      double m = 0.0;
      for (double v : vals) m += v;
      m /= vals.size();
      double var = 0.0;
      for (double v : vals) var += (v - m) * (v - m);
      var /= vals.size() > 1 ? (vals.size() - 1) : 1;
      const double scale = 1.0 / (N * out.density_bin_arclen[b]);
      out.density[b] = m * scale;
      out.density_err[b] = std::sqrt(var / vals.size()) * scale;
    }
  }

  out.pair_hist.assign(PB, 0.0);
  if (pair_samples > 0 && N >= 2) {
    const double norm = 1.0 / (pair_samples * 0.5 * N * (N - 1));
    for (int b = 0; b < PB; ++b) out.pair_hist[b] = pair_counts[b] * norm;
  }

  out.vertex.resize(NP);
  for (size_t p = 0; p < NP; ++p) {
    std::vector<cplx> vals;
    for (int k = 0; k < nbatch; ++k) {
      if (batch_samples[k] == 0) continue;
      vals.push_back(batch_vertex[k][p] / static_cast<double>(batch_samples[k]));
    }
    cplx m = 0.0;
    for (const cplx& v : vals) m += v;
    m /= static_cast<double>(vals.size());
    double var = 0.0;
    for (const cplx& v : vals) var += std::norm(v - m);
    var /= vals.size() > 1 ? (vals.size() - 1) : 1;
    out.vertex[p].mean = m;
    out.vertex[p].stderr_abs = std::sqrt(var / vals.size());
  }

  out.field_mean.assign(NF, 0.0);
  out.field_cov.assign(NF, std::vector<double>(NF, 0.0));
  out.field_cov_err.assign(NF, std::vector<double>(NF, 0.0));
  if (NF > 0) {
    std::vector<std::vector<double>> cov_b;
    std::vector<std::vector<double>> mean_b;
    for (int k = 0; k < nbatch; ++k) {
      if (batch_samples[k] == 0) continue;
      const double inv = 1.0 / batch_samples[k];
      std::vector<double> mb(NF), cb(NF * NF);
      for (size_t p = 0; p < NF; ++p) mb[p] = batch_field[k][p] * inv;
      for (size_t p = 0; p < NF; ++p) {
        for (size_t q = 0; q < NF; ++q) {
          cb[p * NF + q] = batch_field2[k][p * NF + q] * inv - mb[p] * mb[q];
        }
      }
      mean_b.push_back(mb);
      cov_b.push_back(cb);
    }
    const double nb = static_cast<double>(cov_b.size());
    for (size_t p = 0; p < NF; ++p) {
      double m = 0.0;
      for (const auto& v : mean_b) m += v[p];
      out.field_mean[p] = m / nb;
    }
    for (size_t p = 0; p < NF; ++p) {
      for (size_t q = 0; q < NF; ++q) {
        double m = 0.0;
        for (const auto& v : cov_b) m += v[p * NF + q];
        m /= nb;
        double var = 0.0;
        for (const auto& v : cov_b) {
          var += (v[p * NF + q] - m) * (v[p * NF + q] - m);
        }
        var /= nb > 1 ? (nb - 1) : 1;
        out.field_cov[p][q] = m;
        out.field_cov_err[p][q] = std::sqrt(var / nb);
      }
    }
  }

  out.samples = 0;
  for (long s : batch_samples) out.samples += s;
  return out;
}

double beta1_logZ(const ContourGrid& grid, long N, const Potential& W) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  if (grid.M < 8 * N) {
    throw Error(ErrorCode::InvalidArgument,
                "moment quadrature needs M >= 8 N");
  }
  const int M = grid.M;
  const double h = kTwoPi / M;

  double rtil = 0.0;
  for (int m = 0; m < M; ++m) rtil = std::max(rtil, std::abs(grid.z[m]));

  // The moment matrix is the Gram matrix A* A of the scaled weighted
  // monomials A(m, k) = sqrt(w_m) (z_m / rtil)^k. Its determinant is
  // |det R|^2 from a QR factorization of A, which sidesteps the squared
  // conditioning of forming the Gram matrix.
  Eigen::MatrixXcd A(M, N);
  for (int m = 0; m < M; ++m) {
    const double wq =
        std::exp(W.value(grid.spec, 1.0, grid.t[m])) * grid.sp[m] * h;
    const double sq = std::sqrt(wq);
    const cplx zt = grid.z[m] / rtil;
    cplx pw = 1.0;
    for (long k = 0; k < N; ++k) {
      A(m, k) = sq * pw;
      pw *= zt;
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
  double logdet = 0.0;
  for (long i = 0; i < N; ++i) {
    const double a = std::abs(qr.matrixQR()(i, i));
    if (!(a > 1e-150)) {
      throw Error(ErrorCode::IllConditioned, "moment matrix pivot collapse");
    }
    logdet += 2.0 * std::log(a);
  }
  return std::lgamma(static_cast<double>(N) + 1.0) + logdet +
         static_cast<double>(N) * (N - 1) * std::log(rtil);
}

namespace {

double smallN_value(const LaurentContour& spec, double beta, int N,
                    const Potential& W, int M) {
  const double h = kTwoPi / M;
  Eigen::VectorXd q(M);
  CField z(M);
  for (int m = 0; m < M; ++m) {
    const double t = kTwoPi * m / M;
    z[m] = spec.at_angle(t);
    q(m) = std::exp(W.value(spec, beta, t)) * spec.speed(t) * h;
  }
  if (N == 1) {
    return std::log(q.sum());
  }
  Eigen::MatrixXd P(M, M);
  for (int a = 0; a < M; ++a) {
    P(a, a) = 0.0;
    for (int b = a + 1; b < M; ++b) {
      const double v = std::pow(std::abs(z[a] - z[b]), 2.0 * beta);
      P(a, b) = v;
      P(b, a) = v;
    }
  }
  if (N == 2) {
    return std::log(q.transpose() * P * q);
  }
  // N = 3: sum_{a,b} q_a q_b P_ab (P diag(q) P)_ab
  Eigen::MatrixXd Y = P * q.asDiagonal() * P;
  double s = 0.0;
  for (int a = 0; a < M; ++a) {
    for (int b = 0; b < M; ++b) s += q(a) * q(b) * P(a, b) * Y(a, b);
  }
  return std::log(s);
}

}  // namespace

OracleValue smallN_logZ(const LaurentContour& spec, double beta, int N,
                        const Potential& W) {
  if (N < 1 || N > 3) {
    throw Error(ErrorCode::InvalidArgument, "direct quadrature supports N <= 3");
  }
  const double v1 = smallN_value(spec, beta, N, W, 128);
  const double v2 = smallN_value(spec, beta, N, W, 256);
  const double v3 = smallN_value(spec, beta, N, W, 512);
  // Coincidence cusp |dt|^{2 beta} limits the algebraic order.
  const double p = beta < 1.0 ? 2.0 * beta + 1.0 : 2.0;
  const double f = std::pow(2.0, p) - 1.0;
  const double e12 = v2 + (v2 - v1) / f;
  const double e23 = v3 + (v3 - v2) / f;
  OracleValue out;
  out.value = e23;
  out.error_estimate = std::abs(e23 - e12) + 1e-14 * std::abs(e23);
  return out;
}

double circle_logZ(double r, double beta, long N) {
  if (!(r > 0.0) || !(beta > 0.0) || N < 1) {
    throw Error(ErrorCode::InvalidArgument, "need r > 0, beta > 0, N >= 1");
  }
  const double n = static_cast<double>(N);
  return (beta * n * n + (1.0 - beta) * n) * std::log(r) +
         n * std::log(kTwoPi) + std::lgamma(1.0 + n * beta) -
         n * std::lgamma(1.0 + beta);
}

TwoGas two_particle_gas(const ContourGrid& grid, double beta,
                        const Potential& W) {
  const int M = grid.M;
  const double h = kTwoPi / M;
  Field ew(M), q(M);
  for (int m = 0; m < M; ++m) {
    ew[m] = std::exp(W.value(grid.spec, beta, grid.t[m]));
    q[m] = ew[m] * grid.sp[m];
  }
  std::vector<Field> pair(M, Field(M, 0.0));
  for (int a = 0; a < M; ++a) {
    for (int b = a + 1; b < M; ++b) {
      const double v = std::pow(std::abs(grid.z[a] - grid.z[b]), 2.0 * beta);
      pair[a][b] = v;
      pair[b][a] = v;
    }
  }
  double Z2 = 0.0;
  for (int a = 0; a < M; ++a) {
    for (int b = 0; b < M; ++b) Z2 += pair[a][b] * q[a] * q[b];
  }
  Z2 *= h * h;

  TwoGas out;
  out.logZ2 = std::log(Z2);
  out.R.assign(M, 0.0);
  for (int a = 0; a < M; ++a) {
    double s = 0.0;
    for (int b = 0; b < M; ++b) s += pair[a][b] * q[b];
    out.R[a] = ew[a] * s * h / Z2;
  }
  out.R2.assign(M, Field(M, 0.0));
  for (int a = 0; a < M; ++a) {
    for (int b = 0; b < M; ++b) {
      out.R2[a][b] = 0.5 * pair[a][b] * ew[a] * ew[b] / Z2;
    }
  }
  return out;
}

cplx mean_stress_finiteN(const ContourGrid& grid, double beta,
                         const Potential& W, cplx z) {
  const int M = grid.M;
  const double h = kTwoPi / M;
  const double hbar = 0.5;
  const TwoGas gas = two_particle_gas(grid, beta, W);
  const bool inside = geometry::winding_number(grid, z) == 1;

  // inner(xi_a) = ∮ R2(xi_a, zeta) / (xi_a - zeta) |dzeta|
  CField inner(M, 0.0);
  for (int a = 0; a < M; ++a) {
    cplx s = 0.0;
    for (int b = 0; b < M; ++b) {
      if (b == a) continue;
      s += gas.R2[a][b] / (grid.z[a] - grid.z[b]) * grid.sp[b];
    }
    inner[a] = s * h;
  }

  // All three terms reduce to Cauchy integrals of node data H(xi):
  // ∮ G(xi)/(z - xi) |dxi| = -∮ [G/(i nu)](xi) / (xi - z) dxi.
  auto cauchy_of = [&](const CField& Gv) {
    CField H(M);
    for (int j = 0; j < M; ++j) H[j] = Gv[j] / (cplx(0.0, 1.0) * grid.nu[j]);
    return -maps::cauchy_integral(grid, H, z, inside);
  };

  const cplx I1 = cauchy_of(inner);

  // ∮ R/(z-xi)^2 |dxi| = ∮ H'(xi)/(xi - z) dxi with H = R/(i nu).
  CField H2(M);
  for (int j = 0; j < M; ++j) H2[j] = gas.R[j] / (cplx(0.0, 1.0) * grid.nu[j]);
  const CField dH2 = fourier::deriv_t(H2);
  CField H2p(M);
  for (int j = 0; j < M; ++j) H2p[j] = dH2[j] / grid.dz[j];
  const cplx I2 = maps::cauchy_integral(grid, H2p, z, inside);

  CField GW(M);
  for (int j = 0; j < M; ++j) {
    GW[j] = W.dz(grid.spec, beta, grid.t[j]) * gas.R[j];
  }
  const cplx I3 = cauchy_of(GW);

  return 2.0 * beta * beta * I1 + beta * hbar * I2 + 2.0 * beta * hbar * I3;
}

double bbgky_residual(const ContourGrid& grid, double beta,
                      const Potential& W) {
  const int M = grid.M;
  const double h = kTwoPi / M;
  const double hbar = 0.5;
  const TwoGas gas = two_particle_gas(grid, beta, W);
  const Field dsR = geometry::spectral_ds(gas.R, grid);

  double worst = 0.0;
  for (int a = 0; a < M; ++a) {
    double s = 0.0;
    for (int b = 0; b < M; ++b) {
      if (b == a) continue;
      const cplx q = grid.nu[a] / (grid.z[a] - grid.z[b]);
      s += gas.R2[a][b] * (-2.0 * q.imag()) * grid.sp[b];
    }
    s *= beta * h;
    const double dsW = W.dt(grid.spec, beta, grid.t[a]) / grid.sp[a];
    const double resid = s + hbar * dsW * gas.R[a] - hbar * dsR[a];
    worst = std::max(worst, std::abs(resid));
  }
  return worst;
}

double logZ2_samples(const CField& z, const Field& sp, const Field& Wv,
                     double beta) {
  const int M = static_cast<int>(z.size());
  const double h = kTwoPi / M;
  double Z2 = 0.0;
  for (int a = 0; a < M; ++a) {
    const double qa = std::exp(Wv[a]) * sp[a];
    for (int b = 0; b < M; ++b) {
      if (b == a) continue;
      Z2 += std::pow(std::abs(z[a] - z[b]), 2.0 * beta) * qa *
            std::exp(Wv[b]) * sp[b];
    }
  }
  return std::log(Z2 * h * h);
}

}  // namespace loggas::ensemble
