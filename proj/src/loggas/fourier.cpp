#include "loggas/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace loggas::fourier {

namespace {

// FFTW plan creation is not thread-safe; execution of a fresh plan is guarded
// along with it for simplicity at these sizes.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

CField run_dft(const CField& in, int sign) {
  const int M = static_cast<int>(in.size());
  CField out(M);
  std::lock_guard<std::mutex> lock(fftw_mutex());
  fftw_plan plan = fftw_plan_dft_1d(
      M,
      reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
      reinterpret_cast<fftw_complex*>(out.data()),
      sign, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

}  // namespace

CField fft(const CField& f) { return run_dft(f, FFTW_FORWARD); }

CField ifft(const CField& c) {
  CField out = run_dft(c, FFTW_BACKWARD);
  const double inv = 1.0 / static_cast<double>(c.size());
  for (auto& v : out) v *= inv;
  return out;
}

CField coeffs(const CField& f) {
  CField c = fft(f);
  const double inv = 1.0 / static_cast<double>(f.size());
  for (auto& v : c) v *= inv;
  return c;
}

CField coeffs(const Field& f) {
  CField cf(f.begin(), f.end());
  return coeffs(cf);
}

double mean(const Field& f) {
  double s = 0.0;
  for (double v : f) s += v;
  return s / static_cast<double>(f.size());
}

namespace {

CField multiply_modes(const CField& f, const std::function<cplx(int)>& m) {
  const int M = static_cast<int>(f.size());
  CField c = fft(f);
  for (int j = 0; j < M; ++j) c[j] *= m(freq(j, M));
  CField out = ifft(c);
  return out;
}

Field real_part(const CField& f) {
  Field out(f.size());
  for (size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
  return out;
}

}  // namespace

Field deriv_t(const Field& f) {
  const int M = static_cast<int>(f.size());
  CField cf(f.begin(), f.end());
  CField out = multiply_modes(cf, [M](int k) {
    if (2 * std::abs(k) == M) return cplx(0.0, 0.0);
    return cplx(0.0, static_cast<double>(k));
  });
  return real_part(out);
}

CField deriv_t(const CField& f) {
  const int M = static_cast<int>(f.size());
  return multiply_modes(f, [M](int k) {
    if (2 * std::abs(k) == M) return cplx(0.0, 0.0);
    return cplx(0.0, static_cast<double>(k));
  });
}

Field abs_k_multiplier(const Field& f) {
  CField cf(f.begin(), f.end());
  CField out = multiply_modes(
      cf, [](int k) { return cplx(std::abs(k), 0.0); });
  return real_part(out);
}

CField abs_k_multiplier(const CField& f) {
  return multiply_modes(f, [](int k) { return cplx(std::abs(k), 0.0); });
}

Field apply_multiplier(const Field& f, const std::function<double(int)>& m) {
  CField cf(f.begin(), f.end());
  CField out = multiply_modes(cf, [&m](int k) { return cplx(m(k), 0.0); });
  return real_part(out);
}

Field antideriv_t(const Field& f) {
  const int M = static_cast<int>(f.size());
  CField c = coeffs(f);
  const double m0 = c[0].real();
  CField g(M, cplx(0.0, 0.0));
  for (int j = 1; j < M; ++j) {
    const int k = freq(j, M);
    if (2 * std::abs(k) == M) continue;  // Nyquist dropped from the ramp-free part
    g[j] = c[j] / cplx(0.0, static_cast<double>(k));
  }
  CField osc = ifft(g);
  for (auto& v : osc) v *= static_cast<double>(M);
  Field out(M);
  const double osc0 = osc[0].real();
  for (int j = 0; j < M; ++j) {
    const double t = kTwoPi * j / M;
    out[j] = m0 * t + osc[j].real() - osc0;
  }
  return out;
}

double trig_eval(const Field& f, double t) {
  CField cf(f.begin(), f.end());
  return trig_eval(cf, t).real();
}

cplx trig_eval(const CField& f, double t) { return TrigInterp(f).eval(t); }

TrigInterp::TrigInterp(const Field& samples)
    : TrigInterp(CField(samples.begin(), samples.end())) {}

TrigInterp::TrigInterp(const CField& samples) : c_(coeffs(samples)) {}

cplx TrigInterp::eval(double t) const {
  const int M = static_cast<int>(c_.size());
  cplx acc(0.0, 0.0);
  for (int j = 0; j < M; ++j) {
    const int k = freq(j, M);
    if (2 * k == M) {
      acc += c_[j] * std::cos(0.5 * M * t);
    } else {
      acc += c_[j] * std::polar(1.0, k * t);
    }
  }
  return acc;
}

cplx TrigInterp::eval_deriv(double t) const {
  const int M = static_cast<int>(c_.size());
  cplx acc(0.0, 0.0);
  for (int j = 0; j < M; ++j) {
    const int k = freq(j, M);
    if (2 * k == M) {
      acc += c_[j] * (-0.5 * M * std::sin(0.5 * M * t));
    } else {
      acc += c_[j] * cplx(0.0, k) * std::polar(1.0, k * t);
    }
  }
  return acc;
}

double tail_fraction(const Field& re, const Field& im, int kmax) {
  const int M = static_cast<int>(re.size());
  CField cf(M);
  for (int j = 0; j < M; ++j) cf[j] = cplx(re[j], im[j]);
  CField c = coeffs(cf);
  double peak = 0.0, tail = 0.0;
  for (int j = 0; j < M; ++j) {
    const double a = std::abs(c[j]);
    peak = std::max(peak, a);
    if (std::abs(freq(j, M)) > kmax) tail = std::max(tail, a);
  }
  return peak > 0.0 ? tail / peak : 0.0;
}

}  // namespace loggas::fourier
