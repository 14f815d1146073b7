#pragma once

// Periodic spectral utilities on equispaced grids over [0, 2*pi).
//
// Mode convention for even M: index j holds frequency k = j for j <= M/2 and
// k = j - M otherwise. The Nyquist mode (k = M/2) is treated as cosine-only:
// its derivative multiplier is zero and interpolation uses cos(M t / 2).

#include <functional>

#include "loggas/common.hpp"

namespace loggas::fourier {

// Unnormalized forward DFT: c_j = sum_m f_m exp(-i j t_m).
CField fft(const CField& f);
// Inverse with the 1/M normalization, so ifft(fft(f)) == f.
CField ifft(const CField& c);

// Fourier coefficients c_k (normalized by 1/M), indexed per the convention.
CField coeffs(const Field& f);
CField coeffs(const CField& f);

// Frequency carried by coefficient slot j of an M-point transform.
inline int freq(int j, int M) { return j <= M / 2 ? j : j - M; }

double mean(const Field& f);

// d/dt via ik multipliers (Nyquist multiplier 0).
Field deriv_t(const Field& f);
CField deriv_t(const CField& f);

// Mode-k multiplier |k| (Dirichlet-to-Neumann symbol on the unit circle).
Field abs_k_multiplier(const Field& f);
CField abs_k_multiplier(const CField& f);

// Applies a user multiplier m(k) to each mode.
Field apply_multiplier(const Field& f, const std::function<double(int)>& m);

// Periodic antiderivative: G with G'(t) = f(t) - mean(f), G(0) = 0, plus the
// linear ramp mean(f) * t. Returns samples of mean*t + G at the nodes.
Field antideriv_t(const Field& f);

// Trigonometric interpolation of the band-limited samples at arbitrary t.
double trig_eval(const Field& f, double t);
cplx trig_eval(const CField& f, double t);

// Same interpolation with the coefficients computed once.
class TrigInterp {
 public:
  explicit TrigInterp(const Field& samples);
  explicit TrigInterp(const CField& samples);
  cplx eval(double t) const;
  double eval_real(double t) const { return eval(t).real(); }
  cplx eval_deriv(double t) const;

 private:
  CField c_;
};

// Largest |c_k| over |k| > kmax relative to max |c_k| (spectral tail probe).
double tail_fraction(const Field& re, const Field& im, int kmax);

}  // namespace loggas::fourier
