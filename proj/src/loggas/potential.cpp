#include "loggas/potential.hpp"

#include <cmath>

namespace loggas {

Potential Potential::fourier(std::vector<double> cosk, std::vector<double> sink,
                             double constant) {
  Potential p;
  p.kind = Kind::FourierT;
  p.cos_k = std::move(cosk);
  p.sin_k = std::move(sink);
  p.c0 = constant;
  return p;
}

Potential Potential::wprime_mode() {
  Potential p;
  p.kind = Kind::WPrime;
  return p;
}

bool Potential::is_zero() const {
  if (kind == Kind::Zero) return true;
  if (kind == Kind::WPrime) return false;
  if (c0 != 0.0) return false;
  for (double c : cos_k) if (c != 0.0) return false;
  for (double s : sin_k) if (s != 0.0) return false;
  return true;
}

int Potential::max_harmonic() const {
  if (kind != Kind::FourierT) return 0;
  return static_cast<int>(std::max(cos_k.size(), sin_k.size()));
}

double Potential::value(const geometry::LaurentContour& spec, double beta,
                        double t) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::FourierT: {
      double acc = c0;
      for (size_t k = 0; k < cos_k.size(); ++k)
        acc += cos_k[k] * std::cos((k + 1) * t);
      for (size_t k = 0; k < sin_k.size(); ++k)
        acc += sin_k[k] * std::sin((k + 1) * t);
      return acc;
    }
    case Kind::WPrime:
      // log |w'_ext(z)| = -log |z'(w)| on the contour.
      return -(1.0 - beta) * std::log(spec.speed(t));
  }
  return 0.0;
}

double Potential::dt(const geometry::LaurentContour& spec, double beta,
                     double t) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::FourierT: {
      double acc = 0.0;
      for (size_t k = 0; k < cos_k.size(); ++k)
        acc -= cos_k[k] * (k + 1) * std::sin((k + 1) * t);
      for (size_t k = 0; k < sin_k.size(); ++k)
        acc += sin_k[k] * (k + 1) * std::cos((k + 1) * t);
      return acc;
    }
    case Kind::WPrime: {
      // d/dt of -(1-beta) Re log z'(e^{it}) = -(1-beta) Re(i w z''/z').
      const cplx w = std::polar(1.0, t);
      const cplx q = cplx(0.0, 1.0) * w * spec.d2map(w) / spec.dmap(w);
      return -(1.0 - beta) * q.real();
    }
  }
  return 0.0;
}

cplx Potential::dz(const geometry::LaurentContour& spec, double beta,
                   double t) const {
  const cplx w = std::polar(1.0, t);
  const cplx wprime = 1.0 / spec.dmap(w);  // dw/dz on the contour
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::FourierT: {
      // W = Re F(z) with F = c0 + sum (c_k - i s_k) w^k; dW = F'/2.
      cplx acc = 0.0;
      const size_t K = std::max(cos_k.size(), sin_k.size());
      for (size_t k = 0; k < K; ++k) {
        const double c = k < cos_k.size() ? cos_k[k] : 0.0;
        const double s = k < sin_k.size() ? sin_k[k] : 0.0;
        acc += cplx(c, -s) * static_cast<double>(k + 1) *
               std::pow(w, static_cast<double>(k));
      }
      return 0.5 * acc * wprime;
    }
    case Kind::WPrime: {
      // W = Re F with F = -(1-beta) log z'(w(z)).
      const cplx q = spec.d2map(w) / spec.dmap(w);
      return -0.5 * (1.0 - beta) * q * wprime;
    }
  }
  return 0.0;
}

Field Potential::node_values(const geometry::ContourGrid& grid,
                             double beta) const {
  Field out(grid.M);
  for (int j = 0; j < grid.M; ++j) out[j] = value(grid.spec, beta, grid.t[j]);
  return out;
}

}  // namespace loggas
