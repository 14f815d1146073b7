#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace loggas {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Values on grid nodes, indexed by the exterior angle t_j = 2*pi*j/M.
using Field = std::vector<double>;
using CField = std::vector<cplx>;

enum class ErrorCode {
  InvalidArgument,
  NonUnivalent,
  GridTooCoarse,
  NotExterior,
  NoConvergence,
  CenterOutside,
  IllConditioned,
  SolveFailure,
  ComplexSpectrum,
  SideMismatch,
  CoincidentPoints,
  DeformationBreaksUnivalence,
  ConfigError,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonUnivalent: return "NonUnivalent";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NotExterior: return "NotExterior";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::CenterOutside: return "CenterOutside";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::SolveFailure: return "SolveFailure";
    case ErrorCode::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorCode::SideMismatch: return "SideMismatch";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::DeformationBreaksUnivalence: return "DeformationBreaksUnivalence";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace loggas
