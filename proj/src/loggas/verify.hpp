#pragma once

// Aggregated invariant suite: geometry identities, operator identities,
// expansion consistency, the surgery residual, and variation spot checks.
// Failures are data, not exceptions.

#include <cstdint>

#include "loggas/common.hpp"
#include "loggas/geometry.hpp"
#include "loggas/potential.hpp"

namespace loggas::verify {

struct Check {
  std::string id;       // short tag of the violated identity
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string message;  // populated when a stage could not run
};

struct VerifyReport {
  std::vector<Check> checks;
  bool all_pass = true;
};

VerifyReport verify_suite(const geometry::LaurentContour& spec, int M,
                          double beta, const Potential& W,
                          std::uint64_t seed = 1);

}  // namespace loggas::verify
