#pragma once

#include <string>
#include <vector>

#include "innerclt/experiments.hpp"

namespace innerclt {

struct VerificationRow {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Identity suites over the configured Blaschke product: boundary
// unimodularity, Schwarz-Pick data, measure preservation, the martingale
// identities, the inner-product tables, transfer round-trips,
// the summation identity and the sigma_N quadrature cross-check.
std::vector<VerificationRow> run_verification(const ExperimentConfig& config);

bool all_pass(const std::vector<VerificationRow>& rows);

}  // namespace innerclt
