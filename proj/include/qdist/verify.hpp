#pragma once

#include <string>
#include <vector>

#include "qdist/densities.hpp"

namespace qdist::verify {

struct CheckResult {
  std::string suite;
  std::string name;
  double observed = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

// The parameter grid every quadrature-backed suite runs over (>= 20 specs).
std::vector<DistributionSpec> standard_grid();

// Individual check groups. tol_scale multiplies every pass threshold and the
// matching oracle tolerances uniformly.
std::vector<CheckResult> normalization_checks(double tol_scale = 1.0);
std::vector<CheckResult> orthogonality_checks(double tol_scale = 1.0);
std::vector<CheckResult> transfer_checks(double tol_scale = 1.0);
std::vector<CheckResult> catalan_moment_checks(double tol_scale = 1.0);
std::vector<CheckResult> low_moment_checks(double tol_scale = 1.0);
std::vector<CheckResult> gaussian_moment_checks(double tol_scale = 1.0);
std::vector<CheckResult> moment_oracle_checks(double tol_scale = 1.0);
std::vector<CheckResult> hankel_checks(double tol_scale = 1.0);
std::vector<CheckResult> mgf_oracle_checks(double tol_scale = 1.0);
std::vector<CheckResult> mgf_moment_sum_checks(double tol_scale = 1.0);
std::vector<CheckResult> limit_checks(double tol_scale = 1.0);
std::vector<CheckResult> expansion_checks(double tol_scale = 1.0);
std::vector<CheckResult> shift_identity_checks(double tol_scale = 1.0);

// CLI suites: normalization, orthogonality, transfer, moments, mgf, limits.
const std::vector<std::string>& suite_names();

// Runs one named suite (or "all" for their union). Throws
// std::invalid_argument for an unknown name.
std::vector<CheckResult> run_suite(const std::string& suite, double tol_scale = 1.0);

}  // namespace qdist::verify
