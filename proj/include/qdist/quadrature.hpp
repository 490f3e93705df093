#pragma once

#include <functional>

#include "qdist/densities.hpp"
#include "qdist/orthopoly.hpp"

namespace qdist {

struct OracleReport {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
  bool converged = false;
};

// Globally adaptive Gauss-Kronrod 7-15: the worst panel (by the embedded
// G7/K15 error estimate) is bisected until the summed estimate drops below
// tol (absolute) or the panel cap is hit, in which case converged stays
// false. Rule order and caps are fixed constants.
OracleReport integrate(const std::function<double(double)>& f, double lower, double upper,
                       double tol);

// int x^n density dx over the support, via the x = c sin(theta) substitution
// that flattens the sqrt-type endpoint behaviour of the densities.
OracleReport moment_oracle(const DistributionSpec& spec, int n, double tol = 1e-10);

// int exp(t x) density dx.
OracleReport mgf_oracle(const DistributionSpec& spec, double t, double tol = 1e-10);

// int p_m p_n density dx for the given polynomial family, with the family
// parameters taken from the distribution.
OracleReport orthogonality_oracle(const DistributionSpec& spec, PolyTag family, int m, int n,
                                  double tol = 1e-9);

// int p_n density dx.
OracleReport transfer_oracle(const DistributionSpec& spec, PolyTag family, int n,
                             double tol = 1e-10);

}  // namespace qdist
