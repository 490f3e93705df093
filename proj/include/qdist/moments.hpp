#pragma once

#include <span>
#include <vector>

#include "qdist/densities.hpp"

namespace qdist {

double factorial(int n);         // floating-point n!; rejects n >= 150
double double_factorial(int n);  // n!! with (-1)!! = 0!! = 1; same guard

// Modified Bessel function of the first kind, integer order, by ascending
// power series. Intended range |t| <= 60, order <= 300; throws
// std::overflow_error if the series overflows.
double bessel_i(int order, double t, double term_tol = 1e-15);

// Closed-form moments. Odd moments of f_h and f_N vanish; f_N at q = 1
// dispatches to (n-1)!!, f_CN at q = 1 to the classical Hermite sum.
double moment_fN(int n, QParameter q);
double moment_fh(int n, QParameter q);
double moment_fQ(int n, double a, double b, QParameter q);
double moment_fCN(int n, double y, double rho, QParameter q);
double moment(const DistributionSpec& spec, int n);

struct BesselSeriesConfig {
  double term_tol = 1e-15;
  int max_outer = 120;
  int max_inner = 80;
};

struct MgfResult {
  double value = 1.0;
  int outer_terms = 0;
  int inner_terms = 0;  // deepest inner sum reached
  bool converged = true;
};

// Bessel-series moment generating functions. The 1/t singularity is
// removable: t = 0 returns exactly 1 and 0 < |t| <= 1e-8 uses a short
// moment-based Taylor sum instead of the series.
MgfResult mgf_fN(double t, QParameter q, const BesselSeriesConfig& cfg = {});
MgfResult mgf_fh(double t, QParameter q, const BesselSeriesConfig& cfg = {});
MgfResult mgf_fQ(double t, double a, double b, QParameter q,
                 const BesselSeriesConfig& cfg = {});
MgfResult mgf_fCN(double t, double y, double rho, QParameter q,
                  const BesselSeriesConfig& cfg = {});
MgfResult mgf(const DistributionSpec& spec, double t, const BesselSeriesConfig& cfg = {});

class MomentTable {
 public:
  MomentTable(const DistributionSpec& spec, int max_order);

  const DistributionSpec& spec() const { return spec_; }
  int max_order() const { return max_order_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](int n) const { return values_.at(n); }

  // Smallest eigenvalue of the Hankel matrix [mu_{i+j}], i, j <= max_order/2;
  // nonnegative (up to roundoff) for moments of a genuine measure.
  double hankel_min_eigenvalue() const;

 private:
  DistributionSpec spec_;
  int max_order_;
  std::vector<double> values_;
};

struct LimitTrendReport {
  double target = 0.0;
  std::vector<double> qs;
  std::vector<double> errors;  // |value(q_i) - target|
  bool strictly_decreasing = false;
};

// |mgf_fN(t, q_i) - exp(t^2/2)| along an increasing q sequence.
LimitTrendReport gaussian_limit_check(double t, std::span<const double> qs);

// fCN analogue against exp(t rho y + (1 - rho^2) t^2 / 2).
LimitTrendReport conditional_gaussian_limit_check(double t, double y, double rho,
                                                  std::span<const double> qs);

// c_{m,n}(q)/(1-q)^m against the classical coefficient n!/(2^m m! (n-2m)!).
LimitTrendReport hermite_coefficient_limit_check(int m, int n, std::span<const double> qs);

}  // namespace qdist
