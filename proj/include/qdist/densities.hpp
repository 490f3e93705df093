#pragma once

#include <optional>
#include <string>

#include "qdist/qseries.hpp"

namespace qdist {

// The four density families: f_h (continuous q-Hermite weight on [-1,1]),
// f_N (q-normal), f_Q (Al-Salam-Chihara weight on [-1,1]) and f_CN
// (conditional q-normal).
enum class Family { fh, fN, fQ, fCN };

std::string family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

struct Support {
  double lower = 0.0;
  double upper = 0.0;
  bool bounded() const;
};

struct TruncationPolicy {
  double product_tol = 1e-14;
  int max_factors = 2000;
  double series_tol = 1e-13;
  int max_terms = 500;
};

// Immutable, validated description of one distribution. The x-independent
// normalization constant is computed once at construction.
class DistributionSpec {
 public:
  static DistributionSpec q_hermite_weight(QParameter q, TruncationPolicy trunc = {});
  static DistributionSpec q_normal(QParameter q, TruncationPolicy trunc = {});
  static DistributionSpec al_salam_chihara_weight(double a, double b, QParameter q,
                                                  TruncationPolicy trunc = {});
  static DistributionSpec conditional_q_normal(double y, double rho, QParameter q,
                                               TruncationPolicy trunc = {});

  Family family() const { return family_; }
  QParameter q() const { return q_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double y() const { return y_; }
  double rho() const { return rho_; }
  const TruncationPolicy& truncation() const { return trunc_; }

  // "fQ(a=0.5,b=0.2,q=0.3)" and the like; stable across runs
  std::string label() const;

 private:
  DistributionSpec(Family family, QParameter q, double a, double b, double y, double rho,
                   TruncationPolicy trunc);

  Family family_;
  QParameter q_;
  double a_, b_, y_, rho_;
  TruncationPolicy trunc_;
  double norm_log_ = 0.0;  // log of the positive x-independent prefactor
  double norm_ = 1.0;      // exp(norm_log_); 0 when it underflows

  friend double density(const DistributionSpec& spec, double x);
};

// w_k(x|a,b,q), evaluated as w_0 at the shifted parameters (a q^k, b q^k),
// which the displayed formula equals identically.
double poly_w(int k, double x, double a, double b, QParameter q);

// W_k(x,y|rho,q) = W_0(x,y|rho q^k, q), same evaluation strategy.
double poly_W(int k, double x, double y, double rho, QParameter q);

Support support(const DistributionSpec& spec);

// Density value at x; exactly 0 outside the support. Throws
// NonConvergenceError if the infinite product cannot reach product_tol
// within max_factors.
double density(const DistributionSpec& spec, double x);

}  // namespace qdist
