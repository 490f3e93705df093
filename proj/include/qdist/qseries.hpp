#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdist {

// Deformation parameter q in (-1, 1]. q = 1 is the classical limit: finite
// q-objects ([n]_q, [n]_q!, q-binomial, S_n, finite Pochhammer) evaluate
// there via their classical values, while infinite q-products reject it.
class QParameter {
 public:
  QParameter(double value);  // throws std::invalid_argument outside (-1, 1]

  double value() const { return value_; }
  bool is_limit_case() const { return value_ == 1.0; }

 private:
  double value_;
};

// Thrown when a series or infinite product cannot meet its tolerance
// within the configured caps.
class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct QPochhammerValue {
  double value = 1.0;
  std::size_t n_terms = 0;   // factors actually multiplied; equals n for (a;q)_n
  bool infinite_order = false;
  double truncation_error_bound = 0.0;  // relative bound on the omitted tail
};

// [n]_q = 1 + q + ... + q^(n-1); [0]_q = 0.
double q_integer(int n, QParameter q);

// [n]_q! = prod_{j=1..n} [j]_q; [0]_q! = 1.
double q_factorial(int n, QParameter q);

// q-binomial coefficient; 0 unless n >= k >= 0. Evaluated by the q-Pascal
// recurrence (additions and multiplications by powers of q only), so results
// are exact whenever q and the intermediate values are exactly representable.
double q_binomial(int n, int k, QParameter q);

// (a;q)_n = prod_{j=0..n-1} (1 - a q^j); (a;q)_0 = 1. Accepts q = 1,
// where (a;1)_n = (1-a)^n.
QPochhammerValue q_pochhammer(double a, QParameter q, int n);

// (a;q)_inf truncated so the geometric tail bound |a||q|^K / (1-|q|) < tol.
// Requires |q| < 1.
QPochhammerValue q_pochhammer_infinite(double a, QParameter q, double tol);

// log (a;q)_inf, summed factor-wise; requires |a| < 1 so every factor is
// positive. Usable where the product itself would underflow (q near 1).
double log_q_pochhammer_infinite(double a, QParameter q, double tol);

// S_n(a,b|q) = sum_i [n choose i]_q a^i b^(n-i); exactly symmetric in (a,b).
double s_polynomial(int n, double a, double b, QParameter q);

// base^e for integer e >= 0 by repeated multiplication (exact at
// representable bases such as 0.5; pow_int(0,0) = 1).
double pow_int(double base, int e);

// Exact binomial coefficient in 64-bit arithmetic; 0 outside 0 <= k <= n.
// Valid through n = 62.
long long binomial_exact(int n, int k);

}  // namespace qdist
