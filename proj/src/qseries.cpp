#include "qdist/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace qdist {

QParameter::QParameter(double value) : value_(value) {
  if (!(value > -1.0 && value <= 1.0)) {
    throw std::invalid_argument("q must lie in (-1, 1], got " + std::to_string(value));
  }
}

double pow_int(double base, int e) {
  if (e < 0) throw std::invalid_argument("pow_int: negative exponent");
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

long long binomial_exact(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (n > 62) throw std::overflow_error("binomial_exact: n > 62");
  k = std::min(k, n - k);
  long long r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;  // divisible at every step
  }
  return r;
}

double q_integer(int n, QParameter q) {
  if (n < 0) throw std::invalid_argument("q_integer: n must be nonnegative");
  double sum = 0.0, p = 1.0;
  for (int j = 0; j < n; ++j) {
    sum += p;
    p *= q.value();
  }
  return sum;
}

double q_factorial(int n, QParameter q) {
  if (n < 0) throw std::invalid_argument("q_factorial: n must be nonnegative");
  double prod = 1.0;
  double qint = 0.0;  // [j]_q, built as [j+1]_q = q [j]_q + 1
  for (int j = 1; j <= n; ++j) {
    qint = qint * q.value() + 1.0;
    prod *= qint;
  }
  return prod;
}

double q_binomial(int n, int k, QParameter q) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  if (k == 0) return 1.0;
  std::vector<double> qpow(static_cast<std::size_t>(k) + 1, 1.0);
  for (int j = 1; j <= k; ++j) qpow[j] = qpow[j - 1] * q.value();
  // q-Pascal: C(n,k) = C(n-1,k-1) + q^k C(n-1,k)
  std::vector<double> row(static_cast<std::size_t>(k) + 1, 0.0);
  row[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    for (int j = std::min(i, k); j >= 1; --j) {
      row[j] = row[j - 1] + qpow[j] * row[j];
    }
  }
  return row[k];
}

QPochhammerValue q_pochhammer(double a, QParameter q, int n) {
  if (n < 0) throw std::invalid_argument("q_pochhammer: n must be nonnegative");
  double prod = 1.0;
  double aq = a;  // a q^j
  for (int j = 0; j < n; ++j) {
    prod *= (1.0 - aq);
    aq *= q.value();
  }
  return {prod, static_cast<std::size_t>(n), false, 0.0};
}

namespace {

// Number of factors needed so the tail bound |a||q|^K / (1-|q|) drops
// below tol: K = max(ceil(log(tol(1-|q|)/|a|)/log|q|), 1).
long infinite_factor_count(double a, double absq, double tol) {
  const double num = tol * (1.0 - absq) / std::fabs(a);
  if (num >= 1.0) return 1;
  return std::max(1L, static_cast<long>(std::ceil(std::log(num) / std::log(absq))));
}

void check_infinite_args(QParameter q, double tol) {
  if (q.is_limit_case()) {
    throw NonConvergenceError("(a;q)_inf does not converge at q = 1");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("q_pochhammer_infinite: tol must be positive");
}

}  // namespace

QPochhammerValue q_pochhammer_infinite(double a, QParameter q, double tol) {
  check_infinite_args(q, tol);
  if (a == 0.0) return {1.0, 0, true, 0.0};
  if (q.value() == 0.0) return {1.0 - a, 1, true, 0.0};

  const double absq = std::fabs(q.value());
  long k = infinite_factor_count(a, absq, tol);
  double prod = 1.0;
  double aq = a;
  for (long j = 0; j < k; ++j) {
    prod *= (1.0 - aq);
    aq *= q.value();
  }
  // First omitted factor must already be within tol of 1.
  while (std::fabs(aq) > tol * (1.0 - absq) && k < 1000000L) {
    prod *= (1.0 - aq);
    aq *= q.value();
    ++k;
  }
  const double bound = std::fabs(aq) / (1.0 - absq);
  if (bound > tol) {
    throw NonConvergenceError("(a;q)_inf: tail bound " + std::to_string(bound) +
                              " above tolerance after " + std::to_string(k) + " factors");
  }
  return {prod, static_cast<std::size_t>(k), true, bound};
}

double log_q_pochhammer_infinite(double a, QParameter q, double tol) {
  check_infinite_args(q, tol);
  if (a == 0.0) return 0.0;
  if (std::fabs(a) >= 1.0) {
    throw std::invalid_argument("log_q_pochhammer_infinite requires |a| < 1");
  }
  if (q.value() == 0.0) return std::log1p(-a);

  const double absq = std::fabs(q.value());
  const long k = infinite_factor_count(a, absq, tol);
  double sum = 0.0;
  double aq = a;
  for (long j = 0; j < k; ++j) {
    sum += std::log1p(-aq);
    aq *= q.value();
  }
  return sum;
}

double s_polynomial(int n, double a, double b, QParameter q) {
  if (n < 0) throw std::invalid_argument("s_polynomial: n must be nonnegative");
  // Canonical argument order makes S_n(a,b|q) == S_n(b,a|q) bit-exact.
  if (a < b) std::swap(a, b);
  std::vector<double> apow(static_cast<std::size_t>(n) + 1, 1.0);
  std::vector<double> bpow(static_cast<std::size_t>(n) + 1, 1.0);
  for (int i = 1; i <= n; ++i) {
    apow[i] = apow[i - 1] * a;
    bpow[i] = bpow[i - 1] * b;
  }
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    sum += q_binomial(n, i, q) * apow[i] * bpow[n - i];
  }
  return sum;
}

}  // namespace qdist
