#include "qdist/orthopoly.hpp"

#include <bit>
#include <cmath>
#include <mutex>

namespace qdist {

namespace {

void require_nonnegative_degree(int n, const char* who) {
  if (n < 0) throw std::invalid_argument(std::string(who) + ": degree must be nonnegative");
}

void require_strict_q(QParameter q, const char* who) {
  if (q.is_limit_case()) throw std::invalid_argument(std::string(who) + ": requires |q| < 1");
}

}  // namespace

double chebyshev_u(int n, double x) {
  require_nonnegative_degree(n, "chebyshev_u");
  double prev = 0.0, cur = 1.0;
  for (int i = 0; i < n; ++i) {
    double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double probabilists_hermite(int n, double x) {
  require_nonnegative_degree(n, "probabilists_hermite");
  double prev = 0.0, cur = 1.0;
  for (int i = 0; i < n; ++i) {
    double next = x * cur - i * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double continuous_q_hermite(int n, double x, QParameter q) {
  require_nonnegative_degree(n, "continuous_q_hermite");
  require_strict_q(q, "continuous_q_hermite");
  double prev = 0.0, cur = 1.0;
  double qp = 1.0;  // q^i
  for (int i = 0; i < n; ++i) {
    double next = 2.0 * x * cur - (1.0 - qp) * prev;
    prev = cur;
    cur = next;
    qp *= q.value();
  }
  return cur;
}

double rescaled_q_hermite(int n, double x, QParameter q) {
  require_nonnegative_degree(n, "rescaled_q_hermite");
  double prev = 0.0, cur = 1.0;
  double qint = 0.0;  // [i]_q
  for (int i = 0; i < n; ++i) {
    double next = x * cur - qint * prev;
    prev = cur;
    cur = next;
    qint = qint * q.value() + 1.0;
  }
  return cur;
}

double al_salam_chihara(int n, double x, double a, double b, QParameter q) {
  require_nonnegative_degree(n, "al_salam_chihara");
  require_strict_q(q, "al_salam_chihara");
  if (std::fabs(a) >= 1.0) throw std::invalid_argument("al_salam_chihara: requires |a| < 1");
  if (std::fabs(b) >= 1.0) throw std::invalid_argument("al_salam_chihara: requires |b| < 1");
  double prev = 0.0, cur = 1.0;
  double qp = 1.0, qpm = 0.0;  // q^i and q^{i-1}; the i = 0 term multiplies P_{-1} = 0
  for (int i = 0; i < n; ++i) {
    double coef = (i == 0) ? 0.0 : (1.0 - qp) * (1.0 - a * b * qpm);
    double next = (2.0 * x - (a + b) * qp) * cur - coef * prev;
    prev = cur;
    cur = next;
    qpm = qp;
    qp *= q.value();
  }
  return cur;
}

double conditional_al_salam_chihara(int n, double x, double y, double rho, QParameter q) {
  require_nonnegative_degree(n, "conditional_al_salam_chihara");
  if (std::fabs(rho) >= 1.0) {
    throw std::invalid_argument("conditional_al_salam_chihara: requires |rho| < 1");
  }
  if (!q.is_limit_case() && std::fabs(y) > 2.0 / std::sqrt(1.0 - q.value())) {
    throw std::invalid_argument("conditional_al_salam_chihara: y outside the q-normal support");
  }
  double prev = 0.0, cur = 1.0;
  double qp = 1.0, qpm = 0.0;
  double qint = 0.0;  // [i]_q
  for (int i = 0; i < n; ++i) {
    double coef = (i == 0) ? 0.0 : (1.0 - rho * rho * qpm) * qint;
    double next = (x - rho * y * qp) * cur - coef * prev;
    prev = cur;
    cur = next;
    qpm = qp;
    qp *= q.value();
    qint = qint * q.value() + 1.0;
  }
  return cur;
}

namespace {

// Row c_{0..floor(n/2), n}(q) by the recurrence
//   c_{m,n+1} = c_{m,n} + (1 - q^{n-2m+2}) c_{m-1,n},   c_{0,n} = 1,
// obtained by multiplying the h-basis expansion of 2^n x^n with 2x and
// applying the three-term recurrence. Every contribution is positive for
// |q| < 1, so this route is free of the cancellation that makes the
// alternating-sum form lose digits near q = 1. The alternating sum remains
// as an independent test oracle.
template <typename Real>
std::vector<Real> c_row_impl(int n, Real q) {
  std::vector<Real> qpow(static_cast<std::size_t>(n) + 1, Real(1));
  for (int j = 1; j <= n; ++j) qpow[j] = qpow[j - 1] * q;
  std::vector<Real> row = {Real(1)};  // n' = 1
  for (int np = 1; np < n; ++np) {
    std::vector<Real> next(static_cast<std::size_t>((np + 1) / 2) + 1);
    next[0] = Real(1);
    for (int m = 1; 2 * m <= np + 1; ++m) {
      const Real same = (2 * m <= np) ? row[m] : Real(0);
      next[m] = same + (Real(1) - qpow[np - 2 * m + 2]) * row[m - 1];
    }
    row = std::move(next);
  }
  return row;
}

}  // namespace

double c_coefficient(int m, int n, QParameter q) {
  if (n < 1 || m < 0 || 2 * m > n) {
    throw std::out_of_range("c_coefficient: need n >= 1 and 0 <= m <= floor(n/2)");
  }
  return c_row_impl(n, q.value())[m];
}

namespace {

// extended-precision basis evaluation: the reconstruction sums cancel
// heavily for high degree near q = 1
long double basis_poly_l(ExpansionCoefficients::Basis basis, int n, long double x,
                         long double q) {
  long double prev = 0.0L, cur = 1.0L;
  long double qp = 1.0L, qint = 0.0L;
  if (basis == ExpansionCoefficients::Basis::chebyshev_half) x /= 2.0L;
  for (int i = 0; i < n; ++i) {
    long double next = 0.0L;
    switch (basis) {
      case ExpansionCoefficients::Basis::chebyshev:
      case ExpansionCoefficients::Basis::chebyshev_half:
        next = 2.0L * x * cur - prev;
        break;
      case ExpansionCoefficients::Basis::q_hermite_rescaled:
        next = x * cur - qint * prev;
        break;
      case ExpansionCoefficients::Basis::q_hermite_continuous:
        next = 2.0L * x * cur - (1.0L - qp) * prev;
        break;
    }
    prev = cur;
    cur = next;
    qp *= q;
    qint = qint * q + 1.0L;
  }
  return cur;
}

}  // namespace

double ExpansionCoefficients::basis_sum(double x) const {
  long double sum = 0.0L;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    long double coeff = terms[i].second;
    if (i < tails.size()) coeff += static_cast<long double>(tails[i]);
    sum += coeff * basis_poly_l(basis, terms[i].first, x, q);
  }
  return static_cast<double>(sum);
}

ExpansionCoefficients expand_power_in_chebyshev(int n, ChebyshevVariant variant) {
  require_nonnegative_degree(n, "expand_power_in_chebyshev");
  ExpansionCoefficients out;
  out.degree = n;
  out.basis = (variant == ChebyshevVariant::scaled) ? ExpansionCoefficients::Basis::chebyshev
                                                    : ExpansionCoefficients::Basis::chebyshev_half;
  for (int k = 0; 2 * k <= n; ++k) {
    double coeff = static_cast<double>(binomial_exact(n, k) - binomial_exact(n, k - 1));
    out.terms.emplace_back(n - 2 * k, coeff);
  }
  return out;
}

ExpansionCoefficients expand_chebyshev_in_q_hermite(int n, QParameter q, QHermiteBasis basis) {
  require_nonnegative_degree(n, "expand_chebyshev_in_q_hermite");
  require_strict_q(q, "expand_chebyshev_in_q_hermite");
  ExpansionCoefficients out;
  out.degree = n;
  out.q = q.value();
  out.basis = (basis == QHermiteBasis::rescaled)
                  ? ExpansionCoefficients::Basis::q_hermite_rescaled
                  : ExpansionCoefficients::Basis::q_hermite_continuous;
  double tri = 1.0, qp = 1.0, sign = 1.0;
  for (int j = 0; 2 * j <= n; ++j) {
    double coeff = sign * tri * q_binomial(n - j, j, q);
    if (basis == QHermiteBasis::rescaled) {
      coeff *= std::pow(1.0 - q.value(), 0.5 * n - j);
    }
    out.terms.emplace_back(n - 2 * j, coeff);
    qp *= q.value();
    tri *= qp;
    sign = -sign;
  }
  return out;
}

ExpansionCoefficients expand_power_in_q_hermite(int n, QParameter q, QHermiteBasis basis) {
  require_nonnegative_degree(n, "expand_power_in_q_hermite");
  if (basis == QHermiteBasis::continuous) {
    require_strict_q(q, "expand_power_in_q_hermite (h basis)");
  }
  ExpansionCoefficients out;
  out.degree = n;
  out.q = q.value();
  out.basis = (basis == QHermiteBasis::rescaled)
                  ? ExpansionCoefficients::Basis::q_hermite_rescaled
                  : ExpansionCoefficients::Basis::q_hermite_continuous;
  if (n == 0) {
    out.terms.emplace_back(0, 1.0);
    return out;
  }
  auto push = [&out](int deg, long double coeff) {
    const double head = static_cast<double>(coeff);
    out.terms.emplace_back(deg, head);
    out.tails.push_back(static_cast<double>(coeff - static_cast<long double>(head)));
  };
  if (basis == QHermiteBasis::rescaled && q.is_limit_case()) {
    // classical x^n = sum_m n!/(2^m m! (n-2m)!) He_{n-2m}(x)
    for (int m = 0; 2 * m <= n; ++m) {
      long double coeff = 1.0L;
      for (int i = n - 2 * m + 1; i <= n; ++i) coeff *= i;  // n!/(n-2m)!
      for (int i = 1; i <= m; ++i) coeff /= 2.0L * i;       // / (2^m m!)
      push(n - 2 * m, coeff);
    }
    return out;
  }
  const std::vector<long double> row = c_row_impl(n, static_cast<long double>(q.value()));
  const long double omq = 1.0L - static_cast<long double>(q.value());
  for (int m = 0; 2 * m <= n; ++m) {
    long double coeff;
    if (basis == QHermiteBasis::rescaled) {
      long double scale = 1.0L;
      for (int i = 0; i < m; ++i) scale *= omq;
      coeff = row[m] / scale;
    } else {
      coeff = std::ldexp(row[m], -n);
    }
    push(n - 2 * m, coeff);
  }
  return out;
}

CoefficientTable& CoefficientTable::global() {
  static CoefficientTable table;
  return table;
}

std::vector<double> CoefficientTable::c_row(int n, QParameter q) {
  if (n == 0) return {1.0};
  const auto key = std::make_pair(n, std::bit_cast<std::uint64_t>(q.value()));
  {
    std::shared_lock lock(mutex_);
    auto it = rows_.find(key);
    if (it != rows_.end()) return it->second;
  }
  std::vector<double> row = c_row_impl(n, q.value());
  {
    std::unique_lock lock(mutex_);
    return rows_.try_emplace(key, std::move(row)).first->second;
  }
}

}  // namespace qdist
