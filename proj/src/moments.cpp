#include "qdist/moments.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "qdist/orthopoly.hpp"

namespace qdist {

double factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial: n must be nonnegative");
  if (n >= 150) throw std::overflow_error("factorial: n >= 150 unsupported");
  double p = 1.0;
  for (int i = 2; i <= n; ++i) p *= i;
  return p;
}

double double_factorial(int n) {
  if (n < -1) throw std::invalid_argument("double_factorial: n must be >= -1");
  if (n >= 150) throw std::overflow_error("double_factorial: n >= 150 unsupported");
  double p = 1.0;
  for (int i = n; i >= 2; i -= 2) p *= i;
  return p;
}

double bessel_i(int order, double t, double term_tol) {
  if (order < 0) throw std::invalid_argument("bessel_i: order must be nonnegative");
  if (!(term_tol > 0.0)) throw std::invalid_argument("bessel_i: term_tol must be positive");
  double sign = 1.0;
  if (t < 0.0) {
    t = -t;
    if (order % 2 != 0) sign = -1.0;  // I_a(-t) = (-1)^a I_a(t)
  }
  if (t == 0.0) return order == 0 ? 1.0 : 0.0;

  const double u = 0.5 * t;
  const double u2 = u * u;
  double term = std::exp(order * std::log(u) - std::lgamma(order + 1.0));
  if (term == 0.0) return 0.0;  // leading term below the underflow floor
  double sum = term;
  for (int m = 0; m < 600; ++m) {
    term *= u2 / ((m + 1.0) * (m + 1.0 + order));
    sum += term;
    if (!std::isfinite(sum)) {
      throw std::overflow_error("bessel_i: overflow at order " + std::to_string(order) +
                                ", t = " + std::to_string(sign * t));
    }
    if (u2 / ((m + 2.0) * (m + 2.0 + order)) < 0.5 && term < term_tol * sum) {
      return sign * sum;
    }
  }
  throw NonConvergenceError("bessel_i: series did not converge for order " +
                            std::to_string(order) + ", t = " + std::to_string(sign * t));
}

namespace {

// sum_{k=0..j} (-1)^k q^{k(k+1)/2} (2k+1) binom(2j+1, j-k)
long double even_moment_sum(int j, double q) {
  long double sum = 0.0L;
  double tri = 1.0, qp = 1.0, sign = 1.0;
  for (int k = 0; k <= j; ++k) {
    sum += static_cast<long double>(sign * tri * (2 * k + 1)) *
           static_cast<long double>(binomial_exact(2 * j + 1, j - k));
    qp *= q;
    tri *= qp;
    sign = -sign;
  }
  return sum;
}

void require_moment_order(int n) {
  if (n < 0) throw std::invalid_argument("moment order must be nonnegative");
}

}  // namespace

double moment_fN(int n, QParameter q) {
  require_moment_order(n);
  if (n == 0) return 1.0;
  if (n % 2 != 0) return 0.0;
  const int j = n / 2;
  if (q.is_limit_case()) return double_factorial(n - 1);
  const long double s = even_moment_sum(j, q.value()) / (2 * j + 1);
  return static_cast<double>(s / powl(1.0L - static_cast<long double>(q.value()), j));
}

double moment_fh(int n, QParameter q) {
  require_moment_order(n);
  if (q.is_limit_case()) throw std::invalid_argument("moment_fh: requires |q| < 1");
  if (n == 0) return 1.0;
  if (n % 2 != 0) return 0.0;
  const int j = n / 2;
  const long double s = even_moment_sum(j, q.value()) / (2 * j + 1);
  return static_cast<double>(s / static_cast<long double>(pow_int(4.0, j)));
}

double moment_fQ(int n, double a, double b, QParameter q) {
  require_moment_order(n);
  if (q.is_limit_case()) throw std::invalid_argument("moment_fQ: requires |q| < 1");
  if (std::fabs(a) >= 1.0 || std::fabs(b) >= 1.0) {
    throw std::invalid_argument("moment_fQ: requires |a|, |b| < 1");
  }
  if (n == 0) return 1.0;
  const std::vector<double> c = CoefficientTable::global().c_row(n, q);
  long double sum = 0.0L;
  for (int j = 0; 2 * j <= n; ++j) {
    sum += static_cast<long double>(c[j]) *
           static_cast<long double>(s_polynomial(n - 2 * j, a, b, q));
  }
  return static_cast<double>(std::ldexp(static_cast<double>(sum), -n));
}

double moment_fCN(int n, double y, double rho, QParameter q) {
  require_moment_order(n);
  if (std::fabs(rho) >= 1.0) throw std::invalid_argument("moment_fCN: requires |rho| < 1");
  if (n == 0) return 1.0;
  long double sum = 0.0L;
  if (q.is_limit_case()) {
    for (int m = 0; 2 * m <= n; ++m) {
      double coeff = 1.0;
      for (int i = n - 2 * m + 1; i <= n; ++i) coeff *= i;  // n!/(n-2m)!
      for (int i = 1; i <= m; ++i) coeff /= 2.0 * i;        // / (2^m m!)
      sum += static_cast<long double>(coeff * pow_int(rho, n - 2 * m) *
                                      probabilists_hermite(n - 2 * m, y));
    }
    return static_cast<double>(sum);
  }
  const std::vector<double> c = CoefficientTable::global().c_row(n, q);
  const double omq = 1.0 - q.value();
  for (int m = 0; 2 * m <= n; ++m) {
    sum += static_cast<long double>(c[m] / pow_int(omq, m) * pow_int(rho, n - 2 * m) *
                                    rescaled_q_hermite(n - 2 * m, y, q));
  }
  return static_cast<double>(sum);
}

double moment(const DistributionSpec& spec, int n) {
  switch (spec.family()) {
    case Family::fh: return moment_fh(n, spec.q());
    case Family::fN: return moment_fN(n, spec.q());
    case Family::fQ: return moment_fQ(n, spec.a(), spec.b(), spec.q());
    case Family::fCN: return moment_fCN(n, spec.y(), spec.rho(), spec.q());
  }
  throw std::logic_error("moment: unknown family");
}

namespace {

// The alternating Bessel sums cancel catastrophically for large arguments:
// at z = 2t/sqrt(1-q) ~ 63 (q = 0.999) terms of size ~e^63 collapse to a
// result of order t e^{t^2/2}/sqrt(1-q). Above this threshold the inner sum
// runs in 113-bit arithmetic.
constexpr double kQuadPathThreshold = 25.0;

using quadf = __float128;

quadf abs_q(quadf x) { return x < 0 ? -x : x; }

// I_order(z) for z >= 0, ascending series in 113-bit arithmetic.
quadf bessel_i_quad(int order, quadf z) {
  if (z == 0) return order == 0 ? 1 : 0;
  const quadf u = z / 2;
  const quadf u2 = u * u;
  quadf term = 1;
  for (int i = 1; i <= order; ++i) term *= u / i;
  quadf sum = term;
  for (int m = 0; m < 4000; ++m) {
    term *= u2 / (quadf(m + 1) * quadf(m + 1 + order));
    sum += term;
    if (u2 / (quadf(m + 2) * quadf(m + 2 + order)) < quadf(0.5) &&
        term < quadf(1e-36) * sum) {
      break;
    }
  }
  return sum;
}

double bessel_kernel_sum_quad(int k, double z_in, QParameter q, const BesselSeriesConfig& cfg,
                              int& inner_used, bool& converged) {
  quadf z = z_in;
  double overall_sign = 1.0;
  if (z < 0) {
    z = -z;
    if ((k + 1) % 2 != 0) overall_sign = -1.0;  // I_{k+2j+1}(-z) = (-1)^{k+1} I_{k+2j+1}(z)
  }
  const quadf qv = q.value();
  quadf qb = 1;        // [k+j choose j]_q
  quadf qint_low = 0;  // [j]_q
  quadf qint_high = 0;  // [k+j]_q, seeded at [k]_q in full precision
  for (int i = 0; i < k; ++i) qint_high = qint_high * qv + 1;
  quadf tri = 1, qpj = 1, sign = 1;
  quadf sum = 0, peak = 1;
  // Achievable absolute accuracy is ~1e-34 * peak partial magnitude; there
  // is no point summing terms far below that level.
  const quadf floor_rel = quadf(1e-16) * quadf(1e-16);
  int consecutive = 0;
  for (int j = 0; j <= cfg.max_inner; ++j) {
    const quadf term =
        sign * qb * quadf(k + 2 * j + 1) * tri * bessel_i_quad(k + 2 * j + 1, z);
    sum += term;
    if (abs_q(sum) > peak) peak = abs_q(sum);
    if (abs_q(term) > peak) peak = abs_q(term);
    consecutive = (abs_q(term) <= quadf(100) * floor_rel * peak) ? consecutive + 1 : 0;
    if (consecutive >= 2) {
      inner_used = std::max(inner_used, j + 1);
      return overall_sign * static_cast<double>(sum);
    }
    qint_low = qint_low * qv + 1;
    qint_high = qint_high * qv + 1;
    qb *= qint_high / qint_low;
    qpj *= qv;
    tri *= qpj;
    sign = -sign;
  }
  inner_used = std::max(inner_used, cfg.max_inner + 1);
  converged = false;
  return overall_sign * static_cast<double>(sum);
}

// Inner series of the MGF expansions:
//   sum_{j>=0} (-1)^j [k+j choose j]_q (k+2j+1) q^{j(j+1)/2} I_{k+2j+1}(z).
// The q-binomial grouping keeps every intermediate bounded where the raw
// [k+j]_q!/[j]_q! ratio would overflow near q = 1.
double bessel_kernel_sum(int k, double z, QParameter q, const BesselSeriesConfig& cfg,
                         int& inner_used, bool& converged) {
  if (std::fabs(z) > kQuadPathThreshold) {
    return bessel_kernel_sum_quad(k, z, q, cfg, inner_used, converged);
  }
  const double qv = q.value();
  double qb = 1.0;                        // [k+j choose j]_q
  double qint_low = 0.0;                  // [j]_q
  double qint_high = q_integer(k, q);     // [k+j]_q
  double tri = 1.0, qpj = 1.0, sign = 1.0;
  double sum = 0.0;
  int consecutive = 0;
  for (int j = 0; j <= cfg.max_inner; ++j) {
    const double term =
        sign * qb * (k + 2 * j + 1) * tri * bessel_i(k + 2 * j + 1, z, cfg.term_tol);
    sum += term;
    if (!std::isfinite(sum)) {
      converged = false;
      return sum;
    }
    consecutive =
        (std::fabs(term) <= cfg.term_tol * std::max(1.0, std::fabs(sum))) ? consecutive + 1 : 0;
    if (consecutive >= 2) {
      inner_used = std::max(inner_used, j + 1);
      return sum;
    }
    qint_low = qint_low * qv + 1.0;    // [j+1]_q
    qint_high = qint_high * qv + 1.0;  // [k+j+1]_q
    qb *= qint_high / qint_low;
    qpj *= qv;   // q^{j+1}
    tri *= qpj;  // q^{(j+1)(j+2)/2}
    sign = -sign;
  }
  inner_used = std::max(inner_used, cfg.max_inner + 1);
  converged = false;
  return sum;
}

template <typename WeightFn>
MgfResult mgf_series(double prefactor, double z, QParameter q, const BesselSeriesConfig& cfg,
                     WeightFn&& weight) {
  MgfResult r;
  double sum = 0.0;
  int consecutive = 0;
  int k = 0;
  for (; k <= cfg.max_outer; ++k) {
    const double wk = weight(k);
    double term = 0.0;
    if (wk != 0.0) {
      bool inner_ok = true;
      term = wk * bessel_kernel_sum(k, z, q, cfg, r.inner_terms, inner_ok);
      if (!inner_ok) r.converged = false;
    }
    sum += term;
    consecutive =
        (std::fabs(term) <= cfg.term_tol * std::max(1.0, std::fabs(sum))) ? consecutive + 1 : 0;
    if (consecutive >= 3) {
      ++k;
      break;
    }
  }
  if (k > cfg.max_outer) {
    r.converged = false;
    k = cfg.max_outer + 1;
  }
  r.outer_terms = k;
  r.value = prefactor * sum;
  if (!std::isfinite(r.value)) r.converged = false;
  return r;
}

// Taylor sum over the first few moments; used for 0 < |t| <= 1e-8 where the
// Bessel series' 1/t prefactor is numerically delicate.
template <typename MomentFn>
MgfResult mgf_taylor(double t, MomentFn&& mu) {
  double sum = 0.0, tn = 1.0;
  for (int n = 0; n <= 8; ++n) {
    sum += tn * mu(n) / factorial(n);
    tn *= t;
  }
  return {sum, 0, 0, true};
}

constexpr double kTinyT = 1e-8;

void require_strict_q_mgf(QParameter q, const char* who) {
  if (q.is_limit_case()) throw std::invalid_argument(std::string(who) + ": requires |q| < 1");
}

void require_valid(const BesselSeriesConfig& cfg) {
  if (!(cfg.term_tol > 0.0) || cfg.max_outer <= 0 || cfg.max_inner <= 0) {
    throw std::invalid_argument("BesselSeriesConfig: tolerance and caps must be positive");
  }
}

}  // namespace

MgfResult mgf_fN(double t, QParameter q, const BesselSeriesConfig& cfg) {
  require_strict_q_mgf(q, "mgf_fN");
  require_valid(cfg);
  if (t == 0.0) return {1.0, 0, 0, true};
  if (std::fabs(t) <= kTinyT) return mgf_taylor(t, [&](int n) { return moment_fN(n, q); });
  const double s = std::sqrt(1.0 - q.value());
  return mgf_series(s / t, 2.0 * t / s, q, cfg, [](int k) { return k == 0 ? 1.0 : 0.0; });
}

MgfResult mgf_fh(double t, QParameter q, const BesselSeriesConfig& cfg) {
  require_strict_q_mgf(q, "mgf_fh");
  require_valid(cfg);
  if (t == 0.0) return {1.0, 0, 0, true};
  if (std::fabs(t) <= kTinyT) return mgf_taylor(t, [&](int n) { return moment_fh(n, q); });
  return mgf_series(2.0 / t, t, q, cfg, [](int k) { return k == 0 ? 1.0 : 0.0; });
}

MgfResult mgf_fQ(double t, double a, double b, QParameter q, const BesselSeriesConfig& cfg) {
  require_strict_q_mgf(q, "mgf_fQ");
  require_valid(cfg);
  if (std::fabs(a) >= 1.0 || std::fabs(b) >= 1.0) {
    throw std::invalid_argument("mgf_fQ: requires |a|, |b| < 1");
  }
  if (t == 0.0) return {1.0, 0, 0, true};
  if (std::fabs(t) <= kTinyT) {
    return mgf_taylor(t, [&](int n) { return moment_fQ(n, a, b, q); });
  }
  return mgf_series(2.0 / t, t, q, cfg,
                    [&](int k) { return k == 0 ? 1.0 : s_polynomial(k, a, b, q); });
}

MgfResult mgf_fCN(double t, double y, double rho, QParameter q, const BesselSeriesConfig& cfg) {
  require_strict_q_mgf(q, "mgf_fCN");
  require_valid(cfg);
  if (std::fabs(rho) >= 1.0) throw std::invalid_argument("mgf_fCN: requires |rho| < 1");
  if (t == 0.0) return {1.0, 0, 0, true};
  if (std::fabs(t) <= kTinyT) {
    return mgf_taylor(t, [&](int n) { return moment_fCN(n, y, rho, q); });
  }
  const double s = std::sqrt(1.0 - q.value());
  return mgf_series(s / t, 2.0 * t / s, q, cfg, [&](int k) {
    if (k == 0) return 1.0;
    return std::pow(1.0 - q.value(), 0.5 * k) * pow_int(rho, k) *
           rescaled_q_hermite(k, y, q);
  });
}

MgfResult mgf(const DistributionSpec& spec, double t, const BesselSeriesConfig& cfg) {
  switch (spec.family()) {
    case Family::fh: return mgf_fh(t, spec.q(), cfg);
    case Family::fN: return mgf_fN(t, spec.q(), cfg);
    case Family::fQ: return mgf_fQ(t, spec.a(), spec.b(), spec.q(), cfg);
    case Family::fCN: return mgf_fCN(t, spec.y(), spec.rho(), spec.q(), cfg);
  }
  throw std::logic_error("mgf: unknown family");
}

MomentTable::MomentTable(const DistributionSpec& spec, int max_order)
    : spec_(spec), max_order_(max_order) {
  if (max_order < 0) throw std::invalid_argument("MomentTable: max_order must be nonnegative");
  values_.reserve(static_cast<std::size_t>(max_order) + 1);
  for (int n = 0; n <= max_order; ++n) values_.push_back(moment(spec, n));
}

double MomentTable::hankel_min_eigenvalue() const {
  const int h = max_order_ / 2 + 1;
  Eigen::MatrixXd m(h, h);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < h; ++j) m(i, j) = values_[static_cast<std::size_t>(i) + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

namespace {

void require_increasing_below_one(std::span<const double> qs) {
  if (qs.empty()) throw std::invalid_argument("limit check: empty q sequence");
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (!(qs[i] < 1.0)) throw std::invalid_argument("limit check: every q must be < 1");
    if (i > 0 && !(qs[i] > qs[i - 1])) {
      throw std::invalid_argument("limit check: q sequence must increase");
    }
  }
}

bool strictly_decreasing(const std::vector<double>& e) {
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (!(e[i] < e[i - 1] || (e[i] <= 1e-15 && e[i - 1] <= 1e-15))) return false;
  }
  return true;
}

}  // namespace

LimitTrendReport gaussian_limit_check(double t, std::span<const double> qs) {
  require_increasing_below_one(qs);
  LimitTrendReport r;
  r.target = std::exp(0.5 * t * t);
  for (double qv : qs) {
    r.qs.push_back(qv);
    const double value = (t == 0.0) ? 1.0 : mgf_fN(t, qv).value;
    r.errors.push_back(std::fabs(value - r.target));
  }
  r.strictly_decreasing = strictly_decreasing(r.errors);
  return r;
}

LimitTrendReport conditional_gaussian_limit_check(double t, double y, double rho,
                                                  std::span<const double> qs) {
  require_increasing_below_one(qs);
  LimitTrendReport r;
  r.target = std::exp(t * rho * y + 0.5 * (1.0 - rho * rho) * t * t);
  for (double qv : qs) {
    r.qs.push_back(qv);
    const double value = (t == 0.0) ? 1.0 : mgf_fCN(t, y, rho, qv).value;
    r.errors.push_back(std::fabs(value - r.target));
  }
  r.strictly_decreasing = strictly_decreasing(r.errors);
  return r;
}

LimitTrendReport hermite_coefficient_limit_check(int m, int n, std::span<const double> qs) {
  require_increasing_below_one(qs);
  LimitTrendReport r;
  double target = 1.0;
  for (int i = n - 2 * m + 1; i <= n; ++i) target *= i;
  for (int i = 1; i <= m; ++i) target /= 2.0 * i;
  r.target = target;
  for (double qv : qs) {
    r.qs.push_back(qv);
    const double value = c_coefficient(m, n, qv) / pow_int(1.0 - qv, m);
    r.errors.push_back(std::fabs(value - r.target));
  }
  r.strictly_decreasing = strictly_decreasing(r.errors);
  return r;
}

}  // namespace qdist
