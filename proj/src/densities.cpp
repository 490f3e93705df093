#include "qdist/densities.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace qdist {

namespace {

constexpr double kPi = 3.14159265358979323846;

double w0_form(double x, double a, double b) {
  return (1.0 + a * a) * (1.0 + b * b) - 2.0 * x * (a + b) * (1.0 + a * b) +
         4.0 * x * x * a * b;
}

double W0_form(double x, double y, double r, double one_minus_q) {
  const double r2 = r * r;
  return (1.0 - r2) * (1.0 - r2) - one_minus_q * r * (1.0 + r2) * x * y +
         one_minus_q * r2 * (x * x + y * y);
}

// Running product that spills into a log scale before it can overflow or
// underflow; all density factors are positive on the support.
struct ScaledProduct {
  double mantissa = 1.0;
  double log_scale = 0.0;

  void mul(double factor) {
    mantissa *= factor;
    const double mag = std::fabs(mantissa);
    if (mantissa != 0.0 && (mag > 1e150 || mag < 1e-150)) {
      log_scale += std::log(mag);
      mantissa = mantissa < 0.0 ? -1.0 : 1.0;
    }
  }
};

double gaussian(double x, double mean, double variance) {
  const double u = x - mean;
  return std::exp(-u * u / (2.0 * variance)) / std::sqrt(2.0 * kPi * variance);
}

[[noreturn]] void product_cap_hit(const DistributionSpec& spec) {
  throw NonConvergenceError("density " + spec.label() + ": product did not reach tol " +
                            std::to_string(spec.truncation().product_tol) + " within " +
                            std::to_string(spec.truncation().max_factors) + " factors");
}

// prod_{k>=1} of a family-specific factor, stopped once |factor - 1| stays
// below product_tol for two consecutive k.
template <typename FactorFn>
ScaledProduct tail_product(const DistributionSpec& spec, FactorFn&& factor_at) {
  const TruncationPolicy& tp = spec.truncation();
  ScaledProduct p;
  double qk = 1.0;
  int consecutive = 0;
  for (int k = 1; k <= tp.max_factors; ++k) {
    qk *= spec.q().value();
    const double factor = factor_at(qk);
    p.mul(factor);
    consecutive = (std::fabs(factor - 1.0) < tp.product_tol) ? consecutive + 1 : 0;
    if (consecutive >= 2) return p;
  }
  product_cap_hit(spec);
}

// Combine prefactor, the algebraic sqrt-type part (given as value and log)
// and the accumulated product.
double combine(double norm, double norm_log, double alg, double alg_log,
               const ScaledProduct& p) {
  if (norm > 1e-290 && p.log_scale == 0.0) return norm * alg * p.mantissa;
  return p.mantissa * std::exp(norm_log + alg_log + p.log_scale);
}

double density_fh(const DistributionSpec& spec, double x, double norm, double norm_log) {
  if (std::fabs(x) > 1.0) return 0.0;
  const double u = 1.0 - x * x;
  auto p = tail_product(spec, [&](double qk) {
    const double s = 1.0 + qk;
    return s * s - 4.0 * qk * x * x;
  });
  return combine(norm, norm_log, std::sqrt(u), 0.5 * std::log(u), p);
}

double density_fN(const DistributionSpec& spec, double x, double norm, double norm_log) {
  const double q = spec.q().value();
  if (spec.q().is_limit_case()) return gaussian(x, 0.0, 1.0);
  if (std::fabs(x) > 2.0 / std::sqrt(1.0 - q)) return 0.0;
  // k = 0 factor 4 - (1-q)x^2 merged with the 1/sqrt(4 - (1-q)x^2) prefactor
  const double u = 4.0 - (1.0 - q) * x * x;
  auto p = tail_product(spec, [&](double qk) {
    const double s = 1.0 + qk;
    return s * s - (1.0 - q) * x * x * qk;
  });
  return combine(norm, norm_log, std::sqrt(u), 0.5 * std::log(u), p);
}

double density_fQ(const DistributionSpec& spec, double x, double norm, double norm_log) {
  if (std::fabs(x) > 1.0) return 0.0;
  const double q = spec.q().value();
  const double u = 1.0 - x * x;
  const double w0 = w0_form(x, spec.a(), spec.b());
  double ak = spec.a(), bk = spec.b();
  auto p = tail_product(spec, [&](double qk) {
    ak *= q;
    bk *= q;
    const double s = 1.0 + qk;
    return (s * s - 4.0 * qk * x * x) / w0_form(x, ak, bk);
  });
  return combine(norm, norm_log, std::sqrt(u) / w0, 0.5 * std::log(u) - std::log(w0), p);
}

double density_fCN(const DistributionSpec& spec, double x, double norm, double norm_log) {
  const double q = spec.q().value();
  const double rho = spec.rho();
  if (spec.q().is_limit_case()) {
    return gaussian(x, rho * spec.y(), 1.0 - rho * rho);
  }
  const double base = density_fN(spec, x, norm, norm_log);
  if (base == 0.0) return 0.0;

  const TruncationPolicy& tp = spec.truncation();
  double prod = 1.0;
  double qk = 1.0;  // q^k from k = 0
  int consecutive = 0;
  for (int k = 0; k <= tp.max_factors; ++k) {
    const double factor =
        (1.0 - rho * rho * qk) / W0_form(x, spec.y(), rho * qk, 1.0 - q);
    prod *= factor;
    consecutive = (std::fabs(factor - 1.0) < tp.product_tol) ? consecutive + 1 : 0;
    if (consecutive >= 2) return base * prod;
    qk *= q;
  }
  product_cap_hit(spec);
}

}  // namespace

bool Support::bounded() const { return std::isfinite(lower) && std::isfinite(upper); }

std::string family_name(Family f) {
  switch (f) {
    case Family::fh: return "fh";
    case Family::fN: return "fN";
    case Family::fQ: return "fQ";
    case Family::fCN: return "fCN";
  }
  return "?";
}

std::optional<Family> family_from_name(const std::string& name) {
  if (name == "fh") return Family::fh;
  if (name == "fN") return Family::fN;
  if (name == "fQ") return Family::fQ;
  if (name == "fCN") return Family::fCN;
  return std::nullopt;
}

DistributionSpec::DistributionSpec(Family family, QParameter q, double a, double b, double y,
                                   double rho, TruncationPolicy trunc)
    : family_(family), q_(q), a_(a), b_(b), y_(y), rho_(rho), trunc_(trunc) {
  if (!(trunc_.product_tol > 0.0) || !(trunc_.series_tol > 0.0) || trunc_.max_factors <= 0 ||
      trunc_.max_terms <= 0) {
    throw std::invalid_argument("TruncationPolicy: tolerances and caps must be positive");
  }
  if (q_.is_limit_case()) {
    norm_log_ = 0.0;
    norm_ = 1.0;  // Gaussian branches carry their own constants
    return;
  }
  const double tol = trunc_.product_tol;
  const double log_qinf = log_q_pochhammer_infinite(q_.value(), q_, tol);
  switch (family_) {
    case Family::fh:
      norm_log_ = std::log(2.0 / kPi) + log_qinf;
      break;
    case Family::fN:
    case Family::fCN:
      norm_log_ = 0.5 * std::log(1.0 - q_.value()) + log_qinf - std::log(2.0 * kPi);
      break;
    case Family::fQ:
      norm_log_ = std::log(2.0 / kPi) + log_qinf +
                  log_q_pochhammer_infinite(a_ * b_, q_, tol);
      break;
  }
  norm_ = std::exp(norm_log_);
}

DistributionSpec DistributionSpec::q_hermite_weight(QParameter q, TruncationPolicy trunc) {
  if (q.is_limit_case()) throw std::invalid_argument("family fh requires |q| < 1");
  return DistributionSpec(Family::fh, q, 0, 0, 0, 0, trunc);
}

DistributionSpec DistributionSpec::q_normal(QParameter q, TruncationPolicy trunc) {
  return DistributionSpec(Family::fN, q, 0, 0, 0, 0, trunc);
}

DistributionSpec DistributionSpec::al_salam_chihara_weight(double a, double b, QParameter q,
                                                           TruncationPolicy trunc) {
  if (q.is_limit_case()) throw std::invalid_argument("family fQ requires |q| < 1");
  if (std::fabs(a) >= 1.0) throw std::invalid_argument("family fQ requires |a| < 1");
  if (std::fabs(b) >= 1.0) throw std::invalid_argument("family fQ requires |b| < 1");
  return DistributionSpec(Family::fQ, q, a, b, 0, 0, trunc);
}

DistributionSpec DistributionSpec::conditional_q_normal(double y, double rho, QParameter q,
                                                        TruncationPolicy trunc) {
  if (std::fabs(rho) >= 1.0) throw std::invalid_argument("family fCN requires |rho| < 1");
  if (!q.is_limit_case() && std::fabs(y) > 2.0 / std::sqrt(1.0 - q.value())) {
    throw std::invalid_argument("family fCN requires y inside the q-normal support");
  }
  return DistributionSpec(Family::fCN, q, 0, 0, y, rho, trunc);
}

std::string DistributionSpec::label() const {
  char buf[128];
  switch (family_) {
    case Family::fh:
      std::snprintf(buf, sizeof buf, "fh(q=%g)", q_.value());
      break;
    case Family::fN:
      std::snprintf(buf, sizeof buf, "fN(q=%g)", q_.value());
      break;
    case Family::fQ:
      std::snprintf(buf, sizeof buf, "fQ(a=%g,b=%g,q=%g)", a_, b_, q_.value());
      break;
    case Family::fCN:
      std::snprintf(buf, sizeof buf, "fCN(y=%g,rho=%g,q=%g)", y_, rho_, q_.value());
      break;
  }
  return buf;
}

double poly_w(int k, double x, double a, double b, QParameter q) {
  if (k < 0) throw std::invalid_argument("poly_w: k must be nonnegative");
  const double s = pow_int(q.value(), k);
  return w0_form(x, a * s, b * s);
}

double poly_W(int k, double x, double y, double rho, QParameter q) {
  if (k < 0) throw std::invalid_argument("poly_W: k must be nonnegative");
  return W0_form(x, y, rho * pow_int(q.value(), k), 1.0 - q.value());
}

Support support(const DistributionSpec& spec) {
  switch (spec.family()) {
    case Family::fh:
    case Family::fQ:
      return {-1.0, 1.0};
    case Family::fN:
    case Family::fCN:
      break;
  }
  if (spec.q().is_limit_case()) {
    const double inf = std::numeric_limits<double>::infinity();
    return {-inf, inf};
  }
  const double c = 2.0 / std::sqrt(1.0 - spec.q().value());
  return {-c, c};
}

double density(const DistributionSpec& spec, double x) {
  switch (spec.family()) {
    case Family::fh: return density_fh(spec, x, spec.norm_, spec.norm_log_);
    case Family::fN: return density_fN(spec, x, spec.norm_, spec.norm_log_);
    case Family::fQ: return density_fQ(spec, x, spec.norm_, spec.norm_log_);
    case Family::fCN: return density_fCN(spec, x, spec.norm_, spec.norm_log_);
  }
  throw std::logic_error("density: unknown family");
}

}  // namespace qdist
