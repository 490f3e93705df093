#include "qdist/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "qdist/moments.hpp"
#include "qdist/orthopoly.hpp"
#include "qdist/quadrature.hpp"

namespace qdist::verify {

namespace {

const std::vector<double> kGridQ = {-0.9, -0.5, 0.0, 0.3, 0.7, 0.95};
const std::vector<double> kLimitQ = {0.9, 0.99, 0.999};

double rel_dev(double value, double reference) {
  return std::fabs(value - reference) / std::max(1.0, std::fabs(reference));
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

PolyTag canonical_family(Family f) {
  switch (f) {
    case Family::fh: return PolyTag::continuous_q_hermite;
    case Family::fN: return PolyTag::rescaled_q_hermite;
    case Family::fQ: return PolyTag::al_salam_chihara;
    case Family::fCN: return PolyTag::conditional_al_salam_chihara;
  }
  throw std::logic_error("canonical_family");
}

// Diagonal orthogonality norms: [n]_q!, (q)_n, (q,ab)_n, (rho^2)_n [n]_q!.
double orthogonality_norm(const DistributionSpec& spec, int n) {
  switch (spec.family()) {
    case Family::fh: return q_pochhammer(spec.q().value(), spec.q(), n).value;
    case Family::fN: return q_factorial(n, spec.q());
    case Family::fQ:
      return q_pochhammer(spec.q().value(), spec.q(), n).value *
             q_pochhammer(spec.a() * spec.b(), spec.q(), n).value;
    case Family::fCN:
      return q_pochhammer(spec.rho() * spec.rho(), spec.q(), n).value *
             q_factorial(n, spec.q());
  }
  throw std::logic_error("orthogonality_norm");
}

const std::vector<DistributionSpec>& grid() {
  static const std::vector<DistributionSpec> specs = [] {
    std::vector<DistributionSpec> g;
    for (double q : kGridQ) g.push_back(DistributionSpec::q_hermite_weight(q));
    for (double q : kGridQ) g.push_back(DistributionSpec::q_normal(q));
    for (auto [a, b] : {std::pair{0.0, 0.0}, {0.5, 0.2}, {-0.6, 0.6}}) {
      for (double q : kGridQ) g.push_back(DistributionSpec::al_salam_chihara_weight(a, b, q));
    }
    for (double q : kGridQ) g.push_back(DistributionSpec::conditional_q_normal(0.0, 0.5, q));
    for (double q : kGridQ) g.push_back(DistributionSpec::conditional_q_normal(1.0, 0.3, q));
    for (double q : kGridQ) {
      // y placed at a fixed fraction of the support half-width
      const double y = -0.8 * 2.0 / std::sqrt(1.0 - q);
      g.push_back(DistributionSpec::conditional_q_normal(y, -0.7, q));
    }
    return g;
  }();
  return specs;
}

}  // namespace

std::vector<DistributionSpec> standard_grid() { return grid(); }

std::vector<CheckResult> normalization_checks(double tol_scale) {
  std::vector<CheckResult> out;
  for (const auto& spec : grid()) {
    OracleReport r = moment_oracle(spec, 0, std::max(1e-13, 1e-11 * tol_scale));
    const double dev = std::fabs(r.value - 1.0);
    out.push_back({"normalization", spec.label(), dev, 1e-9 * tol_scale,
                   r.converged && dev <= 1e-9 * tol_scale});
  }
  return out;
}

std::vector<CheckResult> orthogonality_checks(double tol_scale) {
  std::vector<CheckResult> out;
  const double threshold = 1e-7 * tol_scale;
  for (const auto& spec : grid()) {
    const PolyTag tag = canonical_family(spec.family());
    double worst = 0.0;
    bool all_converged = true;
    for (int n = 0; n <= 6; ++n) {
      for (int m = 0; m <= n; ++m) {
        const double norm = (m == n) ? orthogonality_norm(spec, n) : 0.0;
        const double tol = std::max(1e-13, 1e-9 * tol_scale * std::max(1.0, std::fabs(norm)));
        OracleReport r = orthogonality_oracle(spec, tag, m, n, tol);
        all_converged = all_converged && r.converged;
        const double dev =
            (m == n) ? std::fabs(r.value - norm) / std::fabs(norm) : std::fabs(r.value);
        worst = std::max(worst, dev);
      }
    }
    out.push_back({"orthogonality", spec.label() + " m,n<=6", worst, threshold,
                   all_converged && worst <= threshold});
  }
  return out;
}

std::vector<CheckResult> transfer_checks(double tol_scale) {
  std::vector<CheckResult> out;
  const double threshold = 1e-8 * tol_scale;
  const double tol = std::max(1e-13, 1e-10 * tol_scale);

  for (auto [a, b, q] : {std::tuple{0.5, 0.2, 0.3}, {-0.6, 0.6, 0.7}, {0.3, -0.4, -0.5}}) {
    auto spec = DistributionSpec::al_salam_chihara_weight(a, b, q);
    double worst = 0.0;
    bool all_converged = true;
    for (int n = 0; n <= 8; ++n) {
      OracleReport r = transfer_oracle(spec, PolyTag::continuous_q_hermite, n, tol);
      all_converged = all_converged && r.converged;
      worst = std::max(worst, std::fabs(r.value - s_polynomial(n, a, b, q)));
    }
    out.push_back({"transfer", "int h_n " + spec.label() + " = S_n", worst, threshold,
                   all_converged && worst <= threshold});
  }

  for (auto [y, rho, q] : {std::tuple{0.5, 0.6, 0.3}, {1.0, 0.3, 0.7}, {-0.8, -0.7, -0.5}}) {
    auto spec = DistributionSpec::conditional_q_normal(y, rho, q);
    double worst = 0.0;
    bool all_converged = true;
    for (int n = 0; n <= 8; ++n) {
      OracleReport r = transfer_oracle(spec, PolyTag::rescaled_q_hermite, n, tol);
      all_converged = all_converged && r.converged;
      const double expected = pow_int(rho, n) * rescaled_q_hermite(n, y, q);
      worst = std::max(worst, std::fabs(r.value - expected));
    }
    out.push_back({"transfer", "int H_n " + spec.label() + " = rho^n H_n(y)", worst, threshold,
                   all_converged && worst <= threshold});
  }
  return out;
}

std::vector<CheckResult> catalan_moment_checks(double tol_scale) {
  const double catalan[5] = {1, 2, 5, 14, 42};
  const double threshold = 1e-12 * tol_scale;
  double worst_fN = 0.0, worst_fh = 0.0;
  for (int j = 1; j <= 5; ++j) {
    worst_fN = std::max(worst_fN, std::fabs(moment_fN(2 * j, 0.0) - catalan[j - 1]));
    worst_fh =
        std::max(worst_fh, std::fabs(moment_fh(2 * j, 0.0) - catalan[j - 1] / pow_int(4.0, j)));
  }
  return {
      {"moments", "fN(q=0) even moments = Catalan numbers", worst_fN, threshold,
       worst_fN <= threshold},
      {"moments", "fh(q=0) even moments = Catalan/4^j", worst_fh, threshold,
       worst_fh <= threshold},
  };
}

std::vector<CheckResult> low_moment_checks(double tol_scale) {
  const double threshold = 1e-12 * tol_scale;
  double worst2 = 0.0, worst4 = 0.0;
  for (double q : kGridQ) {
    worst2 = std::max(worst2, std::fabs(moment_fN(2, q) - 1.0));
    worst4 = std::max(worst4, std::fabs(moment_fN(4, q) - (2.0 + q)));
  }
  return {
      {"moments", "fN second moment = 1 across grid q", worst2, threshold, worst2 <= threshold},
      {"moments", "fN fourth moment = 2+q across grid q", worst4, threshold,
       worst4 <= threshold},
  };
}

std::vector<CheckResult> gaussian_moment_checks(double tol_scale) {
  const double odd_double_factorial[4] = {1, 3, 15, 105};
  double worst_exact = 0.0, worst_near = 0.0;
  for (int j = 1; j <= 4; ++j) {
    const double target = odd_double_factorial[j - 1];
    worst_exact = std::max(worst_exact, std::fabs(moment_fN(2 * j, 1.0) - target));
    worst_near = std::max(worst_near, std::fabs(moment_fN(2 * j, 0.999) / target - 1.0));
  }
  return {
      {"moments", "fN(q=1) moments = (2j-1)!!", worst_exact, 0.0, worst_exact <= 0.0},
      {"moments", "fN(q=0.999) moments within 2% of (2j-1)!!", worst_near, 0.02 * tol_scale,
       worst_near <= 0.02 * tol_scale},
  };
}

std::vector<CheckResult> moment_oracle_checks(double tol_scale) {
  std::vector<CheckResult> out;
  const double threshold = 1e-8 * tol_scale;
  for (const auto& spec : grid()) {
    double worst = 0.0;
    bool oracle_ok = true;
    for (int n = 0; n <= 10; ++n) {
      const double closed = moment(spec, n);
      const double scale = std::max(1.0, std::fabs(closed));
      OracleReport r = moment_oracle(spec, n, std::max(1e-13, 0.02 * threshold * scale));
      // the oracle must be an order sharper than the criterion it checks
      oracle_ok = oracle_ok && r.error_estimate <= 0.1 * threshold * scale;
      worst = std::max(worst, rel_dev(closed, r.value));
    }
    out.push_back({"moments", spec.label() + " moments n<=10 vs oracle", worst, threshold,
                   oracle_ok && worst <= threshold});
  }
  return out;
}

std::vector<CheckResult> hankel_checks(double tol_scale) {
  std::vector<CheckResult> out;
  const double floor = -1e-9 * tol_scale;
  for (const auto& spec : grid()) {
    const double min_eig = MomentTable(spec, 10).hankel_min_eigenvalue();
    out.push_back({"moments", spec.label() + " Hankel matrix PSD to order 10", min_eig, floor,
                   min_eig >= floor});
  }
  return out;
}

std::vector<CheckResult> mgf_oracle_checks(double tol_scale) {
  std::vector<CheckResult> out;
  const double threshold = 1e-7 * tol_scale;
  for (const auto& spec : grid()) {
    double worst = 0.0;
    bool all_converged = true;
    for (double t : {-2.0, -0.5, 0.5, 1.0, 2.0}) {
      const MgfResult series = mgf(spec, t);
      const double tol = std::max(1e-13, 1e-9 * std::fabs(series.value) * tol_scale);
      OracleReport r = mgf_oracle(spec, t, tol);
      all_converged = all_converged && r.converged && series.converged;
      worst = std::max(worst, rel_dev(series.value, r.value));
    }
    out.push_back({"mgf", spec.label() + " Bessel series vs oracle", worst, threshold,
                   all_converged && worst <= threshold});
  }
  return out;
}

std::vector<CheckResult> mgf_moment_sum_checks(double tol_scale) {
  std::vector<CheckResult> out;
  const double threshold = 1e-9 * tol_scale;
  for (const auto& spec : grid()) {
    double worst = 0.0;
    bool all_converged = true;
    for (double t : {-1.0, -0.5, 0.5, 1.0}) {
      const MgfResult series = mgf(spec, t);
      all_converged = all_converged && series.converged;
      double partial = 0.0, tn = 1.0;
      for (int n = 0; n <= 30; ++n) {
        partial += tn * moment(spec, n) / factorial(n);
        tn *= t;
      }
      worst = std::max(worst, rel_dev(series.value, partial));
    }
    out.push_back({"mgf", spec.label() + " series vs 30-term moment sum", worst, threshold,
                   all_converged && worst <= threshold});
  }
  return out;
}

std::vector<CheckResult> limit_checks(double tol_scale) {
  (void)tol_scale;  // trend checks are tolerance-free
  std::vector<CheckResult> out;
  for (double t : {0.5, 1.0}) {
    LimitTrendReport r = gaussian_limit_check(t, kLimitQ);
    out.push_back({"limits", "mgf_fN(t=" + fmt("%g", t) + ") -> exp(t^2/2)", r.errors.back(),
                   r.errors.front(), r.strictly_decreasing});
  }
  for (double t : {0.5, 1.0}) {
    LimitTrendReport r = conditional_gaussian_limit_check(t, 0.3, 0.4, kLimitQ);
    out.push_back({"limits",
                   "mgf_fCN(t=" + fmt("%g", t) + ",y=0.3,rho=0.4) -> Gaussian target",
                   r.errors.back(), r.errors.front(), r.strictly_decreasing});
  }
  for (auto [m, n] : {std::pair{1, 3}, {2, 4}, {2, 6}, {3, 8}}) {
    LimitTrendReport r = hermite_coefficient_limit_check(m, n, kLimitQ);
    out.push_back({"limits",
                   "c_{" + std::to_string(m) + "," + std::to_string(n) +
                       "}/(1-q)^m -> Hermite coefficient",
                   r.errors.back(), r.errors.front(), r.strictly_decreasing});
  }
  return out;
}

std::vector<CheckResult> expansion_checks(double tol_scale) {
  std::vector<CheckResult> out;
  const double threshold = 1e-10 * tol_scale;
  std::mt19937 rng(0xC0FFEE);

  {  // x^n in the two Chebyshev-U variants
    std::uniform_real_distribution<double> dx(-1.0, 1.0);
    double worst_scaled = 0.0, worst_half = 0.0;
    for (int n = 0; n <= 14; ++n) {
      auto scaled = expand_power_in_chebyshev(n, ChebyshevVariant::scaled);
      auto half = expand_power_in_chebyshev(n, ChebyshevVariant::half_argument);
      for (int i = 0; i < 10; ++i) {
        const double x = dx(rng);
        const double target = pow_int(x, n);
        worst_scaled =
            std::max(worst_scaled, rel_dev(scaled.basis_sum(x), pow_int(2.0, n) * target));
        worst_half = std::max(worst_half, rel_dev(half.basis_sum(x), target));
      }
    }
    out.push_back({"expansion", "2^n x^n rebuilt from U_(n-2k)(x), n<=14", worst_scaled,
                   threshold, worst_scaled <= threshold});
    out.push_back({"expansion", "x^n rebuilt from U_(n-2k)(x/2), n<=14", worst_half, threshold,
                   worst_half <= threshold});
  }

  for (double q : {-0.5, 0.3, 0.9}) {
    const double halfwidth = 2.0 / std::sqrt(1.0 - q);
    std::uniform_real_distribution<double> dx(-halfwidth, halfwidth);
    double worst_H = 0.0, worst_h = 0.0;
    for (int n = 1; n <= 14; ++n) {
      auto inH = expand_power_in_q_hermite(n, q, QHermiteBasis::rescaled);
      auto inh = expand_power_in_q_hermite(n, q, QHermiteBasis::continuous);
      for (int i = 0; i < 10; ++i) {
        const double x = dx(rng);
        const double target = pow_int(x, n);
        worst_H = std::max(worst_H, rel_dev(inH.basis_sum(x), target));
        worst_h = std::max(worst_h, rel_dev(inh.basis_sum(x), target));
      }
    }
    out.push_back({"expansion", "x^n rebuilt from H basis, q=" + fmt("%g", q), worst_H,
                   threshold, worst_H <= threshold});
    out.push_back({"expansion", "x^n rebuilt from h basis, q=" + fmt("%g", q), worst_h,
                   threshold, worst_h <= threshold});
  }

  {  // (n-2k+1) binom(n+1,k)/(n+1) = binom(n,k) - binom(n,k-1), exactly
    long long failures = 0;
    for (int n = 0; n <= 30; ++n) {
      for (int k = 0; 2 * k <= n; ++k) {
        const long long lhs = (n - 2 * k + 1) * binomial_exact(n + 1, k);
        if (lhs % (n + 1) != 0 ||
            lhs / (n + 1) != binomial_exact(n, k) - binomial_exact(n, k - 1)) {
          ++failures;
        }
      }
    }
    out.push_back({"expansion", "binomial identity exact for n<=30",
                   static_cast<double>(failures), 0.0, failures == 0});
  }
  return out;
}

std::vector<CheckResult> shift_identity_checks(double tol_scale) {
  const double threshold = 1e-15 * tol_scale;
  std::mt19937 rng(0xD1CE);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> param(-0.95, 0.95);
  std::uniform_int_distribution<int> dk(0, 6);

  double worst_w = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int k = dk(rng);
    const double x = unit(rng), a = param(rng), b = param(rng), q = param(rng);
    const double s = pow_int(q, k);
    const double lhs = poly_w(k, x, a, b, q);
    const double rhs = poly_w(0, x, a * s, b * s, q);
    worst_w = std::max(worst_w, rel_dev(lhs, rhs));
  }

  double worst_W = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int k = dk(rng);
    const double x = unit(rng), y = unit(rng), rho = param(rng), q = param(rng);
    const double lhs = poly_W(k, x, y, rho, q);
    const double rhs = poly_W(0, x, y, rho * pow_int(q, k), q);
    worst_W = std::max(worst_W, rel_dev(lhs, rhs));
  }

  return {
      {"identities", "w_k = w_0 at shifted (a,b), 50 samples", worst_w, threshold,
       worst_w <= threshold},
      {"identities", "W_k = W_0 at shifted rho, 50 samples", worst_W, threshold,
       worst_W <= threshold},
  };
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"normalization", "orthogonality", "transfer",
                                                 "moments",       "mgf",           "limits"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, double tol_scale) {
  auto append = [](std::vector<CheckResult>& to, std::vector<CheckResult> from) {
    to.insert(to.end(), std::make_move_iterator(from.begin()),
              std::make_move_iterator(from.end()));
  };
  std::vector<CheckResult> out;
  if (suite == "normalization") return normalization_checks(tol_scale);
  if (suite == "orthogonality") return orthogonality_checks(tol_scale);
  if (suite == "transfer") return transfer_checks(tol_scale);
  if (suite == "moments") {
    append(out, catalan_moment_checks(tol_scale));
    append(out, low_moment_checks(tol_scale));
    append(out, gaussian_moment_checks(tol_scale));
    append(out, moment_oracle_checks(tol_scale));
    append(out, hankel_checks(tol_scale));
    return out;
  }
  if (suite == "mgf") {
    append(out, mgf_oracle_checks(tol_scale));
    append(out, mgf_moment_sum_checks(tol_scale));
    return out;
  }
  if (suite == "limits") return limit_checks(tol_scale);
  if (suite == "all") {
    for (const auto& name : suite_names()) append(out, run_suite(name, tol_scale));
    return out;
  }
  throw std::invalid_argument("unknown suite '" + suite +
                              "' (expected normalization, orthogonality, transfer, moments, "
                              "mgf, limits or all)");
}

}  // namespace qdist::verify
