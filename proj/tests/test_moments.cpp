#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "qdist/moments.hpp"
#include "qdist/quadrature.hpp"

using namespace qdist;

namespace {

constexpr double kPi = 3.14159265358979323846;

// 30-term brute-force reference for I_a(t), independent of bessel_i
double bessel_ref(int a, double t) {
  double sum = 0.0;
  for (int m = 0; m < 30; ++m) {
    double term = std::pow(t / 2.0, 2 * m + a);
    for (int i = 2; i <= m; ++i) term /= i;         // / m!
    for (int i = 2; i <= m + a; ++i) term /= i;     // / (m+a)!
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("factorial helpers") {
  CHECK(factorial(0) == 1.0);
  CHECK(factorial(5) == 120.0);
  CHECK(double_factorial(-1) == 1.0);
  CHECK(double_factorial(7) == 105.0);
  CHECK(double_factorial(8) == 384.0);
  CHECK_THROWS_AS(factorial(150), std::overflow_error);
  CHECK_THROWS_AS(double_factorial(151), std::overflow_error);
}

TEST_CASE("bessel_i") {
  CHECK(bessel_i(0, 0.0) == 1.0);
  CHECK(bessel_i(3, 0.0) == 0.0);
  CHECK(bessel_i(1, 2.0) == doctest::Approx(1.5906368546).epsilon(1e-10));
  for (int a = 0; a <= 8; ++a) {
    for (double t : {0.3, 1.0, 4.5, 9.0}) {
      CHECK(bessel_i(a, t) == doctest::Approx(bessel_ref(a, t)).epsilon(1e-13));
      double parity = (a % 2 == 0) ? 1.0 : -1.0;
      CHECK(bessel_i(a, -t) == parity * bessel_i(a, t));
    }
  }
  CHECK_THROWS_AS(bessel_i(-1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bessel_i(0, 1500.0), std::overflow_error);
}

TEST_CASE("q-normal moments") {
  // Catalan at q = 0
  const std::array<double, 5> catalan = {1, 2, 5, 14, 42};
  for (int j = 1; j <= 5; ++j) {
    CHECK(moment_fN(2 * j, 0.0) == doctest::Approx(catalan[j - 1]).epsilon(1e-14));
  }
  for (double q : {-0.9, -0.5, 0.0, 0.3, 0.7, 0.95}) {
    CHECK(moment_fN(0, q) == 1.0);
    CHECK(moment_fN(3, q) == 0.0);
    CHECK(moment_fN(2, q) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(moment_fN(4, q) == doctest::Approx(2.0 + q).epsilon(1e-13));
  }
  // q = 1 branch
  const double odd_dfact[4] = {1, 3, 15, 105};
  for (int j = 1; j <= 4; ++j) {
    CHECK(moment_fN(2 * j, 1.0) == odd_dfact[j - 1]);
  }
}

TEST_CASE("fh moments") {
  CHECK(moment_fh(2, 0.0) == doctest::Approx(0.25).epsilon(1e-15));
  // cross-check against the quadrature of (2/pi) sqrt(1-x^2) x^2
  auto f = [](double x) { return 2.0 / kPi * std::sqrt(1 - x * x) * x * x; };
  CHECK(integrate(f, -1, 1, 1e-11).value == doctest::Approx(0.25).epsilon(1e-9));
  for (double q : {-0.5, 0.4}) {
    for (int j = 1; j <= 5; ++j) {
      CHECK(moment_fh(2 * j, q) ==
            doctest::Approx(moment_fN(2 * j, q) * std::pow((1 - q) / 4.0, j)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(moment_fh(2, 1.0), std::invalid_argument);
}

TEST_CASE("conditional q-normal moments") {
  double y = 0.5, rho = 0.6;
  for (double q : {-0.7, 0.0, 0.4, 1.0}) {
    CHECK(moment_fCN(1, y, rho, q) == doctest::Approx(rho * y).epsilon(1e-14));
    CHECK(moment_fCN(2, y, rho, q) ==
          doctest::Approx(rho * rho * (y * y - 1) + 1).epsilon(1e-13));
  }
  for (double q : {-0.7, 0.3}) {
    for (int j = 0; j <= 5; ++j) {
      CHECK(moment_fCN(2 * j, 0.9, 0.0, q) == doctest::Approx(moment_fN(2 * j, q)).epsilon(1e-13));
    }
  }
  // q = 1: moments of N(rho y, 1 - rho^2), reference via binomial sum
  double mean = rho * y, var = 1 - rho * rho;
  for (int n = 1; n <= 6; ++n) {
    double expected = 0.0;
    for (int k = 0; k <= n; k += 2) {
      expected += double(binomial_exact(n, k)) * double_factorial(k - 1) *
                  std::pow(var, k / 2.0) * std::pow(mean, n - k);
    }
    CHECK(moment_fCN(n, y, rho, 1.0) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("ASC weight moments") {
  double a = 0.5, b = 0.2, q = 0.3;
  CHECK(moment_fQ(1, a, b, q) == doctest::Approx((a + b) / 2).epsilon(1e-14));
  for (int j = 0; j <= 5; ++j) {
    CHECK(moment_fQ(2 * j, 0.0, 0.0, q) == doctest::Approx(moment_fh(2 * j, q)).epsilon(1e-13));
  }
  auto spec = DistributionSpec::al_salam_chihara_weight(a, b, q);
  OracleReport r = moment_oracle(spec, 2, 1e-11);
  CHECK(r.converged);
  CHECK(moment_fQ(2, a, b, q) == doctest::Approx(r.value).epsilon(1e-9));
}

TEST_CASE("mgf normalization and reductions") {
  for (double q : {-0.6, 0.0, 0.5}) {
    CHECK(mgf_fN(0.0, q).value == 1.0);
    CHECK(mgf_fh(0.0, q).value == 1.0);
    CHECK(mgf_fQ(0.0, 0.3, -0.2, q).value == 1.0);
    CHECK(mgf_fCN(0.0, 0.5, 0.4, q).value == 1.0);
  }
  // q = 0: single-term series 2 I_1(t)/t
  for (double t : {0.7, 2.0}) {
    CHECK(mgf_fh(t, 0.0).value == doctest::Approx(2 * bessel_i(1, t) / t).epsilon(1e-14));
  }
  // reductions are bit-exact by construction
  for (double t : {-2.0, 0.5, 1.3}) {
    CHECK(mgf_fCN(t, 0.8, 0.0, 0.4).value == mgf_fN(t, 0.4).value);
    CHECK(mgf_fQ(t, 0.0, 0.0, 0.4).value == mgf_fh(t, 0.4).value);
  }
  // even densities: even MGFs
  for (double t : {0.5, 1.0, 2.0}) {
    CHECK(mgf_fN(-t, 0.6).value == doctest::Approx(mgf_fN(t, 0.6).value).epsilon(1e-12));
    CHECK(mgf_fh(-t, -0.4).value == doctest::Approx(mgf_fh(t, -0.4).value).epsilon(1e-12));
  }
  // removable singularity at t = 0
  CHECK(mgf_fN(1e-9, 0.3).value == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("mgf matches the quadrature oracle") {
  auto check = [](const DistributionSpec& spec, double t, double tol) {
    MgfResult s = mgf(spec, t);
    CHECK(s.converged);
    OracleReport r = mgf_oracle(spec, t, std::max(1e-13, 1e-10 * std::fabs(s.value)));
    CHECK(r.converged);
    CHECK(std::fabs(s.value - r.value) <= tol * (1 + std::fabs(s.value)));
  };
  check(DistributionSpec::q_normal(0.4), 1.5, 1e-8);
  check(DistributionSpec::al_salam_chihara_weight(0.5, -0.3, 0.5), 2.0, 1e-8);
  check(DistributionSpec::conditional_q_normal(0.5, 0.6, 0.3), 1.0, 1e-8);
  check(DistributionSpec::q_hermite_weight(-0.8), -2.0, 1e-8);
}

TEST_CASE("mgf large-argument path stays consistent with the oracle") {
  // z = 2t/sqrt(1-q) crosses the high-precision threshold near t = 5.6
  auto spec = DistributionSpec::q_normal(0.8);
  for (double t : {5.0, 6.0}) {
    MgfResult s = mgf_fN(t, 0.8);
    CHECK(s.converged);
    OracleReport r = mgf_oracle(spec, t, 1e-9 * s.value);
    CHECK(r.converged);
    CHECK(s.value == doctest::Approx(r.value).epsilon(1e-7));
  }
}

TEST_CASE("mgf non-convergence is flagged with diagnostics") {
  BesselSeriesConfig tiny;
  tiny.max_outer = 1;
  MgfResult r = mgf_fCN(2.0, 1.0, 0.9, 0.9, tiny);
  CHECK_FALSE(r.converged);
  CHECK(r.outer_terms == 2);

  BesselSeriesConfig bad;
  bad.term_tol = -1.0;
  CHECK_THROWS_AS(mgf_fN(1.0, 0.5, bad), std::invalid_argument);
}

TEST_CASE("mgf agrees with the truncated moment sum") {
  for (const auto& spec :
       {DistributionSpec::q_normal(0.7), DistributionSpec::q_hermite_weight(-0.5),
        DistributionSpec::al_salam_chihara_weight(0.5, 0.2, 0.3),
        DistributionSpec::conditional_q_normal(1.0, 0.3, 0.95)}) {
    for (double t : {-1.0, 0.5, 1.0}) {
      double partial = 0.0, tn = 1.0;
      for (int n = 0; n <= 30; ++n) {
        partial += tn * moment(spec, n) / factorial(n);
        tn *= t;
      }
      MgfResult s = mgf(spec, t);
      CHECK(std::fabs(s.value - partial) <= 1e-9 * std::max(1.0, std::fabs(s.value)));
    }
  }
}

TEST_CASE("moment table and Hankel positivity") {
  auto spec = DistributionSpec::conditional_q_normal(1.0, 0.3, 0.7);
  MomentTable table(spec, 10);
  CHECK(table.values().size() == 11);
  CHECK(table[0] == 1.0);
  CHECK(table.hankel_min_eigenvalue() >= -1e-9);

  MomentTable fN(DistributionSpec::q_normal(0.5), 10);
  CHECK(fN[3] == 0.0);
  CHECK(fN[7] == 0.0);
  CHECK(fN.hankel_min_eigenvalue() >= -1e-9);
}

TEST_CASE("gaussian limit target has the + sign (oracle resolution)") {
  TruncationPolicy deep;
  deep.product_tol = 1e-12;
  deep.max_factors = 60000;
  auto spec = DistributionSpec::q_normal(0.999, deep);
  OracleReport r = mgf_oracle(spec, 1.0, 1e-6);
  CHECK(r.converged);
  const double plus = std::exp(0.5), minus = std::exp(-0.5);
  CHECK(std::fabs(r.value - plus) < 0.05);
  CHECK(std::fabs(r.value - plus) < std::fabs(r.value - minus));
  // and the series itself agrees with the oracle in the same regime
  MgfResult s = mgf_fN(1.0, 0.999);
  CHECK(s.converged);
  CHECK(s.value == doctest::Approx(r.value).epsilon(1e-5));
}

TEST_CASE("limit trend reports") {
  const std::array<double, 3> qs = {0.9, 0.99, 0.999};

  LimitTrendReport zero = gaussian_limit_check(0.0, qs);
  for (double e : zero.errors) CHECK(e == 0.0);

  for (double t : {0.5, 1.0}) {
    LimitTrendReport r = gaussian_limit_check(t, qs);
    CHECK(r.target == doctest::Approx(std::exp(0.5 * t * t)).epsilon(1e-15));
    CHECK(r.strictly_decreasing);
  }

  LimitTrendReport c = conditional_gaussian_limit_check(0.5, 0.3, 0.4, qs);
  CHECK(c.target == doctest::Approx(std::exp(0.5 * 0.4 * 0.3 + 0.5 * (1 - 0.16) * 0.25)));
  CHECK(c.strictly_decreasing);

  LimitTrendReport h = hermite_coefficient_limit_check(2, 4, qs);
  CHECK(h.target == doctest::Approx(3.0));
  for (std::size_t i = 0; i < qs.size(); ++i) {
    CHECK(h.errors[i] == doctest::Approx(1.0 - qs[i]).epsilon(1e-10));
  }
  CHECK(h.strictly_decreasing);

  const std::array<double, 2> bad = {0.99, 0.9};
  CHECK_THROWS_AS(gaussian_limit_check(1.0, bad), std::invalid_argument);
}
