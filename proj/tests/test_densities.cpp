#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qdist/densities.hpp"
#include "qdist/quadrature.hpp"
#include "qdist/verify.hpp"

using namespace qdist;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::mt19937 rng(424242);

double random_in(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

}  // namespace

TEST_CASE("poly_w") {
  for (double q : {-0.6, 0.0, 0.5}) {
    CHECK(poly_w(3, 0.4, 0.0, 0.0, q) == 1.0);
    CHECK(poly_w(0, 0.0, 0.5, 0.2, q) == doctest::Approx(1.3).epsilon(1e-15));
  }
  // shift identity is the same floating expression
  for (int i = 0; i < 30; ++i) {
    int k = i % 5;
    double x = random_in(-1, 1), a = random_in(-0.9, 0.9), b = random_in(-0.9, 0.9);
    double q = random_in(-0.9, 0.9);
    double s = pow_int(q, k);
    CHECK(poly_w(k, x, a, b, q) == poly_w(0, x, a * s, b * s, q));
  }
}

TEST_CASE("poly_W") {
  for (double q : {-0.6, 0.0, 0.5}) {
    CHECK(poly_W(2, 0.3, -0.8, 0.0, q) == 1.0);
    double rho = 0.4;
    CHECK(poly_W(0, 0.0, 0.0, rho, q) ==
          doctest::Approx((1 - rho * rho) * (1 - rho * rho)).epsilon(1e-15));
  }
  for (int i = 0; i < 30; ++i) {
    int k = i % 5;
    double x = random_in(-1, 1), y = random_in(-1, 1), rho = random_in(-0.9, 0.9);
    double q = random_in(-0.9, 0.9);
    CHECK(poly_W(k, x, y, rho, q) == poly_W(0, x, y, rho * pow_int(q, k), q));
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(DistributionSpec::q_hermite_weight(1.0), std::invalid_argument);
  CHECK_THROWS_AS(DistributionSpec::al_salam_chihara_weight(1.2, 0.0, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(DistributionSpec::al_salam_chihara_weight(0.0, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(DistributionSpec::conditional_q_normal(0.0, 1.0, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(DistributionSpec::conditional_q_normal(5.0, 0.5, 0.0),
                  std::invalid_argument);
  CHECK_NOTHROW(DistributionSpec::conditional_q_normal(5.0, 0.5, 1.0));  // J(1) = R
  TruncationPolicy bad;
  bad.product_tol = 0.0;
  CHECK_THROWS_AS(DistributionSpec::q_normal(0.5, bad), std::invalid_argument);
}

TEST_CASE("support") {
  CHECK(support(DistributionSpec::q_normal(0.0)).lower == -2.0);
  CHECK(support(DistributionSpec::q_normal(0.0)).upper == 2.0);
  CHECK(support(DistributionSpec::q_normal(0.75)).upper == doctest::Approx(4.0).epsilon(1e-15));
  for (double q : {-0.9, 0.3}) {
    CHECK(support(DistributionSpec::q_hermite_weight(q)).lower == -1.0);
    CHECK(support(DistributionSpec::q_hermite_weight(q)).upper == 1.0);
  }
  CHECK_FALSE(support(DistributionSpec::q_normal(1.0)).bounded());
  CHECK(support(DistributionSpec::q_normal(0.3)).bounded());
}

TEST_CASE("density closed forms at q = 0") {
  auto fN = DistributionSpec::q_normal(0.0);
  CHECK(density(fN, 0.0) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
  for (int i = 0; i < 20; ++i) {
    double x = random_in(-2, 2);
    CHECK(density(fN, x) == doctest::Approx(std::sqrt(4 - x * x) / (2 * kPi)).epsilon(1e-13));
  }

  auto fh = DistributionSpec::q_hermite_weight(0.0);
  CHECK(density(fh, 0.5) == doctest::Approx(2.0 / kPi * std::sqrt(0.75)).epsilon(1e-14));

  double a = 0.5, b = 0.2;
  auto fQ = DistributionSpec::al_salam_chihara_weight(a, b, 0.0);
  for (double x : {0.3, -0.7, 0.05}) {
    double expected = 2 * (1 - a * b) * std::sqrt(1 - x * x) / (kPi * poly_w(0, x, a, b, 0.0));
    CHECK(density(fQ, x) == doctest::Approx(expected).epsilon(1e-13));
  }

  double y = 0.4, rho = -0.6;
  auto fCN = DistributionSpec::conditional_q_normal(y, rho, 0.0);
  for (int i = 0; i < 20; ++i) {
    double x = random_in(-2, 2);
    double expected =
        (1 - rho * rho) * std::sqrt(4 - x * x) / (2 * kPi * poly_W(0, x, y, rho, 0.0));
    CHECK(std::fabs(density(fCN, x) - expected) <= 1e-12);
  }
}

TEST_CASE("density q = 1 Gaussian branches") {
  auto fN = DistributionSpec::q_normal(1.0);
  CHECK(density(fN, 0.0) == doctest::Approx(1.0 / std::sqrt(2 * kPi)).epsilon(1e-15));
  double y = 1.2, rho = 0.5;
  auto fCN = DistributionSpec::conditional_q_normal(y, rho, 1.0);
  for (double x : {-1.0, 0.0, 2.3}) {
    double v = 1 - rho * rho;
    double expected =
        std::exp(-(x - rho * y) * (x - rho * y) / (2 * v)) / std::sqrt(2 * kPi * v);
    CHECK(density(fCN, x) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("fCN with rho = 0 collapses to fN") {
  for (double q : {-0.9, 0.3, 0.95}) {
    auto fN = DistributionSpec::q_normal(q);
    auto fCN = DistributionSpec::conditional_q_normal(0.7, 0.0, q);
    for (int i = 0; i < 20; ++i) {
      double x = random_in(-2.0 / std::sqrt(1 - q), 2.0 / std::sqrt(1 - q));
      double base = density(fN, x);
      CHECK(std::fabs(density(fCN, x) - base) <= 1e-14 * (1 + base));
    }
  }
}

TEST_CASE("out-of-support points give exactly zero") {
  CHECK(density(DistributionSpec::q_hermite_weight(0.4), 1.001) == 0.0);
  CHECK(density(DistributionSpec::q_normal(0.0), -2.5) == 0.0);
  CHECK(density(DistributionSpec::al_salam_chihara_weight(0.2, 0.1, 0.4), -7.0) == 0.0);
  CHECK(density(DistributionSpec::conditional_q_normal(0.0, 0.3, 0.0), 2.1) == 0.0);
}

TEST_CASE("symmetries") {
  for (double q : {-0.7, 0.0, 0.6}) {
    auto fh = DistributionSpec::q_hermite_weight(q);
    auto fN = DistributionSpec::q_normal(q);
    auto fQ = DistributionSpec::al_salam_chihara_weight(0.5, -0.3, q);
    auto fQm = DistributionSpec::al_salam_chihara_weight(-0.5, 0.3, q);
    auto fCN = DistributionSpec::conditional_q_normal(0.8, -0.4, q);
    auto fCNm = DistributionSpec::conditional_q_normal(-0.8, -0.4, q);
    for (int i = 0; i < 20; ++i) {
      double x = random_in(0, 1);
      CHECK(std::fabs(density(fh, x) - density(fh, -x)) <= 1e-13);
      CHECK(std::fabs(density(fQ, x) - density(fQm, -x)) <= 1e-13);
      double xn = random_in(0, 2.0 / std::sqrt(1 - q));
      CHECK(std::fabs(density(fN, xn) - density(fN, -xn)) <= 1e-13);
      CHECK(std::fabs(density(fCN, xn) - density(fCNm, -xn)) <= 1e-13);
    }
  }
}

TEST_CASE("fN is the linear rescaling of fh") {
  for (double q : {-0.8, 0.2, 0.9}) {
    auto fh = DistributionSpec::q_hermite_weight(q);
    auto fN = DistributionSpec::q_normal(q);
    const double s = std::sqrt(1 - q) / 2;
    for (int i = 0; i < 20; ++i) {
      double x = random_in(-1 / s, 1 / s);
      CHECK(density(fN, x) == doctest::Approx(s * density(fh, x * s)).epsilon(1e-13));
    }
  }
}

TEST_CASE("densities are nonnegative on their support") {
  for (const auto& spec : verify::standard_grid()) {
    Support s = support(spec);
    for (int i = 0; i < 200; ++i) {
      double x = s.lower + (s.upper - s.lower) * (i + 0.5) / 200.0;
      CHECK(density(spec, x) >= 0.0);
    }
  }
}

TEST_CASE("normalization spot checks") {
  for (const auto& spec : {DistributionSpec::q_hermite_weight(0.95),
                           DistributionSpec::q_normal(-0.9),
                           DistributionSpec::al_salam_chihara_weight(0.5, 0.2, 0.7),
                           DistributionSpec::conditional_q_normal(1.0, 0.3, 0.3)}) {
    OracleReport r = moment_oracle(spec, 0, 1e-11);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("product cap failure is reported, not silent") {
  TruncationPolicy tight;
  tight.max_factors = 3;
  auto spec = DistributionSpec::q_normal(0.95, tight);
  CHECK_THROWS_AS(density(spec, 0.1), NonConvergenceError);
}
