#include "qdist/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace qdist {

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr int kMaxPanels = 4000;

struct Panel {
  double lower, upper;
  double value, error;
  long seq;  // insertion order, ties broken deterministically
};

struct PanelWorse {
  bool operator()(const Panel& a, const Panel& b) const {
    if (a.error != b.error) return a.error < b.error;
    return a.seq > b.seq;
  }
};

Panel gk15(const std::function<double(double)>& f, double lower, double upper, long seq) {
  const double center = 0.5 * (lower + upper);
  const double half = 0.5 * (upper - lower);

  const double fc = f(center);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  double resabs = kWgk[7] * std::fabs(fc);
  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    const double fsum = fv1[j] + fv2[j];
    resk += kWgk[j] * fsum;
    resabs += kWgk[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::fabs(fv1[j] - mean) + std::fabs(fv2[j] - mean));
  }

  const double value = resk * half;
  resabs *= std::fabs(half);
  resasc *= std::fabs(half);
  double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double floor50 = 50.0 * std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / floor50) {
    err = std::max(err, floor50 * resabs);
  }
  return {lower, upper, value, err, seq};
}

}  // namespace

OracleReport integrate(const std::function<double(double)>& f, double lower, double upper,
                       double tol) {
  if (!(lower < upper)) throw std::invalid_argument("integrate: requires lower < upper");
  if (!(tol > 0.0)) throw std::invalid_argument("integrate: requires tol > 0");

  long seq = 0;
  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> panels;
  Panel first = gk15(f, lower, upper, seq++);
  double total_value = first.value;
  double total_error = first.error;
  panels.push(first);

  const double min_width = (upper - lower) * 1e-13;
  while (total_error > tol && static_cast<int>(panels.size()) < kMaxPanels) {
    const Panel worst = panels.top();
    if (worst.upper - worst.lower < min_width) break;  // cannot usefully refine
    panels.pop();
    const double mid = 0.5 * (worst.lower + worst.upper);
    const Panel left = gk15(f, worst.lower, mid, seq++);
    const Panel right = gk15(f, mid, worst.upper, seq++);
    total_value += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }

  OracleReport report;
  report.value = total_value;
  report.error_estimate = total_error;
  report.panels = static_cast<int>(panels.size());
  report.converged = std::isfinite(total_value) && total_error <= tol;
  return report;
}

namespace {

// Bounded supports are symmetric [-c, c]; the x = c sin(theta) substitution
// removes the sqrt-type endpoint behaviour of the densities.
OracleReport integrate_weighted(const DistributionSpec& spec,
                                const std::function<double(double)>& factor, double tol) {
  const Support s = support(spec);
  if (s.bounded()) {
    const double c = s.upper;
    auto g = [&](double theta) {
      const double x = c * std::sin(theta);
      return factor(x) * density(spec, x) * c * std::cos(theta);
    };
    constexpr double kHalfPi = 1.57079632679489661923;
    return integrate(g, -kHalfPi, kHalfPi, tol);
  }
  // q = 1: Gaussian tails; a generous finite window suffices.
  const double mean = (spec.family() == Family::fCN) ? spec.rho() * spec.y() : 0.0;
  const double sigma =
      (spec.family() == Family::fCN) ? std::sqrt(1.0 - spec.rho() * spec.rho()) : 1.0;
  const double halfwidth = 24.0 * sigma;
  auto g = [&](double x) { return factor(x) * density(spec, x); };
  return integrate(g, mean - halfwidth, mean + halfwidth, tol);
}

std::function<double(double)> polynomial_for(const DistributionSpec& spec, PolyTag family,
                                             int n) {
  switch (family) {
    case PolyTag::chebyshev_u:
      return [n](double x) { return chebyshev_u(n, x); };
    case PolyTag::probabilists_hermite:
      return [n](double x) { return probabilists_hermite(n, x); };
    case PolyTag::continuous_q_hermite:
      return [n, q = spec.q()](double x) { return continuous_q_hermite(n, x, q); };
    case PolyTag::rescaled_q_hermite:
      return [n, q = spec.q()](double x) { return rescaled_q_hermite(n, x, q); };
    case PolyTag::al_salam_chihara:
      return [n, a = spec.a(), b = spec.b(), q = spec.q()](double x) {
        return al_salam_chihara(n, x, a, b, q);
      };
    case PolyTag::conditional_al_salam_chihara:
      return [n, y = spec.y(), rho = spec.rho(), q = spec.q()](double x) {
        return conditional_al_salam_chihara(n, x, y, rho, q);
      };
  }
  throw std::logic_error("polynomial_for: unknown family");
}

}  // namespace

OracleReport moment_oracle(const DistributionSpec& spec, int n, double tol) {
  if (n < 0) throw std::invalid_argument("moment_oracle: n must be nonnegative");
  return integrate_weighted(spec, [n](double x) { return pow_int(x, n); }, tol);
}

OracleReport mgf_oracle(const DistributionSpec& spec, double t, double tol) {
  return integrate_weighted(spec, [t](double x) { return std::exp(t * x); }, tol);
}

OracleReport orthogonality_oracle(const DistributionSpec& spec, PolyTag family, int m, int n,
                                  double tol) {
  auto pm = polynomial_for(spec, family, m);
  auto pn = polynomial_for(spec, family, n);
  return integrate_weighted(spec, [pm, pn](double x) { return pm(x) * pn(x); }, tol);
}

OracleReport transfer_oracle(const DistributionSpec& spec, PolyTag family, int n, double tol) {
  auto p = polynomial_for(spec, family, n);
  return integrate_weighted(spec, [p](double x) { return p(x); }, tol);
}

}  // namespace qdist
