#pragma once

#include <cstdint>
#include <map>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "qdist/qseries.hpp"

namespace qdist {

enum class PolyTag {
  chebyshev_u,
  continuous_q_hermite,      // h_n, leading coefficient 2^n, |q| < 1
  rescaled_q_hermite,        // H_n, monic, q in (-1, 1]
  al_salam_chihara,          // Q_n(.|a,b,q)
  conditional_al_salam_chihara,  // P_n(.|y,rho,q)
  probabilists_hermite,
};

// Chebyshev polynomial of the second kind, U_{n+1} = 2x U_n - U_{n-1}.
double chebyshev_u(int n, double x);

// Probabilists' Hermite, He_{n+1} = x He_n - n He_{n-1}.
double probabilists_hermite(int n, double x);

// h_{n+1} = 2x h_n - (1 - q^n) h_{n-1}; requires |q| < 1.
double continuous_q_hermite(int n, double x, QParameter q);

// H_{n+1} = x H_n - [n]_q H_{n-1}; at q = 1 this is probabilists' Hermite.
double rescaled_q_hermite(int n, double x, QParameter q);

// Q_{n+1} = (2x - (a+b) q^n) Q_n - (1 - q^n)(1 - ab q^{n-1}) Q_{n-1};
// requires |a|, |b| < 1 and |q| < 1.
double al_salam_chihara(int n, double x, double a, double b, QParameter q);

// P_{n+1} = (x - rho y q^n) P_n - (1 - rho^2 q^{n-1}) [n]_q P_{n-1};
// requires |rho| < 1, y in the q-normal support, q in (-1, 1].
double conditional_al_salam_chihara(int n, double x, double y, double rho, QParameter q);

// c_{m,n}(q) = sum_{j=0..m} (-1)^j q^{j(j+1)/2}
//              (binom(n,m-j) - binom(n,m-j-1)) [n-2m+j choose j]_q,
// defined for n >= 1, 0 <= m <= floor(n/2).
double c_coefficient(int m, int n, QParameter q);

enum class ChebyshevVariant {
  half_argument,  // x^n       = sum_k coeff_k U_{n-2k}(x/2)
  scaled,         // 2^n x^n   = sum_k coeff_k U_{n-2k}(x)
};

enum class QHermiteBasis { rescaled, continuous };

struct ExpansionCoefficients {
  enum class Basis { chebyshev, chebyshev_half, q_hermite_rescaled, q_hermite_continuous };

  int degree = 0;  // degree of the expanded object
  Basis basis = Basis::chebyshev;
  double q = 0.0;  // meaningful for the q-Hermite bases
  std::vector<std::pair<int, double>> terms;  // (basis degree, coefficient)

  // Compensation below the double rounding of each coefficient. The H-basis
  // coefficients reach ~1e5 by degree 14 near q = 1, where bare doubles
  // would cap reconstruction accuracy right at 1e-10.
  std::vector<double> tails;

  // sum_i coeff_i * basis polynomial of the stored degree, at x
  double basis_sum(double x) const;
};

// Coefficients of x^n in a Chebyshev-U basis; both variants share the
// coefficients binom(n,k) - binom(n,k-1).
ExpansionCoefficients expand_power_in_chebyshev(int n, ChebyshevVariant variant);

// Coefficients of U_n(x sqrt(1-q)/2) in the H_{n-2j}(.|q) basis, or of
// U_n(x) in the h_{n-2j}(.|q) basis. Requires |q| < 1.
ExpansionCoefficients expand_chebyshev_in_q_hermite(int n, QParameter q, QHermiteBasis basis);

// Coefficients of x^n in a q-Hermite basis: (1-q)^{-m} c_{m,n} for H,
// 2^{-n} c_{m,n} for h. The H form is also valid at q = 1 through the
// classical Hermite coefficients.
ExpansionCoefficients expand_power_in_q_hermite(int n, QParameter q, QHermiteBasis basis);

// Memoized rows c_{0..floor(n/2), n}(q), keyed by (n, exact bits of q).
// Safe for concurrent lookup and insertion.
class CoefficientTable {
 public:
  std::vector<double> c_row(int n, QParameter q);
  static CoefficientTable& global();

 private:
  std::shared_mutex mutex_;
  std::map<std::pair<int, std::uint64_t>, std::vector<double>> rows_;
};

}  // namespace qdist
