#pragma once

#include <span>
#include <utility>
#include <vector>

// Probabilists' Hermite polynomials He_n, orthogonal under the standard
// normal weight exp(-x^2 / 2) with <He_n, He_m> = n! delta_nm. The
// physicists' convention is not supported anywhere in this library.

namespace narmax::hermite {

/// Largest degree accepted before factorials overflow a double.
inline constexpr int kMaxDegree = 170;

/// Monomial coefficients of He_n, lowest power first (size n + 1), built
/// with He_{n+1} = x He_n - n He_{n-1}.
std::vector<double> hermite_poly(int n);

/// He_n(x) via the three-term recurrence.
double evaluate(int n, double x);

/// x^m written as sum_n coefficients[n] * He_n(x).
struct HermiteExpansion {
  std::vector<double> coefficients;  // indexed by degree n, size m + 1

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  double coefficient(int n) const {
    return n >= 0 && n < static_cast<int>(coefficients.size()) ? coefficients[n] : 0.0;
  }
  double evaluate(double x) const;
};

/// x^m = m! sum_j He_{m-2j}(x) / (2^j j! (m-2j)!).
HermiteExpansion monomial_to_hermite(int m);

/// E[X^d] for X ~ N(0, 1): (d-1)!! for even d, 0 for odd d.
double gaussian_moment(int d);

/// E[He_n(X1) He_m(X2)] for standard normals with correlation rho:
/// n! delta_nm rho^n. Only rho in {0, 1} arises in derivations because the
/// noise is i.i.d.; other values are supported for completeness.
double hermite_cross_expectation(int n, int m, double rho);

/// E[prod_q xi_{k-q}^{d_q}] for i.i.d. standard normal xi. Pairs are
/// (lag, exponent); lags must be distinct.
double expected_noise_product(std::span<const std::pair<int, int>> exponents);

}  // namespace narmax::hermite
