#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "narmax/model.hpp"
#include "narmax/polynomial.hpp"

namespace narmax::testing {

// Gauss-Hermite rule for the standard normal density, nodes and weights
// from the eigen-decomposition of the Jacobi matrix. Weights sum to 1.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_hermite_rule(int points);

// He_n(x) from the explicit alternating sum, not the recurrence.
double hermite_explicit(int n, double x);

// Double factorial product computed with integers, as a double.
double double_factorial(int n);

// |a - b| <= tol * max(1, |a|, |b|)
bool close_rel(double a, double b, double tol);

// Direct term-by-term evaluation over plain vectors; k is 0-based, reads at
// negative indices return 0.
double eval_terms(const Polynomial& p, std::span<const double> u, std::span<const double> y,
                  std::span<const double> ys, std::span<const double> v, std::ptrdiff_t k);

// Naive reference of y_k = f(u, y, v) + v_k with v = scale * xi + mean.
// The first initial.size() outputs are taken from `initial` instead.
std::vector<double> reference_stochastic(const NarmaxModel& model, std::span<const double> u,
                                         std::span<const double> xi, std::span<const double> initial = {});
std::vector<double> reference_sim(const SimModel& model, std::span<const double> u);

// Hand-written recursions for the quadratic feedback example
// y_k = u_k - 0.1 y_{k-1}^2 + xi_k and its simulation models.
std::vector<double> quadratic_example_stochastic(std::span<const double> u, std::span<const double> xi);
std::vector<double> quadratic_noise_zeroed(std::span<const double> u);
std::vector<double> quadratic_truncated_1(std::span<const double> u);
std::vector<double> quadratic_truncated_2(std::span<const double> u);
std::vector<double> quadratic_l1(std::span<const double> u);

std::vector<double> normal_vector(std::size_t n, std::mt19937_64& rng, double mean = 0.0,
                                  double stddev = 1.0);

// Random models for property tests.
class ModelGenerator {
 public:
  explicit ModelGenerator(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }
  int integer(int lo, int hi);
  double uniform(double lo, double hi);

  // Up to `max_terms` terms over the given kinds, lags in [min_lag, max_lag]
  // (input lags start at 0), degrees up to `max_degree`.
  Polynomial polynomial(std::span<const SignalKind> kinds, int max_terms, int max_degree, int max_lag,
                        double coef_range);

  // Terms in inputs and noise (degree <= 4, lags <= 3) plus linear output
  // terms whose gains sum below 0.9 in magnitude.
  NarmaxModel simplified_model(bool random_noise_model);

  // At most 3 terms over u, y, e with output degree <= 2, lags <= 2 and
  // small coefficients, so the free recursion stays bounded for |u| <= 1.
  NarmaxModel general_model();

 private:
  std::mt19937_64 rng_;
};

}  // namespace narmax::testing
