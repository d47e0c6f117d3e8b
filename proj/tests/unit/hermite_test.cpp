#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "narmax/error.hpp"
#include "narmax/hermite.hpp"
#include "oracles.hpp"

namespace narmax {
namespace {

using namespace hermite;

TEST(HermitePoly, LowOrders) {
  EXPECT_EQ(hermite_poly(0), (std::vector<double>{1}));
  EXPECT_EQ(hermite_poly(1), (std::vector<double>{0, 1}));
  EXPECT_EQ(hermite_poly(2), (std::vector<double>{-1, 0, 1}));
  EXPECT_EQ(hermite_poly(3), (std::vector<double>{0, -3, 0, 1}));
  EXPECT_EQ(hermite_poly(4), (std::vector<double>{3, 0, -6, 0, 1}));
}

TEST(HermitePoly, MatchesExplicitSum) {
  for (int n = 0; n <= 20; ++n) {
    const auto coeffs = hermite_poly(n);
    ASSERT_EQ(coeffs.size(), static_cast<std::size_t>(n + 1));
    EXPECT_EQ(coeffs.back(), 1.0);
    for (double x : {-3.5, -1.0, 0.0, 0.3, 2.2}) {
      double horner = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) horner = horner * x + *it;
      EXPECT_TRUE(testing::close_rel(horner, testing::hermite_explicit(n, x), 1e-10)) << n << " " << x;
      EXPECT_TRUE(testing::close_rel(evaluate(n, x), testing::hermite_explicit(n, x), 1e-10)) << n << " " << x;
    }
  }
}

TEST(HermitePoly, DegreeCap) {
  EXPECT_NO_THROW(hermite_poly(kMaxDegree));
  try {
    (void)hermite_poly(kMaxDegree + 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegreeOverflow);
  }
  EXPECT_THROW(monomial_to_hermite(kMaxDegree + 1), Error);
  EXPECT_THROW(gaussian_moment(kMaxDegree + 1), Error);
}

TEST(Quadrature, FourIsOrthogonalToTwo) {
  const auto rule = testing::gauss_hermite_rule(64);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * evaluate(4, rule.nodes[i]) * evaluate(2, rule.nodes[i]);
  }
  EXPECT_NEAR(sum, 0.0, 1e-10);
}

TEST(Quadrature, Orthogonality) {
  const auto rule = testing::gauss_hermite_rule(64);
  for (int n = 0; n <= 10; ++n) {
    for (int m = 0; m <= 10; ++m) {
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * evaluate(n, rule.nodes[i]) * evaluate(m, rule.nodes[i]);
      }
      const double expected = n == m ? std::tgamma(n + 1.0) : 0.0;
      const double scale = std::sqrt(std::tgamma(n + 1.0) * std::tgamma(m + 1.0));
      EXPECT_NEAR(sum, expected, 1e-9 * std::max(1.0, scale)) << n << "," << m;
    }
  }
}

TEST(MonomialToHermite, LowOrders) {
  const auto two = monomial_to_hermite(2);
  EXPECT_EQ(two.coefficients, (std::vector<double>{1, 0, 1}));
  EXPECT_EQ(monomial_to_hermite(0).coefficients, (std::vector<double>{1}));
  EXPECT_EQ(monomial_to_hermite(3).coefficients, (std::vector<double>{0, 3, 0, 1}));
  EXPECT_EQ(monomial_to_hermite(4).coefficients, (std::vector<double>{3, 0, 6, 0, 1}));
}

TEST(MonomialToHermite, RoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-4.0, 4.0);
  for (int m = 0; m <= 12; ++m) {
    const auto expansion = monomial_to_hermite(m);
    for (int i = 0; i < 100; ++i) {
      const double x = dist(rng);
      double sum = 0.0;
      for (int n = 0; n <= expansion.degree(); ++n) sum += expansion.coefficient(n) * testing::hermite_explicit(n, x);
      EXPECT_TRUE(testing::close_rel(sum, std::pow(x, m), 1e-9)) << m << " " << x;
      EXPECT_TRUE(testing::close_rel(expansion.evaluate(x), std::pow(x, m), 1e-9));
    }
  }
}

TEST(MonomialToHermite, Parity) {
  for (int m = 0; m <= 30; ++m) {
    const auto expansion = monomial_to_hermite(m);
    for (int n = 0; n <= m; ++n) {
      if ((n - m) % 2 != 0) EXPECT_EQ(expansion.coefficient(n), 0.0) << m << " " << n;
      else EXPECT_GT(expansion.coefficient(n), 0.0);
    }
  }
}

TEST(GaussianMoment, ExactValues) {
  const double expected[] = {1, 0, 1, 0, 3, 0, 15, 0, 105};
  for (int d = 0; d <= 8; ++d) EXPECT_EQ(gaussian_moment(d), expected[d]) << d;
}

TEST(GaussianMoment, EqualsZerothHermiteCoefficient) {
  for (int d = 0; d <= 40; ++d) {
    EXPECT_EQ(gaussian_moment(d), monomial_to_hermite(d).coefficient(0)) << d;
    if (d % 2 == 0 && d <= 32) EXPECT_EQ(gaussian_moment(d), testing::double_factorial(d - 1)) << d;
  }
}

TEST(GaussianMoment, AgreesWithQuadrature) {
  const auto rule = testing::gauss_hermite_rule(64);
  for (int d = 0; d <= 20; ++d) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], d);
    const double scale = gaussian_moment(d % 2 == 0 ? d : d + 1);
    EXPECT_NEAR(sum, gaussian_moment(d), 1e-9 * std::max(1.0, scale)) << d;
  }
}

TEST(GaussianMoment, MonteCarlo) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> dist;
  const int n = 2'000'000;
  double s4 = 0, s6 = 0, s4sq = 0, s6sq = 0;
  for (int i = 0; i < n; ++i) {
    const double x = dist(rng);
    const double x4 = x * x * x * x;
    const double x6 = x4 * x * x;
    s4 += x4;
    s6 += x6;
    s4sq += x4 * x4;
    s6sq += x6 * x6;
  }
  const double m4 = s4 / n, m6 = s6 / n;
  const double se4 = std::sqrt((s4sq / n - m4 * m4) / n);
  const double se6 = std::sqrt((s6sq / n - m6 * m6) / n);
  EXPECT_NEAR(m4, gaussian_moment(4), 3 * se4);
  EXPECT_NEAR(m6, gaussian_moment(6), 3 * se6);
}

TEST(CrossExpectation, ClosedForm) {
  EXPECT_EQ(hermite_cross_expectation(2, 2, 1.0), 2.0);
  EXPECT_EQ(hermite_cross_expectation(2, 3, 0.7), 0.0);
  EXPECT_DOUBLE_EQ(hermite_cross_expectation(1, 1, 0.5), 0.5);
  EXPECT_EQ(hermite_cross_expectation(3, 3, 0.0), 0.0);
  EXPECT_EQ(hermite_cross_expectation(0, 0, 0.0), 1.0);
  EXPECT_THROW(hermite_cross_expectation(1, 1, 1.5), Error);
}

TEST(CrossExpectation, MonteCarloCorrelatedPairs) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> dist;
  const int n = 1'000'000;
  for (double rho : {0.5, -0.3, 0.9}) {
    for (auto [a, b] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}}) {
      double s = 0, sq = 0;
      for (int i = 0; i < n; ++i) {
        const double x1 = dist(rng);
        const double x2 = rho * x1 + std::sqrt(1 - rho * rho) * dist(rng);
        const double v = testing::hermite_explicit(a, x1) * testing::hermite_explicit(b, x2);
        s += v;
        sq += v * v;
      }
      const double m = s / n;
      const double se = std::sqrt((sq / n - m * m) / n);
      EXPECT_NEAR(m, hermite_cross_expectation(a, b, rho), 3.5 * se) << a << b << " rho=" << rho;
    }
  }
}

TEST(ExpectedNoiseProduct, Cases) {
  const std::vector<std::pair<int, int>> one{{1, 2}};
  const std::vector<std::pair<int, int>> odd{{1, 1}, {2, 2}};
  const std::vector<std::pair<int, int>> both{{1, 2}, {2, 4}};
  const std::vector<std::pair<int, int>> none;
  EXPECT_EQ(expected_noise_product(one), 1.0);
  EXPECT_EQ(expected_noise_product(odd), 0.0);
  EXPECT_EQ(expected_noise_product(both), 3.0);
  EXPECT_EQ(expected_noise_product(none), 1.0);
  const std::vector<std::pair<int, int>> repeated{{1, 2}, {1, 2}};
  EXPECT_THROW(expected_noise_product(repeated), Error);
}

TEST(ExpectedNoiseProduct, MonteCarloIndependentLags) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> dist;
  const int n = 2'000'000;
  double s = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double a = dist(rng), b = dist(rng);
    const double v = a * a * b * b * b * b;
    s += v;
    sq += v * v;
  }
  const double m = s / n;
  const double se = std::sqrt((sq / n - m * m) / n);
  const std::vector<std::pair<int, int>> both{{1, 2}, {2, 4}};
  EXPECT_NEAR(m, expected_noise_product(both), 3 * se);
}

}  // namespace
}  // namespace narmax
