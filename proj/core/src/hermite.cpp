#include "narmax/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "narmax/error.hpp"

namespace narmax::hermite {

namespace {

void check_degree(int n, const char* what) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": negative degree");
  if (n > kMaxDegree) {
    throw Error(ErrorCode::DegreeOverflow, std::string(what) + ": degree " + std::to_string(n) +
                                               " exceeds " + std::to_string(kMaxDegree));
  }
}

}  // namespace

std::vector<double> hermite_poly(int n) {
  check_degree(n, "hermite_poly");
  std::vector<double> previous{1.0};
  if (n == 0) return previous;
  std::vector<double> current{0.0, 1.0};
  for (int k = 1; k < n; ++k) {
    std::vector<double> next(k + 2, 0.0);
    for (int i = 0; i <= k; ++i) next[i + 1] += current[i];
    for (int i = 0; i < k; ++i) next[i] -= k * previous[i];
    previous = std::move(current);
    current = std::move(next);
  }
  return current;
}

double evaluate(int n, double x) {
  check_degree(n, "hermite::evaluate");
  if (n == 0) return 1.0;
  double previous = 1.0;
  double current = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * current - k * previous;
    previous = current;
    current = next;
  }
  return current;
}

double HermiteExpansion::evaluate(double x) const {
  if (coefficients.empty()) return 0.0;
  double sum = coefficients[0];
  double previous = 1.0;
  double current = x;
  for (std::size_t n = 1; n < coefficients.size(); ++n) {
    sum += coefficients[n] * current;
    const double next = x * current - static_cast<double>(n) * previous;
    previous = current;
    current = next;
  }
  return sum;
}

HermiteExpansion monomial_to_hermite(int m) {
  check_degree(m, "monomial_to_hermite");
  HermiteExpansion out;
  out.coefficients.assign(m + 1, 0.0);
  // c_j = m! / (2^j j! (m-2j)!), stepped by c_{j+1} = c_j (m-2j)(m-2j-1) / (2(j+1)).
  long double c = 1.0L;
  for (int j = 0; 2 * j <= m; ++j) {
    out.coefficients[m - 2 * j] = static_cast<double>(c);
    const long double top = static_cast<long double>(m - 2 * j) * (m - 2 * j - 1);
    c = c * top / (2.0L * (j + 1));
  }
  return out;
}

double gaussian_moment(int d) {
  check_degree(d, "gaussian_moment");
  if (d % 2 != 0) return 0.0;
  long double product = 1.0L;
  for (int k = d - 1; k > 1; k -= 2) product *= k;
  return static_cast<double>(product);
}

double hermite_cross_expectation(int n, int m, double rho) {
  check_degree(n, "hermite_cross_expectation");
  check_degree(m, "hermite_cross_expectation");
  if (!(std::abs(rho) <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "correlation must lie in [-1, 1]");
  }
  if (n != m) return 0.0;
  return std::tgamma(n + 1.0) * std::pow(rho, n);
}

double expected_noise_product(std::span<const std::pair<int, int>> exponents) {
  std::vector<int> lags;
  lags.reserve(exponents.size());
  double product = 1.0;
  for (const auto& [lag, d] : exponents) {
    lags.push_back(lag);
    product *= gaussian_moment(d);
  }
  std::sort(lags.begin(), lags.end());
  if (std::adjacent_find(lags.begin(), lags.end()) != lags.end()) {
    throw Error(ErrorCode::InvalidArgument, "expected_noise_product: repeated noise lag");
  }
  return product;
}

}  // namespace narmax::hermite
