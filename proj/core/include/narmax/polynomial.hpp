#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace narmax {

/// Which signal a factor reads. SimOutput is the deterministic simulated
/// output y_s used by simulation models.
enum class SignalKind : std::uint8_t { Input, Output, SimOutput, Noise };

struct SignalRef {
  SignalKind kind = SignalKind::Input;
  int lag = 0;

  friend auto operator<=>(const SignalRef&, const SignalRef&) = default;
};

inline SignalRef input(int lag) { return {SignalKind::Input, lag}; }
inline SignalRef output(int lag) { return {SignalKind::Output, lag}; }
inline SignalRef sim_output(int lag) { return {SignalKind::SimOutput, lag}; }
inline SignalRef noise(int lag) { return {SignalKind::Noise, lag}; }

struct Factor {
  SignalRef signal;
  int exponent = 1;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Factors sorted by signal, one entry per signal, every exponent >= 1.
using ExponentMap = std::vector<Factor>;

/// Total order used for canonical term ordering: lexicographic over the
/// sorted factors, smaller signal first, higher exponent first, and a
/// monomial that is a strict prefix of another sorts after it (so the
/// constant term is always last).
bool monomial_less(const ExponentMap& a, const ExponentMap& b);

struct ExponentMapLess {
  bool operator()(const ExponentMap& a, const ExponentMap& b) const { return monomial_less(a, b); }
};

/// One product term c * prod(signal^exponent).
struct LaggedMonomial {
  double coefficient = 0.0;
  ExponentMap factors;

  int degree() const;
  int exponent_of(SignalRef signal) const;
  bool contains(SignalKind kind) const;
  /// Largest lag of the given kind, or -1 if absent.
  int max_lag(SignalKind kind) const;

  friend bool operator==(const LaggedMonomial&, const LaggedMonomial&) = default;
};

inline constexpr std::size_t kDefaultTermCap = 1'000'000;
inline constexpr double kMergeTolerance = 1e-12;

/// Sparse multivariate polynomial over lagged signals. Always held in
/// canonical form: like terms merged, sorted by monomial_less, and
/// coefficients below kMergeTolerance * max|c| removed.
class Polynomial {
 public:
  Polynomial() = default;
  /// Canonicalizes `terms`. Factor lists need not be sorted or merged.
  explicit Polynomial(std::vector<LaggedMonomial> terms);

  static Polynomial constant(double value);
  static Polynomial monomial(double coefficient, ExponentMap factors);
  static Polynomial signal(SignalRef ref, int exponent = 1, double coefficient = 1.0);

  const std::vector<LaggedMonomial>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  bool contains(SignalKind kind) const;
  int max_lag(SignalKind kind) const;
  int min_lag(SignalKind kind) const;
  int degree() const;
  /// Coefficient of the term with exactly these factors (0 if absent).
  double coefficient_of(const ExponentMap& factors) const;

  Polynomial operator-() const;
  Polynomial scaled(double factor) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<LaggedMonomial> terms_;
};

/// Merges like terms, sorts and drops near-zero coefficients.
Polynomial canonicalize(std::vector<LaggedMonomial> terms);

/// Distributive product. Throws TermBudgetExceeded when the number of
/// distinct monomials would exceed `term_cap`.
Polynomial multiply(const Polynomial& a, const Polynomial& b, std::size_t term_cap = kDefaultTermCap);

Polynomial power(const Polynomial& base, int exponent, std::size_t term_cap = kDefaultTermCap);

/// Adds `lag` to every signal lag (the discrete-time shift operator).
Polynomial shift(const Polynomial& p, int lag);

/// Replaces every factor of a selected signal by a polynomial raised to the
/// factor's exponent. `replacement` returns nullptr for signals to keep.
using Replacement = std::function<const Polynomial*(SignalRef)>;
Polynomial substitute(const Polynomial& p, const Replacement& replacement,
                      std::size_t term_cap = kDefaultTermCap);

/// Relabels every signal of kind `from` as kind `to`, keeping lags.
Polynomial relabel(const Polynomial& p, SignalKind from, SignalKind to);

/// Keeps only the terms for which `keep` returns true.
Polynomial filter_terms(const Polynomial& p, const std::function<bool(const LaggedMonomial&)>& keep);

/// Evaluates with a caller-supplied signal lookup.
double evaluate(const Polynomial& p, const std::function<double(SignalRef)>& value_of);

/// Integer power by squaring; exact for the small exponents used here.
double ipow(double base, int exponent);

std::string to_string(SignalKind kind);

}  // namespace narmax
