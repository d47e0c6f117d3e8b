#include "narmax/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "narmax/error.hpp"

namespace narmax {

namespace {

using TermMap = std::map<ExponentMap, double, ExponentMapLess>;

ExponentMap normalize_factors(ExponentMap factors) {
  std::sort(factors.begin(), factors.end(),
            [](const Factor& a, const Factor& b) { return a.signal < b.signal; });
  ExponentMap merged;
  merged.reserve(factors.size());
  for (const auto& f : factors) {
    if (f.exponent < 0) {
      throw Error(ErrorCode::InvalidArgument, "negative exponent in monomial");
    }
    if (f.exponent == 0) continue;
    if (!merged.empty() && merged.back().signal == f.signal) {
      merged.back().exponent += f.exponent;
    } else {
      merged.push_back(f);
    }
  }
  return merged;
}

// Multiplies two already-normalized factor lists (sorted merge).
ExponentMap merge_factors(const ExponentMap& a, const ExponentMap& b) {
  ExponentMap out;
  out.reserve(a.size() + b.size());
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->signal < ib->signal) {
      out.push_back(*ia++);
    } else if (ib->signal < ia->signal) {
      out.push_back(*ib++);
    } else {
      out.push_back({ia->signal, ia->exponent + ib->exponent});
      ++ia;
      ++ib;
    }
  }
  out.insert(out.end(), ia, a.end());
  out.insert(out.end(), ib, b.end());
  return out;
}

std::vector<LaggedMonomial> finish(TermMap&& merged) {
  double largest = 0.0;
  for (const auto& [factors, c] : merged) largest = std::max(largest, std::abs(c));
  const double cutoff = kMergeTolerance * largest;
  std::vector<LaggedMonomial> out;
  out.reserve(merged.size());
  for (auto& [factors, c] : merged) {
    if (c == 0.0 || std::abs(c) < cutoff) continue;
    out.push_back({c, factors});
  }
  return out;
}

void accumulate(TermMap& merged, ExponentMap factors, double c, std::size_t term_cap) {
  auto [it, inserted] = merged.try_emplace(std::move(factors), c);
  if (!inserted) {
    it->second += c;
  } else if (merged.size() > term_cap) {
    throw Error(ErrorCode::TermBudgetExceeded,
                "polynomial exceeds the term budget of " + std::to_string(term_cap) + " terms");
  }
}

}  // namespace

bool monomial_less(const ExponentMap& a, const ExponentMap& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].signal != b[i].signal) return a[i].signal < b[i].signal;
    if (a[i].exponent != b[i].exponent) return a[i].exponent > b[i].exponent;
  }
  return a.size() > b.size();
}

int LaggedMonomial::degree() const {
  int d = 0;
  for (const auto& f : factors) d += f.exponent;
  return d;
}

int LaggedMonomial::exponent_of(SignalRef signal) const {
  for (const auto& f : factors) {
    if (f.signal == signal) return f.exponent;
  }
  return 0;
}

bool LaggedMonomial::contains(SignalKind kind) const {
  return std::any_of(factors.begin(), factors.end(),
                     [kind](const Factor& f) { return f.signal.kind == kind; });
}

int LaggedMonomial::max_lag(SignalKind kind) const {
  int lag = -1;
  for (const auto& f : factors) {
    if (f.signal.kind == kind) lag = std::max(lag, f.signal.lag);
  }
  return lag;
}

Polynomial::Polynomial(std::vector<LaggedMonomial> terms) {
  TermMap merged;
  for (auto& t : terms) {
    if (!std::isfinite(t.coefficient)) {
      throw Error(ErrorCode::NonFinite, "non-finite polynomial coefficient");
    }
    auto factors = normalize_factors(std::move(t.factors));
    merged[std::move(factors)] += t.coefficient;
  }
  terms_ = finish(std::move(merged));
}

Polynomial Polynomial::constant(double value) {
  return Polynomial(std::vector<LaggedMonomial>{{value, {}}});
}

Polynomial Polynomial::monomial(double coefficient, ExponentMap factors) {
  return Polynomial(std::vector<LaggedMonomial>{{coefficient, std::move(factors)}});
}

Polynomial Polynomial::signal(SignalRef ref, int exponent, double coefficient) {
  return Polynomial(std::vector<LaggedMonomial>{{coefficient, {{ref, exponent}}}});
}

bool Polynomial::contains(SignalKind kind) const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [kind](const LaggedMonomial& t) { return t.contains(kind); });
}

int Polynomial::max_lag(SignalKind kind) const {
  int lag = -1;
  for (const auto& t : terms_) lag = std::max(lag, t.max_lag(kind));
  return lag;
}

int Polynomial::min_lag(SignalKind kind) const {
  int lag = -1;
  for (const auto& t : terms_) {
    for (const auto& f : t.factors) {
      if (f.signal.kind == kind && (lag < 0 || f.signal.lag < lag)) lag = f.signal.lag;
    }
  }
  return lag;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.degree());
  return d;
}

double Polynomial::coefficient_of(const ExponentMap& factors) const {
  const auto key = normalize_factors(factors);
  for (const auto& t : terms_) {
    if (t.factors == key) return t.coefficient;
  }
  return 0.0;
}

Polynomial Polynomial::operator-() const { return scaled(-1.0); }

Polynomial Polynomial::scaled(double factor) const {
  std::vector<LaggedMonomial> terms = terms_;
  for (auto& t : terms) t.coefficient *= factor;
  return Polynomial(std::move(terms));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<LaggedMonomial> terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return Polynomial(std::move(terms));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial canonicalize(std::vector<LaggedMonomial> terms) { return Polynomial(std::move(terms)); }

Polynomial multiply(const Polynomial& a, const Polynomial& b, std::size_t term_cap) {
  TermMap merged;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      accumulate(merged, merge_factors(ta.factors, tb.factors), ta.coefficient * tb.coefficient,
                 term_cap);
    }
  }
  return Polynomial(finish(std::move(merged)));
}

Polynomial power(const Polynomial& base, int exponent, std::size_t term_cap) {
  if (exponent < 0) throw Error(ErrorCode::InvalidArgument, "negative polynomial power");
  Polynomial result = Polynomial::constant(1.0);
  Polynomial square = base;
  while (exponent > 0) {
    if (exponent & 1) result = multiply(result, square, term_cap);
    exponent >>= 1;
    if (exponent > 0) square = multiply(square, square, term_cap);
  }
  return result;
}

Polynomial shift(const Polynomial& p, int lag) {
  if (lag < 0) throw Error(ErrorCode::InvalidArgument, "shift must be non-negative");
  if (lag == 0) return p;
  std::vector<LaggedMonomial> terms = p.terms();
  for (auto& t : terms) {
    for (auto& f : t.factors) f.signal.lag += lag;
  }
  return Polynomial(std::move(terms));
}

Polynomial substitute(const Polynomial& p, const Replacement& replacement, std::size_t term_cap) {
  std::map<std::pair<SignalRef, int>, Polynomial> powers;
  auto power_of = [&](SignalRef ref, const Polynomial& base, int exponent) -> const Polynomial& {
    auto key = std::make_pair(ref, exponent);
    auto it = powers.find(key);
    if (it == powers.end()) it = powers.emplace(key, power(base, exponent, term_cap)).first;
    return it->second;
  };

  TermMap merged;
  for (const auto& t : p.terms()) {
    ExponentMap kept;
    std::vector<const Polynomial*> expansions;
    for (const auto& f : t.factors) {
      if (const Polynomial* r = replacement(f.signal)) {
        expansions.push_back(&power_of(f.signal, *r, f.exponent));
      } else {
        kept.push_back(f);
      }
    }
    if (expansions.empty()) {
      accumulate(merged, t.factors, t.coefficient, term_cap);
      continue;
    }
    Polynomial product = Polynomial::monomial(t.coefficient, kept);
    for (const Polynomial* e : expansions) product = multiply(product, *e, term_cap);
    for (const auto& term : product.terms()) {
      accumulate(merged, term.factors, term.coefficient, term_cap);
    }
  }
  return Polynomial(finish(std::move(merged)));
}

Polynomial relabel(const Polynomial& p, SignalKind from, SignalKind to) {
  std::vector<LaggedMonomial> terms = p.terms();
  for (auto& t : terms) {
    for (auto& f : t.factors) {
      if (f.signal.kind == from) f.signal.kind = to;
    }
  }
  return Polynomial(std::move(terms));
}

Polynomial filter_terms(const Polynomial& p, const std::function<bool(const LaggedMonomial&)>& keep) {
  std::vector<LaggedMonomial> terms;
  for (const auto& t : p.terms()) {
    if (keep(t)) terms.push_back(t);
  }
  return Polynomial(std::move(terms));
}

double ipow(double base, int exponent) {
  double result = 1.0;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return result;
}

double evaluate(const Polynomial& p, const std::function<double(SignalRef)>& value_of) {
  double sum = 0.0;
  for (const auto& t : p.terms()) {
    double v = t.coefficient;
    for (const auto& f : t.factors) v *= ipow(value_of(f.signal), f.exponent);
    sum += v;
  }
  return sum;
}

std::string to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::Input: return "input";
    case SignalKind::Output: return "output";
    case SignalKind::SimOutput: return "sim_output";
    case SignalKind::Noise: return "noise";
  }
  return "unknown";
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TermBudgetExceeded: return "TermBudgetExceeded";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::NotSimplifiedClass: return "NotSimplifiedClass";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::MissingAdditiveNoise: return "MissingAdditiveNoise";
    case ErrorCode::IllegalLag: return "IllegalLag";
    case ErrorCode::Cancelled: return "Cancelled";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace narmax
