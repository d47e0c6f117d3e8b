#include "narmax/derive.hpp"

#include <map>
#include <string>
#include <utility>

#include "narmax/error.hpp"
#include "narmax/hermite.hpp"

namespace narmax {

namespace {

void check_stop(const DeriveOptions& options) {
  if (options.stop.stop_requested()) throw Error(ErrorCode::Cancelled, "derivation cancelled");
}

// Rewrites noise factors v as scale * xi + mean. Noise factors of the result
// denote the standard xi.
Polynomial standardize_noise(const Polynomial& p, const NoiseModel& noise, std::size_t term_cap) {
  if (noise.standard()) return p;
  std::map<int, Polynomial> replacements;
  for (const auto& t : p.terms()) {
    for (const auto& f : t.factors) {
      if (f.signal.kind != SignalKind::Noise || replacements.contains(f.signal.lag)) continue;
      replacements.emplace(f.signal.lag, Polynomial::signal(f.signal, 1, noise.scale) +
                                             Polynomial::constant(noise.mean));
    }
  }
  return substitute(
      p,
      [&](SignalRef ref) -> const Polynomial* {
        if (ref.kind != SignalKind::Noise) return nullptr;
        return &replacements.at(ref.lag);
      },
      term_cap);
}

// Graded polynomial: entry n holds the part of order n.
using Graded = std::vector<Polynomial>;

Graded graded_multiply(const Graded& a, const Graded& b, int max_order, std::size_t term_cap) {
  Graded out(max_order + 1);
  for (int i = 0; i < static_cast<int>(a.size()) && i <= max_order; ++i) {
    if (a[i].empty()) continue;
    for (int j = 0; j < static_cast<int>(b.size()) && i + j <= max_order; ++j) {
      if (b[j].empty()) continue;
      out[i + j] = out[i + j] + multiply(a[i], b[j], term_cap);
    }
  }
  return out;
}

Graded graded_power(const Graded& base, int exponent, int max_order, std::size_t term_cap) {
  Graded result(max_order + 1);
  result[0] = Polynomial::constant(1.0);
  for (int i = 0; i < exponent; ++i) result = graded_multiply(result, base, max_order, term_cap);
  return result;
}

}  // namespace

Polynomial standardized_f(const NarmaxModel& model, std::size_t term_cap) {
  if (model.noise().standard()) return model.f();
  return standardize_noise(model.f(), model.noise(), term_cap) +
         Polynomial::constant(model.noise().mean);
}

Polynomial expect_noise_moments(const Polynomial& p) {
  std::vector<LaggedMonomial> out;
  std::vector<std::pair<int, int>> exponents;
  for (const auto& t : p.terms()) {
    exponents.clear();
    ExponentMap kept;
    for (const auto& f : t.factors) {
      if (f.signal.kind == SignalKind::Noise) {
        exponents.emplace_back(f.signal.lag, f.exponent);
      } else {
        kept.push_back(f);
      }
    }
    const double moment = hermite::expected_noise_product(exponents);
    if (moment == 0.0) continue;
    out.push_back({t.coefficient * moment, std::move(kept)});
  }
  return Polynomial(std::move(out));
}

double HermiteForm::evaluate(const std::function<double(SignalRef)>& value_of) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coefficient;
    for (const auto& f : t.factors) v *= ipow(value_of(f.signal), f.exponent);
    for (const auto& h : t.hermite) v *= hermite::evaluate(h.degree, value_of(noise(h.lag)));
    sum += v;
  }
  return sum;
}

Polynomial HermiteForm::expectation() const {
  // E[He_n(xi)] = 0 for n > 0 and the lags within a term are independent,
  // so only terms made of He_0 factors survive.
  std::vector<LaggedMonomial> out;
  for (const auto& t : terms_) {
    if (t.hermite.empty()) out.push_back({t.coefficient, t.factors});
  }
  return Polynomial(std::move(out));
}

HermiteForm to_hermite_form(const NarmaxModel& model, std::size_t term_cap) {
  const Polynomial p = standardized_f(model, term_cap);
  std::vector<HermiteTerm> out;
  for (const auto& t : p.terms()) {
    ExponentMap deterministic;
    std::vector<std::pair<int, hermite::HermiteExpansion>> expansions;
    for (const auto& f : t.factors) {
      if (f.signal.kind == SignalKind::Noise) {
        expansions.emplace_back(f.signal.lag, hermite::monomial_to_hermite(f.exponent));
      } else {
        deterministic.push_back(f);
      }
    }
    // Multi-linear expansion over the Cartesian product of per-lag degrees.
    std::vector<HermiteTerm> partial{{t.coefficient, deterministic, {}}};
    for (const auto& [lag, expansion] : expansions) {
      std::vector<HermiteTerm> next;
      for (const auto& base : partial) {
        for (int n = 0; n <= expansion.degree(); ++n) {
          const double c = expansion.coefficient(n);
          if (c == 0.0) continue;
          HermiteTerm term = base;
          term.coefficient *= c;
          if (n > 0) term.hermite.push_back({lag, n});
          next.push_back(std::move(term));
        }
      }
      partial = std::move(next);
    }
    if (out.size() + partial.size() > term_cap) {
      throw Error(ErrorCode::TermBudgetExceeded, "Hermite form exceeds the term budget");
    }
    out.insert(out.end(), std::make_move_iterator(partial.begin()),
               std::make_move_iterator(partial.end()));
  }
  return HermiteForm(std::move(out));
}

bool is_simplified_class(const NarmaxModel& model) {
  for (const auto& t : model.f().terms()) {
    if (!t.contains(SignalKind::Output)) continue;
    if (t.factors.size() != 1 || t.factors.front().exponent != 1) return false;
  }
  return true;
}

SimModel derive_exact(const NarmaxModel& model, const DeriveOptions& options) {
  if (!is_simplified_class(model)) {
    throw Error(ErrorCode::NotSimplifiedClass,
                "exact derivation needs every output term to be a bare linear y[k-r]; "
                "use the l-approximate derivation instead");
  }
  check_stop(options);
  const Polynomial expected = to_hermite_form(model, options.term_cap).expectation();
  return SimModel(relabel(expected, SignalKind::Output, SignalKind::SimOutput), std::nullopt,
                  model.name());
}

NarmaxModel substitute_once(const NarmaxModel& model, const NarmaxModel& original, int step,
                            const DeriveOptions& options) {
  if (step < 1) throw Error(ErrorCode::InvalidArgument, "substitution step must be >= 1");
  const Polynomial& f = model.f();
  const SignalRef target = output(step);
  bool present = false;
  for (const auto& t : f.terms()) present = present || t.exponent_of(target) > 0;
  if (!present) return model;

  const Polynomial replacement = shift(original.f(), step) + Polynomial::signal(noise(step));
  Polynomial substituted = substitute(
      f, [&](SignalRef ref) { return ref == target ? &replacement : nullptr; }, options.term_cap);
  return NarmaxModel(std::move(substituted), model.noise(), model.name());
}

SimModel derive_l_approximate(const NarmaxModel& model, int l, const DeriveOptions& options) {
  if (l < 0) throw Error(ErrorCode::InvalidArgument, "approximation order must be >= 0");
  NarmaxModel expanded = model;
  for (int step = 1; step <= l; ++step) {
    check_stop(options);
    expanded = substitute_once(expanded, model, step, options);
  }
  check_stop(options);
  Polynomial p = standardized_f(expanded, options.term_cap);
  p = expect_noise_moments(relabel(p, SignalKind::Output, SignalKind::SimOutput));
  return SimModel(std::move(p), l, model.name());
}

SimModel derive_truncated(const NarmaxModel& model, int depth, const DeriveOptions& options) {
  if (depth < 0) throw Error(ErrorCode::InvalidArgument, "truncation depth must be >= 0");
  const auto has_output = [](const LaggedMonomial& t) { return t.contains(SignalKind::Output); };
  const Polynomial direct = filter_terms(model.f(), [&](const auto& t) { return !has_output(t); });
  const Polynomial feedback = filter_terms(model.f(), has_output);

  Graded grades(depth + 1);
  grades[0] = direct;
  if (depth >= 1) grades[1] = feedback;

  for (int step = 1; step <= depth; ++step) {
    check_stop(options);
    const SignalRef target = output(step);
    const Graded replacement{shift(direct, step) + Polynomial::signal(noise(step)),
                             shift(feedback, step)};
    std::map<std::pair<int, int>, Graded> powers;

    std::vector<std::vector<LaggedMonomial>> next(depth + 1);
    for (int g = 0; g <= depth; ++g) {
      for (const auto& t : grades[g].terms()) {
        const int a = t.exponent_of(target);
        if (a == 0) {
          next[g].push_back(t);
          continue;
        }
        ExponentMap rest;
        for (const auto& f : t.factors) {
          if (f.signal != target) rest.push_back(f);
        }
        const int room = depth - g;
        auto key = std::make_pair(a, room);
        auto it = powers.find(key);
        if (it == powers.end()) {
          it = powers.emplace(key, graded_power(replacement, a, room, options.term_cap)).first;
        }
        const Polynomial head = Polynomial::monomial(t.coefficient, rest);
        for (int j = 0; j <= room; ++j) {
          if (it->second[j].empty()) continue;
          const Polynomial piece = multiply(head, it->second[j], options.term_cap);
          next[g + j].insert(next[g + j].end(), piece.terms().begin(), piece.terms().end());
        }
      }
    }
    for (int g = 0; g <= depth; ++g) {
      grades[g] = Polynomial(std::move(next[g]));
      if (grades[g].size() > options.term_cap) {
        throw Error(ErrorCode::TermBudgetExceeded, "truncated expansion exceeds the term budget");
      }
    }
  }

  Polynomial total;
  for (const auto& g : grades) total = total + g;
  total = filter_terms(total, [&](const auto& t) { return !has_output(t); });
  const NarmaxModel closed(std::move(total), model.noise(), model.name());
  Polynomial p = expect_noise_moments(standardized_f(closed, options.term_cap));
  return SimModel(std::move(p), std::nullopt, model.name());
}

SimModel derive_noise_zeroed(const NarmaxModel& model) {
  const Polynomial kept =
      filter_terms(model.f(), [](const LaggedMonomial& t) { return !t.contains(SignalKind::Noise); });
  return SimModel(relabel(kept, SignalKind::Output, SignalKind::SimOutput), std::nullopt,
                  model.name());
}

}  // namespace narmax
