#pragma once

#include <cstddef>
#include <functional>
#include <stop_token>
#include <vector>

#include "narmax/model.hpp"
#include "narmax/polynomial.hpp"

namespace narmax {

struct DeriveOptions {
  std::size_t term_cap = kDefaultTermCap;
  /// Checked once per substitution step; a requested stop throws Cancelled.
  std::stop_token stop;
};

/// He_degree(xi_{k-lag}).
struct HermiteFactor {
  int lag = 1;
  int degree = 0;

  friend bool operator==(const HermiteFactor&, const HermiteFactor&) = default;
};

/// c * (input/output factors) * prod He_n(xi_{k-q}), one Hermite factor per
/// lag, zero-degree factors omitted.
struct HermiteTerm {
  double coefficient = 0.0;
  ExponentMap factors;
  std::vector<HermiteFactor> hermite;
};

/// Prediction model f-part rewritten multi-linearly in the Hermite basis of
/// the standard noise xi (after v = scale * xi + mean). The additive xi_k
/// stays implicit.
class HermiteForm {
 public:
  explicit HermiteForm(std::vector<HermiteTerm> terms) : terms_(std::move(terms)) {}

  const std::vector<HermiteTerm>& terms() const noexcept { return terms_; }

  /// `value_of` supplies inputs, outputs and the standard noise xi.
  double evaluate(const std::function<double(SignalRef)>& value_of) const;

  /// Expectation over the noise: every term with a nonzero-order Hermite
  /// factor is switched off, leaving a polynomial in inputs and outputs.
  Polynomial expectation() const;

 private:
  std::vector<HermiteTerm> terms_;
};

/// f with every noise factor v rewritten as scale * xi + mean, plus the
/// mean of the additive noise. Identity for standard noise.
Polynomial standardized_f(const NarmaxModel& model, std::size_t term_cap = kDefaultTermCap);

/// E over i.i.d. N(0,1) noise of a polynomial in standard noise, by the
/// product of Gaussian moments per term.
Polynomial expect_noise_moments(const Polynomial& standard_noise_poly);

HermiteForm to_hermite_form(const NarmaxModel& model, std::size_t term_cap = kDefaultTermCap);

/// True when every term is either free of outputs, or a bare linear output
/// term g_r * y_{k-r}.
bool is_simplified_class(const NarmaxModel& model);

/// Exact simulation model of a simplified-class model. Throws
/// NotSimplifiedClass otherwise.
SimModel derive_exact(const NarmaxModel& model, const DeriveOptions& options = {});

/// Replaces every y_{k-step} in `model` by shift(f, step) + v_{k-step},
/// where f is the f-part of `original`, the model before any substitution.
NarmaxModel substitute_once(const NarmaxModel& model, const NarmaxModel& original, int step,
                            const DeriveOptions& options = {});

/// First substitution of a model into itself.
inline NarmaxModel substitute_once(const NarmaxModel& model, int step, const DeriveOptions& options = {}) {
  return substitute_once(model, model, step, options);
}

/// l recursive substitutions (step i replaces outputs at lag exactly i),
/// then remaining outputs become simulated outputs and the noise is
/// integrated out term by term.
SimModel derive_l_approximate(const NarmaxModel& model, int l, const DeriveOptions& options = {});

/// Truncated expansion of the exact simulation response: the feedback terms
/// of f (those containing an output) carry one order each, the recursion is
/// expanded `depth` times, and everything beyond order `depth` together with
/// any leftover output factor is discarded before taking the expectation.
SimModel derive_truncated(const NarmaxModel& model, int depth, const DeriveOptions& options = {});

/// Conventional baseline: drop every term with a noise factor, keep the rest.
SimModel derive_noise_zeroed(const NarmaxModel& model);

}  // namespace narmax
