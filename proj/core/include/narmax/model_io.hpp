#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "narmax/model.hpp"

// Text format shared by prediction and simulation models:
//
//   # comment
//   @name example-2            optional metadata lines
//   @noise_scale 1             (prediction models only)
//   @noise_mean 0              (prediction models only)
//   @order 1                   (simulation models only)
//   y[k] = u[k] - 0.1*y[k-1]^2 + e[k]
//   ys[k] = u[k] - 0.1*ys[k-1]^2
//
// Signals are u (input), y (output), e (noise) and ys (simulated output),
// indexed as [k] or [k-<lag>]. Terms are products of numbers and signals
// joined by '*', with integer powers via '^'. A prediction model must end
// in the additive '+ e[k]'; a simulation model must not mention y or e.

namespace narmax {

struct PrintOptions {
  /// Significant digits for coefficients; 0 writes the shortest text that
  /// reads back to the identical double.
  int precision = 0;
};

struct ModelDocument {
  std::string source;
  std::variant<NarmaxModel, SimModel> model;

  bool is_simulation() const { return std::holds_alternative<SimModel>(model); }
};

/// Parses either kind of model, deciding by the left-hand side.
ModelDocument parse_document(std::string_view text);
NarmaxModel parse_model(std::string_view text);
SimModel parse_sim_model(std::string_view text);

std::string print_model(const NarmaxModel& model, const PrintOptions& options = {});
std::string print_sim_model(const SimModel& model, const PrintOptions& options = {});
/// Right-hand side only, e.g. "u[k] - 0.1*ys[k-1]^2".
std::string print_polynomial(const Polynomial& p, const PrintOptions& options = {});

/// Locale-independent number text (see PrintOptions::precision).
std::string format_double(double value, int precision = 0);

}  // namespace narmax
