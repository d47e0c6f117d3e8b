#pragma once

#include <optional>
#include <string>

#include "narmax/polynomial.hpp"

namespace narmax {

/// Maximum lags (n_u, n_y, n_xi) actually present in a model.
struct Lags {
  int input = 0;
  int output = 0;
  int noise = 0;

  friend bool operator==(const Lags&, const Lags&) = default;
};

/// Noise v_k = scale * xi_k + mean with xi_k ~ N(0, 1). Noise factors in a
/// model polynomial, and the additive noise term, are read as v.
struct NoiseModel {
  double scale = 1.0;
  double mean = 0.0;

  bool standard() const { return scale == 1.0 && mean == 0.0; }
  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

/// Prediction model y_k = f(u, y, v) + v_k. The additive v_k is implicit and
/// never stored in `f`. Output and noise factors must have lag >= 1, inputs
/// may have lag 0, and SimOutput factors are rejected.
class NarmaxModel {
 public:
  NarmaxModel() = default;
  explicit NarmaxModel(Polynomial f, NoiseModel noise = {}, std::string name = {});

  const Polynomial& f() const noexcept { return f_; }
  const NoiseModel& noise() const noexcept { return noise_; }
  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  Lags lags() const;
  /// No output factors at all (NFIR).
  bool is_nfir() const { return !f_.contains(SignalKind::Output); }

  friend bool operator==(const NarmaxModel&, const NarmaxModel&) = default;

 private:
  Polynomial f_;
  NoiseModel noise_;
  std::string name_;
};

/// Deterministic simulation model y_s,k = f_s(u, y_s). Only Input and
/// SimOutput factors are allowed; SimOutput lags are >= 1.
class SimModel {
 public:
  SimModel() = default;
  explicit SimModel(Polynomial f, std::optional<int> order = std::nullopt, std::string name = {});

  const Polynomial& f() const noexcept { return f_; }
  /// Approximation order l for l-approximate models; empty for exact ones.
  const std::optional<int>& order() const noexcept { return order_; }
  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  Lags lags() const;

  friend bool operator==(const SimModel&, const SimModel&) = default;

 private:
  Polynomial f_;
  std::optional<int> order_;
  std::string name_;
};

}  // namespace narmax
