#include "narmax/model.hpp"

#include <algorithm>
#include <cmath>

#include "narmax/error.hpp"

namespace narmax {

namespace {

Lags lags_of(const Polynomial& f, SignalKind output_kind) {
  return {std::max(0, f.max_lag(SignalKind::Input)), std::max(0, f.max_lag(output_kind)),
          std::max(0, f.max_lag(SignalKind::Noise))};
}

}  // namespace

NarmaxModel::NarmaxModel(Polynomial f, NoiseModel noise, std::string name)
    : f_(std::move(f)), noise_(noise), name_(std::move(name)) {
  if (!(noise_.scale > 0.0) || !std::isfinite(noise_.scale) || !std::isfinite(noise_.mean)) {
    throw Error(ErrorCode::InvalidArgument, "noise scale must be positive and finite");
  }
  for (const auto& t : f_.terms()) {
    for (const auto& factor : t.factors) {
      const auto [kind, lag] = factor.signal;
      if (kind == SignalKind::SimOutput) {
        throw Error(ErrorCode::InvalidArgument, "prediction models cannot reference simulated outputs");
      }
      if (lag < 0) throw Error(ErrorCode::IllegalLag, "negative lag");
      if (lag == 0 && kind != SignalKind::Input) {
        throw Error(ErrorCode::IllegalLag,
                    "output and noise factors need lag >= 1 inside model terms");
      }
    }
  }
}

Lags NarmaxModel::lags() const { return lags_of(f_, SignalKind::Output); }

SimModel::SimModel(Polynomial f, std::optional<int> order, std::string name)
    : f_(std::move(f)), order_(order), name_(std::move(name)) {
  if (order_ && *order_ < 0) throw Error(ErrorCode::InvalidArgument, "negative approximation order");
  for (const auto& t : f_.terms()) {
    for (const auto& factor : t.factors) {
      const auto [kind, lag] = factor.signal;
      if (kind == SignalKind::Output || kind == SignalKind::Noise) {
        throw Error(ErrorCode::InvalidArgument,
                    "simulation models may only reference inputs and simulated outputs");
      }
      if (lag < 0) throw Error(ErrorCode::IllegalLag, "negative lag");
      if (lag == 0 && kind == SignalKind::SimOutput) {
        throw Error(ErrorCode::IllegalLag, "simulated output factors need lag >= 1");
      }
    }
  }
}

Lags SimModel::lags() const { return lags_of(f_, SignalKind::SimOutput); }

}  // namespace narmax
