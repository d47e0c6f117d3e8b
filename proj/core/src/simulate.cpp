#include "narmax/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "narmax/error.hpp"

namespace narmax {

namespace {

enum Channel : std::uint8_t { kInput = 0, kOutput = 1, kSimOutput = 2, kNoise = 3 };

Channel channel_of(SignalKind kind) {
  switch (kind) {
    case SignalKind::Input: return kInput;
    case SignalKind::Output: return kOutput;
    case SignalKind::SimOutput: return kSimOutput;
    case SignalKind::Noise: return kNoise;
  }
  return kInput;
}

// Copies the last `history` samples of `tail` followed by `block` into `buffer`.
void splice(std::vector<double>& buffer, const std::vector<double>& tail,
            std::span<const double> block) {
  buffer.resize(tail.size() + block.size());
  std::copy(tail.begin(), tail.end(), buffer.begin());
  std::copy(block.begin(), block.end(), buffer.begin() + static_cast<std::ptrdiff_t>(tail.size()));
}

void keep_tail(std::vector<double>& tail, const std::vector<double>& buffer) {
  const std::size_t h = tail.size();
  std::copy(buffer.end() - static_cast<std::ptrdiff_t>(h), buffer.end(), tail.begin());
}

[[noreturn]] void non_finite(std::size_t index) {
  throw NonFiniteError("simulated output is not finite at sample " + std::to_string(index + 1) +
                           " (the model diverges for this input)",
                       index);
}

}  // namespace

CompiledPolynomial::CompiledPolynomial(const Polynomial& p) {
  for (const auto& t : p.terms()) {
    terms_.push_back({t.coefficient, static_cast<std::uint32_t>(entries_.size()),
                      static_cast<std::uint32_t>(t.factors.size())});
    for (const auto& f : t.factors) {
      entries_.push_back({channel_of(f.signal.kind), f.signal.lag, f.exponent});
      max_lag_ = std::max(max_lag_, f.signal.lag);
    }
  }
}

double CompiledPolynomial::evaluate(const Channels& channels, std::ptrdiff_t k) const {
  const double* data[4] = {channels.input, channels.output, channels.sim_output, channels.noise};
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coefficient;
    for (std::uint32_t i = t.first; i < t.first + t.count; ++i) {
      const Entry& e = entries_[i];
      const std::ptrdiff_t idx = k - e.lag;
      const double x = idx >= 0 ? data[e.channel][idx] : 0.0;
      v *= ipow(x, e.exponent);
    }
    sum += v;
  }
  return sum;
}

StochasticSimulator::StochasticSimulator(const NarmaxModel& model)
    : f_(model.f()),
      noise_(model.noise()),
      history_(f_.max_lag()),
      u_tail_(history_, 0.0),
      v_tail_(history_, 0.0),
      y_tail_(history_, 0.0) {}

void StochasticSimulator::run(std::span<const double> u, std::span<const double> xi,
                              std::span<double> y, std::size_t first_index) {
  if (u.size() != xi.size() || u.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "input, noise and output lengths differ");
  }
  std::vector<double> ub, vb, yb;
  splice(ub, u_tail_, u);
  std::vector<double> v(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) v[i] = noise_.scale * xi[i] + noise_.mean;
  splice(vb, v_tail_, v);
  yb.assign(ub.size(), 0.0);
  std::copy(y_tail_.begin(), y_tail_.end(), yb.begin());

  const CompiledPolynomial::Channels channels{ub.data(), yb.data(), nullptr, vb.data()};
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto k = static_cast<std::ptrdiff_t>(history_ + i);
    const double value = f_.evaluate(channels, k) + vb[k];
    if (!std::isfinite(value)) non_finite(first_index + i);
    yb[k] = value;
    y[i] = value;
  }
  if (history_ > 0 && !u.empty()) {
    keep_tail(u_tail_, ub);
    keep_tail(v_tail_, vb);
    keep_tail(y_tail_, yb);
  }
}

SimModelSimulator::SimModelSimulator(const SimModel& model)
    : f_(model.f()), history_(f_.max_lag()), u_tail_(history_, 0.0), y_tail_(history_, 0.0) {}

void SimModelSimulator::run(std::span<const double> u, std::span<double> y, std::size_t first_index) {
  if (u.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "input and output lengths differ");
  std::vector<double> ub, yb;
  splice(ub, u_tail_, u);
  yb.assign(ub.size(), 0.0);
  std::copy(y_tail_.begin(), y_tail_.end(), yb.begin());

  const CompiledPolynomial::Channels channels{ub.data(), nullptr, yb.data(), nullptr};
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto k = static_cast<std::ptrdiff_t>(history_ + i);
    const double value = f_.evaluate(channels, k);
    if (!std::isfinite(value)) non_finite(first_index + i);
    yb[k] = value;
    y[i] = value;
  }
  if (history_ > 0 && !u.empty()) {
    keep_tail(u_tail_, ub);
    keep_tail(y_tail_, yb);
  }
}

std::vector<double> run_stochastic(const NarmaxModel& model, std::span<const double> u,
                                   std::span<const double> xi) {
  std::vector<double> y(u.size());
  StochasticSimulator(model).run(u, xi, y);
  return y;
}

std::vector<double> run_sim_model(const SimModel& model, std::span<const double> u) {
  std::vector<double> y(u.size());
  SimModelSimulator(model).run(u, y);
  return y;
}

std::vector<double> sample_noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  constexpr double kScale = 0x1.0p-53;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; i += 2) {
    const double u1 = static_cast<double>((engine() >> 11) + 1) * kScale;
    const double u2 = static_cast<double>(engine() >> 11) * kScale;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[i] = r * std::cos(angle);
    if (i + 1 < n) out[i + 1] = r * std::sin(angle);
  }
  return out;
}

}  // namespace narmax
