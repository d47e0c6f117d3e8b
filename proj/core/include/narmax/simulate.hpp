#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "narmax/model.hpp"
#include "narmax/polynomial.hpp"

namespace narmax {

/// Flat evaluation form of a polynomial over four signal channels
/// (input, output, simulated output, noise). Reads before index 0 return 0.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const Polynomial& p);

  struct Channels {
    const double* input = nullptr;
    const double* output = nullptr;
    const double* sim_output = nullptr;
    const double* noise = nullptr;
  };

  /// Value at sample `k` (absolute index into every channel).
  double evaluate(const Channels& channels, std::ptrdiff_t k) const;
  int max_lag() const noexcept { return max_lag_; }

 private:
  struct Term {
    double coefficient;
    std::uint32_t first;
    std::uint32_t count;
  };
  struct Entry {
    std::uint8_t channel;
    int lag;
    int exponent;
  };
  std::vector<Term> terms_;
  std::vector<Entry> entries_;
  int max_lag_ = 0;
};

/// Steps a prediction model through consecutive blocks of samples, carrying
/// the lag history between calls. A fresh instance starts from zero initial
/// conditions.
class StochasticSimulator {
 public:
  explicit StochasticSimulator(const NarmaxModel& model);

  /// `xi` is standard normal noise; the model sees v = scale * xi + mean.
  /// `first_index` offsets indices reported in NonFinite errors.
  void run(std::span<const double> u, std::span<const double> xi, std::span<double> y,
           std::size_t first_index = 0);

 private:
  CompiledPolynomial f_;
  NoiseModel noise_;
  int history_;
  std::vector<double> u_tail_, v_tail_, y_tail_;
};

/// Same as StochasticSimulator for deterministic simulation models.
class SimModelSimulator {
 public:
  explicit SimModelSimulator(const SimModel& model);

  void run(std::span<const double> u, std::span<double> y, std::size_t first_index = 0);

 private:
  CompiledPolynomial f_;
  int history_;
  std::vector<double> u_tail_, y_tail_;
};

/// One realization of y_k = f(u, y, v) + v_k with zero initial conditions.
std::vector<double> run_stochastic(const NarmaxModel& model, std::span<const double> u,
                                   std::span<const double> xi);

/// Free-run of a simulation model with zero initial conditions.
std::vector<double> run_sim_model(const SimModel& model, std::span<const double> u);

/// n i.i.d. N(0,1) draws. Generator: std::mt19937_64 seeded with `seed`;
/// each pair of 64-bit outputs (a, b) gives u1 = ((a >> 11) + 1) 2^-53 and
/// u2 = (b >> 11) 2^-53, then the Box-Muller pair
/// sqrt(-2 ln u1) cos(2 pi u2), sqrt(-2 ln u1) sin(2 pi u2), in that order.
/// This algorithm is part of the reproducibility contract.
std::vector<double> sample_noise(std::size_t n, std::uint64_t seed);

}  // namespace narmax
