#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "narmax/model.hpp"

namespace narmax {

/// Continuous: one long run, state carried across periods, so the first
/// `discard` periods hold the transient. Reset: every period starts from
/// zero initial conditions and periods are simulated independently.
enum class PeriodMode { Continuous, Reset };

struct InputSpec {
  double mean = 0.0;
  double stddev = 1.0;
};

/// A candidate simulation response: either a model to free-run, or a fixed
/// sequence of length `samples`.
struct Candidate {
  std::string name;
  std::optional<SimModel> model;
  std::vector<double> sequence;

  static Candidate from_model(std::string name, SimModel model);
  static Candidate fixed(std::string name, std::vector<double> sequence);
};

struct ExperimentSpec {
  NarmaxModel model;
  std::vector<Candidate> candidates;
  int periods = 256;
  int samples = 1000;
  int discard = 5;
  InputSpec input;
  std::uint64_t base_seed = 0;
  int bins = 50;
  PeriodMode mode = PeriodMode::Continuous;
  /// Worker threads; 0 picks hardware concurrency. Results do not depend on it.
  unsigned threads = 1;

  /// Throws InvalidArgument unless periods > discard >= 0, samples >= 1,
  /// stddev > 0 and bins >= 1.
  void validate() const;
};

struct Histogram {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<std::size_t> counts;
};

struct CandidateReport {
  std::string name;
  std::vector<double> response;  // y_s over one period
  double rms_vs_mean = 0.0;      // rms(ybar_s - y_s)
  double avg_rms_vs_noisy = 0.0; // mean over retained periods of rms(y^(i) - y_s)
  double mean_error = 0.0;       // mean(ybar_s - y_s)
  Histogram histogram;           // of ybar_s - y_s
};

struct EnsembleReport {
  std::vector<double> input;          // one input period
  std::vector<double> ensemble_mean;  // ybar_s
  std::vector<CandidateReport> candidates;
};

/// Input period from `base_seed`, noise for period i (1-based) from
/// `base_seed + i`; ybar_s averages periods discard+1..p in period order.
EnsembleReport run_experiment(const ExperimentSpec& spec);

double rms(std::span<const double> a, std::span<const double> b);
double mean(std::span<const double> values);

/// Equal-width bins over [min, max]; the last bin is closed. A zero-width
/// range is widened to [x - 0.5, x + 0.5].
Histogram histogram(std::span<const double> values, int bins);

/// Runs fn(0..count-1) on `threads` workers with a static interleaved split.
/// The exception of the lowest failing index is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace narmax
