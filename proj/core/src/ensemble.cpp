#include "narmax/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "narmax/error.hpp"
#include "narmax/simulate.hpp"

namespace narmax {

namespace {

std::vector<double> candidate_response(const Candidate& candidate, std::span<const double> u,
                                       const ExperimentSpec& spec) {
  if (!candidate.model) {
    if (candidate.sequence.size() != u.size()) {
      throw Error(ErrorCode::LengthMismatch,
                  "candidate '" + candidate.name + "' does not span one input period");
    }
    return candidate.sequence;
  }
  SimModelSimulator simulator(*candidate.model);
  std::vector<double> y(u.size());
  // In continuous mode the response is taken once the transient periods
  // have passed, aligned with the first retained period.
  const int runs = spec.mode == PeriodMode::Continuous ? spec.discard + 1 : 1;
  try {
    for (int r = 0; r < runs; ++r) simulator.run(u, y, static_cast<std::size_t>(r) * u.size());
  } catch (const NonFiniteError& e) {
    throw NonFiniteError("candidate '" + candidate.name + "': " + e.what(), e.index(), 0);
  }
  return y;
}

[[noreturn]] void rethrow_in_period(const NonFiniteError& e, std::size_t period) {
  throw NonFiniteError("period " + std::to_string(period) + ": " + e.what(), e.index(), period);
}

}  // namespace

Candidate Candidate::from_model(std::string name, SimModel model) {
  Candidate c;
  c.name = std::move(name);
  c.model = std::move(model);
  return c;
}

Candidate Candidate::fixed(std::string name, std::vector<double> sequence) {
  Candidate c;
  c.name = std::move(name);
  c.sequence = std::move(sequence);
  return c;
}

void ExperimentSpec::validate() const {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
  if (discard < 0) throw Error(ErrorCode::InvalidArgument, "discard must be >= 0");
  if (periods <= discard) throw Error(ErrorCode::InvalidArgument, "periods must exceed discard");
  if (!(input.stddev > 0.0)) throw Error(ErrorCode::InvalidArgument, "input stddev must be > 0");
  if (bins < 1) throw Error(ErrorCode::InvalidArgument, "bins must be >= 1");
}

double rms(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "rms: sequence lengths differ");
  if (a.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(a.size()));
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

Histogram histogram(std::span<const double> values, int bins) {
  if (bins < 1) throw Error(ErrorCode::InvalidArgument, "histogram needs at least one bin");
  Histogram h;
  h.counts.assign(bins, 0);
  double lo = 0.0;
  double hi = 0.0;
  if (!values.empty()) {
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    lo = *mn;
    hi = *mx;
  }
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / bins;
  h.edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) h.edges[i] = lo + width * i;
  h.edges.back() = hi;
  for (double v : values) {
    auto bin = static_cast<long>(std::floor((v - lo) / width));
    bin = std::clamp<long>(bin, 0, bins - 1);
    ++h.counts[bin];
  }
  return h;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::size_t> failed_at(threads, std::numeric_limits<std::size_t>::max());
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t i = w; i < count; i += threads) {
          try {
            fn(i);
          } catch (...) {
            errors[w] = std::current_exception();
            failed_at[w] = i;
            return;
          }
        }
      });
    }
  }
  const auto first = std::min_element(failed_at.begin(), failed_at.end()) - failed_at.begin();
  if (errors[first]) std::rethrow_exception(errors[first]);
}

EnsembleReport run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.samples);
  const auto p = static_cast<std::size_t>(spec.periods);
  const auto discard = static_cast<std::size_t>(spec.discard);
  const std::size_t retained = p - discard;

  EnsembleReport report;
  report.input = sample_noise(n, spec.base_seed);
  for (double& x : report.input) x = spec.input.mean + spec.input.stddev * x;

  std::vector<std::vector<double>> responses(spec.candidates.size());
  parallel_for(spec.candidates.size(), spec.threads, [&](std::size_t c) {
    responses[c] = candidate_response(spec.candidates[c], report.input, spec);
  });

  // rms_per_period[c][i] for retained period i (0-based among retained).
  std::vector<std::vector<double>> rms_per_period(spec.candidates.size(),
                                                  std::vector<double>(retained, 0.0));
  std::vector<double> sum(n, 0.0);
  auto score = [&](std::size_t retained_index, std::span<const double> y) {
    for (std::size_t c = 0; c < responses.size(); ++c) {
      rms_per_period[c][retained_index] = rms(y, responses[c]);
    }
  };

  if (spec.mode == PeriodMode::Continuous) {
    StochasticSimulator simulator(spec.model);
    std::vector<double> y(n);
    const std::size_t batch = std::max<std::size_t>(1, 4 * std::max(1u, spec.threads));
    std::vector<std::vector<double>> noise(batch);
    for (std::size_t start = 0; start < p; start += batch) {
      const std::size_t stop = std::min(p, start + batch);
      parallel_for(stop - start, spec.threads, [&](std::size_t j) {
        noise[j] = sample_noise(n, spec.base_seed + start + j + 1);
      });
      for (std::size_t i = start; i < stop; ++i) {
        try {
          simulator.run(report.input, noise[i - start], y, i * n);
        } catch (const NonFiniteError& e) {
          rethrow_in_period(e, i + 1);
        }
        if (i < discard) continue;
        for (std::size_t k = 0; k < n; ++k) sum[k] += y[k];
        score(i - discard, y);
      }
    }
  } else {
    std::vector<std::vector<double>> outputs(retained);
    parallel_for(retained, spec.threads, [&](std::size_t r) {
      const std::size_t period = r + discard + 1;
      const auto xi = sample_noise(n, spec.base_seed + period);
      outputs[r].resize(n);
      try {
        StochasticSimulator(spec.model).run(report.input, xi, outputs[r]);
      } catch (const NonFiniteError& e) {
        rethrow_in_period(e, period);
      }
      score(r, outputs[r]);
    });
    for (const auto& y : outputs) {
      for (std::size_t k = 0; k < n; ++k) sum[k] += y[k];
    }
  }

  report.ensemble_mean.resize(n);
  for (std::size_t k = 0; k < n; ++k) report.ensemble_mean[k] = sum[k] / static_cast<double>(retained);

  for (std::size_t c = 0; c < spec.candidates.size(); ++c) {
    CandidateReport cr;
    cr.name = spec.candidates[c].name;
    cr.response = std::move(responses[c]);
    std::vector<double> error(n);
    for (std::size_t k = 0; k < n; ++k) error[k] = report.ensemble_mean[k] - cr.response[k];
    cr.rms_vs_mean = rms(report.ensemble_mean, cr.response);
    cr.avg_rms_vs_noisy = mean(rms_per_period[c]);
    cr.mean_error = mean(error);
    cr.histogram = histogram(error, spec.bins);
    report.candidates.push_back(std::move(cr));
  }
  return report;
}

}  // namespace narmax
