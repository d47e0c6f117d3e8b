#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string_view>

#include <CLI11.hpp>

#include "narmax/derive.hpp"
#include "narmax/ensemble.hpp"
#include "narmax/error.hpp"
#include "narmax/model_io.hpp"
#include "narmax/report_io.hpp"
#include "narmax/simulate.hpp"

namespace narmax::cli {

namespace {

namespace fs = std::filesystem;

// Every command parses its files through this so parse errors carry the path.
ModelDocument load_document(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_document(text);
  } catch (const ParseError& e) {
    throw ParseError(e.code(), path + ":" + std::to_string(e.line()) + ":" +
                                   std::to_string(e.column()) + ": " + e.what(),
                     e.line(), e.column());
  }
}

NarmaxModel load_prediction_model(const std::string& path) {
  ModelDocument doc = load_document(path);
  if (doc.is_simulation()) {
    throw Error(ErrorCode::InvalidArgument, path + ": expected a prediction model 'y[k] = ... + e[k]'");
  }
  return std::get<NarmaxModel>(std::move(doc.model));
}

std::size_t term_budget() {
  const char* env = std::getenv("NARMAX_TERM_BUDGET");
  if (env == nullptr || *env == '\0') return kDefaultTermCap;
  std::size_t value = 0;
  const std::string_view text(env);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) {
    throw Error(ErrorCode::InvalidArgument, "NARMAX_TERM_BUDGET must be a positive integer");
  }
  return value;
}

std::vector<double> read_input_signal(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<double> values;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool first_data_line = true;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (const auto comma = line.rfind(','); comma != std::string_view::npos) line = line.substr(comma + 1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      if (first_data_line) {  // header row
        first_data_line = false;
        continue;
      }
      throw Error(ErrorCode::InvalidArgument,
                  path + ":" + std::to_string(line_no) + ": not a number: '" + std::string(line) + "'");
    }
    first_data_line = false;
    values.push_back(v);
    if (end == text.size()) break;
  }
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, path + ": no input samples");
  return values;
}

void emit(const std::string& content, const std::string& out_path, std::ostream& out) {
  if (out_path.empty() || out_path == "-") {
    out << content;
  } else {
    write_text_file(out_path, content);
  }
}

struct DeriveArgs {
  std::string model;
  std::string out;
  bool exact = false;
  bool noise_zero = false;
  std::optional<int> l;
  std::optional<int> truncate;
  int precision = 15;
};

int cmd_derive(const DeriveArgs& a, std::ostream& out) {
  const NarmaxModel model = load_prediction_model(a.model);
  DeriveOptions options;
  options.term_cap = term_budget();
  SimModel sim;
  if (a.exact) {
    sim = derive_exact(model, options);
  } else if (a.l) {
    sim = derive_l_approximate(model, *a.l, options);
  } else if (a.truncate) {
    sim = derive_truncated(model, *a.truncate, options);
  } else {
    sim = derive_noise_zeroed(model);
  }
  emit(print_sim_model(sim, PrintOptions{a.precision}), a.out, out);
  return kExitOk;
}

struct SimulateArgs {
  std::string model;
  std::string input;
  std::string out;
  std::uint64_t seed = 0;
  bool noise = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  ModelDocument doc = load_document(a.model);
  const std::vector<double> u = read_input_signal(a.input);
  std::vector<double> y;
  if (doc.is_simulation()) {
    if (a.noise) {
      throw Error(ErrorCode::InvalidArgument, "--noise needs a prediction model; simulation models are deterministic");
    }
    y = run_sim_model(std::get<SimModel>(doc.model), u);
  } else {
    const std::vector<double> xi =
        a.noise ? sample_noise(u.size(), a.seed) : std::vector<double>(u.size(), 0.0);
    y = run_stochastic(std::get<NarmaxModel>(doc.model), u, xi);
  }
  emit(series_csv(u, y), a.out, out);
  return kExitOk;
}

struct MonteCarloArgs {
  std::string model;
  std::vector<std::string> candidates;
  std::string out;
  std::string mode = "continuous";
  ExperimentSpec spec;
};

int cmd_montecarlo(MonteCarloArgs& a, std::ostream& out) {
  ExperimentSpec& spec = a.spec;
  spec.model = load_prediction_model(a.model);
  spec.mode = a.mode == "reset" ? PeriodMode::Reset : PeriodMode::Continuous;
  std::set<std::string> used;
  for (const auto& path : a.candidates) {
    ModelDocument doc = load_document(path);
    if (!doc.is_simulation()) {
      throw Error(ErrorCode::InvalidArgument, path + ": candidates must be simulation models 'ys[k] = ...'");
    }
    SimModel sim = std::get<SimModel>(std::move(doc.model));
    std::string name = sim.name().empty() ? fs::path(path).stem().string() : sim.name();
    std::string unique = name;
    for (int i = 2; used.contains(unique); ++i) unique = name + "_" + std::to_string(i);
    used.insert(unique);
    spec.candidates.push_back(Candidate::from_model(unique, std::move(sim)));
  }
  const EnsembleReport report = run_experiment(spec);
  write_report(a.out, spec, report);
  std::vector<RmsRow> rows;
  for (const auto& c : report.candidates) {
    rows.push_back({c.name, c.rms_vs_mean, c.avg_rms_vs_noisy, c.mean_error});
  }
  out << render_rms_table(rows);
  return kExitOk;
}

int cmd_report(const std::string& dir, std::ostream& out) {
  const std::string text = read_text_file(fs::path(dir) / "report.json");
  out << render_rms_table(rms_rows_from_json(text));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Derive, simulate and validate simulation models of polynomial NARMAX models", "narmax"};
  app.require_subcommand(1);

  DeriveArgs derive;
  auto* d = app.add_subcommand("derive", "Derive a simulation model from a prediction model");
  d->add_option("--model", derive.model, "Prediction model file")->required()->check(CLI::ExistingFile);
  d->add_option("--out", derive.out, "Output file (default: stdout)");
  auto* exact = d->add_flag("--exact", derive.exact, "Exact derivation (NFIR part plus linear output terms)");
  auto* l = d->add_option("--l", derive.l, "l-approximate derivation after l recursive substitutions")
                ->check(CLI::NonNegativeNumber);
  auto* truncate = d->add_option("--truncate", derive.truncate,
                                 "Truncated expansion after K recursive substitutions")
                       ->check(CLI::NonNegativeNumber);
  auto* zero = d->add_flag("--noise-zero", derive.noise_zero, "Drop every noise term (biased baseline)");
  d->add_option("--precision", derive.precision,
                "Significant digits for coefficients, 0 for shortest round trip")
      ->check(CLI::Range(0, 17));
  exact->excludes(l, truncate, zero);
  l->excludes(truncate, zero);
  truncate->excludes(zero);

  SimulateArgs simulate;
  auto* s = app.add_subcommand("simulate", "Run a prediction or simulation model on an input signal");
  s->add_option("--model", simulate.model, "Model file")->required()->check(CLI::ExistingFile);
  s->add_option("--input", simulate.input, "Input signal, one value per line (or last CSV column)")
      ->required()
      ->check(CLI::ExistingFile);
  s->add_option("--seed", simulate.seed, "Noise seed");
  s->add_flag("--noise", simulate.noise, "Draw a noise realization (prediction models only)");
  s->add_option("--out", simulate.out, "Output CSV (default: stdout)");

  MonteCarloArgs mc;
  auto* m = app.add_subcommand("montecarlo", "Compare simulation models against an ensemble average");
  m->add_option("--model", mc.model, "Prediction model file")->required()->check(CLI::ExistingFile);
  m->add_option("--candidates", mc.candidates, "Simulation model files")
      ->required()
      ->check(CLI::ExistingFile);
  m->add_option("--periods", mc.spec.periods, "Number of input periods p")->capture_default_str();
  m->add_option("--samples", mc.spec.samples, "Samples per period N")->capture_default_str();
  m->add_option("--discard", mc.spec.discard, "Leading periods discarded as transient")->capture_default_str();
  m->add_option("--seed", mc.spec.base_seed, "Base seed")->capture_default_str();
  m->add_option("--input-mean", mc.spec.input.mean, "Mean of the Gaussian input period")->capture_default_str();
  m->add_option("--input-std", mc.spec.input.stddev, "Standard deviation of the input period")
      ->capture_default_str();
  m->add_option("--bins", mc.spec.bins, "Histogram bins")->capture_default_str();
  m->add_option("--threads", mc.spec.threads, "Worker threads (0 = all cores); output does not depend on it")
      ->capture_default_str();
  m->add_option("--mode", mc.mode, "continuous (state carried across periods) or reset")
      ->check(CLI::IsMember({"continuous", "reset"}))
      ->capture_default_str();
  m->add_option("--out", mc.out, "Output directory")->required();

  std::string report_dir;
  auto* r = app.add_subcommand("report", "Print the RMS table of a montecarlo run");
  r->add_option("--in", report_dir, "Directory written by montecarlo")->required()->check(CLI::ExistingDirectory);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*d) {
      if (!derive.exact && !derive.l && !derive.truncate && !derive.noise_zero) {
        err << "narmax: error[InvalidArgument]: choose one of --exact, --l K, --truncate K, --noise-zero\n";
        return kExitError;
      }
      return cmd_derive(derive, out);
    }
    if (*s) return cmd_simulate(simulate, out);
    if (*m) return cmd_montecarlo(mc, out);
    if (*r) return cmd_report(report_dir, out);
  } catch (const Error& e) {
    err << "narmax: error[" << to_string(e.code()) << "]: " << e.what() << "\n";
    return e.code() == ErrorCode::NonFinite ? kExitNonFinite : kExitError;
  } catch (const std::exception& e) {
    err << "narmax: error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace narmax::cli
