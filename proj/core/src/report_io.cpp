#include "narmax/report_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "narmax/error.hpp"
#include "narmax/model_io.hpp"

namespace narmax {

namespace {

using nlohmann::json;

std::string fixed4(double v) {
  std::array<char, 64> buffer{};
  const auto [ptr, ec] =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), v, std::chars_format::fixed, 4);
  if (ec != std::errc()) return "nan";
  return std::string(buffer.data(), ptr);
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

const char* mode_name(PeriodMode mode) {
  return mode == PeriodMode::Continuous ? "continuous" : "reset";
}

}  // namespace

std::string series_csv(std::span<const double> u, std::span<const double> y) {
  if (u.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "series lengths differ");
  std::string out = "k,u,y\n";
  for (std::size_t i = 0; i < u.size(); ++i) {
    out += std::to_string(i + 1) + "," + format_double(u[i]) + "," + format_double(y[i]) + "\n";
  }
  return out;
}

std::string rms_table_csv(const EnsembleReport& report) {
  std::string out = "candidate,rms_vs_mean,avg_rms_vs_noisy,mean_error\n";
  for (const auto& c : report.candidates) {
    out += c.name + "," + format_double(c.rms_vs_mean) + "," + format_double(c.avg_rms_vs_noisy) +
           "," + format_double(c.mean_error) + "\n";
  }
  return out;
}

std::string histogram_csv(const Histogram& histogram) {
  std::string out = "bin,lower,upper,count\n";
  for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
    out += std::to_string(i) + "," + format_double(histogram.edges[i]) + "," +
           format_double(histogram.edges[i + 1]) + "," + std::to_string(histogram.counts[i]) + "\n";
  }
  return out;
}

std::string ensemble_csv(const EnsembleReport& report) {
  std::string out = "k,u,ybar";
  for (const auto& c : report.candidates) out += "," + c.name;
  out += "\n";
  for (std::size_t k = 0; k < report.ensemble_mean.size(); ++k) {
    out += std::to_string(k + 1) + "," + format_double(report.input[k]) + "," +
           format_double(report.ensemble_mean[k]);
    for (const auto& c : report.candidates) out += "," + format_double(c.response[k]);
    out += "\n";
  }
  return out;
}

std::string report_json(const ExperimentSpec& spec, const EnsembleReport& report) {
  json doc;
  doc["schema"] = kReportSchema;
  doc["spec"] = {
      {"model", print_model(spec.model)},
      {"periods", spec.periods},
      {"samples", spec.samples},
      {"discard", spec.discard},
      {"seed", spec.base_seed},
      {"input_mean", spec.input.mean},
      {"input_std", spec.input.stddev},
      {"bins", spec.bins},
      {"mode", mode_name(spec.mode)},
  };
  json candidates = json::array();
  for (std::size_t i = 0; i < report.candidates.size(); ++i) {
    const auto& c = report.candidates[i];
    json entry;
    entry["name"] = c.name;
    const auto& source = spec.candidates[i];
    entry["model"] = source.model ? json(print_sim_model(*source.model)) : json(nullptr);
    entry["rms_vs_mean"] = c.rms_vs_mean;
    entry["avg_rms_vs_noisy"] = c.avg_rms_vs_noisy;
    entry["mean_error"] = c.mean_error;
    entry["histogram"] = {{"edges", c.histogram.edges}, {"counts", c.histogram.counts}};
    candidates.push_back(std::move(entry));
  }
  doc["candidates"] = std::move(candidates);
  return doc.dump(2) + "\n";
}

std::vector<RmsRow> rms_rows_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, std::string("report is not valid JSON: ") + e.what());
  }
  if (!doc.contains("schema") || doc["schema"] != kReportSchema) {
    throw Error(ErrorCode::Io, "unsupported report schema (expected " + std::to_string(kReportSchema) + ")");
  }
  std::vector<RmsRow> rows;
  try {
    for (const auto& c : doc.at("candidates")) {
      rows.push_back({c.at("name").get<std::string>(), c.at("rms_vs_mean").get<double>(),
                      c.at("avg_rms_vs_noisy").get<double>(), c.at("mean_error").get<double>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, std::string("malformed report: ") + e.what());
  }
  return rows;
}

std::string render_rms_table(const std::vector<RmsRow>& rows) {
  std::size_t name_width = std::string("candidate").size();
  for (const auto& r : rows) name_width = std::max(name_width, r.name.size() + 11);
  const std::string col1 = "rms(ybar_s - E[y])";
  const std::string col2 = "avg_i(rms(y^(i) - E[y]))";
  std::string out = pad("", name_width) + " | " + col1 + " | " + col2 + "\n";
  out += std::string(name_width + 3 + col1.size() + 3 + col2.size(), '-') + "\n";
  for (const auto& r : rows) {
    out += pad("E[y] ~ " + r.name, name_width) + " | " + pad(fixed4(r.rms_vs_mean), col1.size()) +
           " | " + fixed4(r.avg_rms_vs_noisy) + "\n";
  }
  return out;
}

std::string histogram_file_name(std::string_view candidate) {
  std::string safe;
  for (char c : candidate) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    safe += ok ? c : '_';
  }
  return "histogram_" + safe + ".csv";
}

void write_report(const std::filesystem::path& dir, const ExperimentSpec& spec,
                  const EnsembleReport& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  write_text_file(dir / "report.json", report_json(spec, report));
  write_text_file(dir / "rms_table.csv", rms_table_csv(report));
  write_text_file(dir / "ensemble.csv", ensemble_csv(report));
  for (const auto& c : report.candidates) {
    write_text_file(dir / histogram_file_name(c.name), histogram_csv(c.histogram));
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace narmax
