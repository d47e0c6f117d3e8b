#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "narmax/ensemble.hpp"

// Serialization of simulation results. CSV files have a header row, '\n'
// line endings, a fixed column order and shortest round-trip numbers.
// Report JSON carries "schema": 1.

namespace narmax {

inline constexpr int kReportSchema = 1;

/// "k,u,y" with k starting at 1.
std::string series_csv(std::span<const double> u, std::span<const double> y);

/// "candidate,rms_vs_mean,avg_rms_vs_noisy,mean_error"
std::string rms_table_csv(const EnsembleReport& report);

/// "bin,lower,upper,count"
std::string histogram_csv(const Histogram& histogram);

/// "k,u,ybar" followed by one column per candidate response.
std::string ensemble_csv(const EnsembleReport& report);

std::string report_json(const ExperimentSpec& spec, const EnsembleReport& report);

struct RmsRow {
  std::string name;
  double rms_vs_mean = 0.0;
  double avg_rms_vs_noisy = 0.0;
  double mean_error = 0.0;
};

std::vector<RmsRow> rms_rows_from_json(std::string_view json);

/// Two-column RMS table in the layout of the ensemble study.
std::string render_rms_table(const std::vector<RmsRow>& rows);

/// File name used for a candidate's histogram, e.g. "histogram_exact.csv".
std::string histogram_file_name(std::string_view candidate);

/// Writes report.json, rms_table.csv, ensemble.csv and one histogram CSV
/// per candidate into `dir` (created if missing).
void write_report(const std::filesystem::path& dir, const ExperimentSpec& spec,
                  const EnsembleReport& report);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace narmax
