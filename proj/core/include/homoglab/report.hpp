#pragma once

#include "homoglab/convergence_lab.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace homoglab {

/// Flat per-eps view of a report: what the CSV and the plots show. It can be
/// rebuilt from a report JSON, so plots can be re-rendered without re-solving.
struct ReportRow {
  std::string eps;
  double eps_value;
  std::string k;
  std::string gamma;
  std::string regime;
  bool ok;
  double l2_error, grad_norm, weighted_jump, raw_jump, trace_gap_minus, trace_gap_plus;
};

struct ReportTable {
  std::vector<ReportRow> rows;
};

ReportTable report_table(const ConvergenceReport& report);
ReportTable report_table_from_json(const std::string& json_text);

inline constexpr const char* csv_header =
    "eps,k,gamma,regime,l2_error,grad_norm,weighted_jump,raw_jump,trace_gap_minus,trace_gap_plus";

std::string report_csv(const ReportTable& table);
std::string report_json(const ConvergenceReport& report);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Log-log line plot with decade ticks and axis labels. Non-positive points
/// are dropped.
std::string loglog_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<PlotSeries>& series);

enum class ReportFormat { csv, json, svg, all };

/// Writes sweep.csv, report.json and l2_error.svg / raw_jump.svg /
/// trace_gap.svg under `dir` (created if needed). Throws IoFailure.
std::vector<std::filesystem::path> emit_report(const ConvergenceReport& report, const std::filesystem::path& dir,
                                               ReportFormat format = ReportFormat::all);

/// CSV and SVG files from a table (used when re-rendering from JSON).
std::vector<std::filesystem::path> emit_table(const ReportTable& table, const std::filesystem::path& dir,
                                              ReportFormat format = ReportFormat::all);

/// Writes `text` to `path`, throwing IoFailure on any error.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace homoglab
