#include <homoglab/error.hpp>
#include <homoglab/report.hpp>

#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <sstream>

using namespace homoglab;
namespace fs = std::filesystem;

namespace {

SweepConfig tiny() {
  SweepConfig c;
  c.eps = {Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 16)};
  c.k = Rational(2);
  c.resolution = {2, 2, 16, 8};
  return c;
}

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("homoglab_report_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Report, EmptySweepIsHeaderOnly) {
  ConvergenceReport r;
  r.config = tiny();
  r.regime = {Regime::A, 1.0};
  EXPECT_EQ(report_csv(report_table(r)), std::string(csv_header) + "\n");
}

TEST(Report, RowsSlopesAndDeterminism) {
  ConvergenceReport a = run_sweep(tiny());
  ConvergenceReport b = run_sweep(tiny());
  std::string csv = report_csv(report_table(a));
  EXPECT_EQ(line_count(csv), 5u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), csv_header);
  EXPECT_EQ(csv, report_csv(report_table(b)));
  EXPECT_EQ(report_json(a), report_json(b));

  auto doc = nlohmann::json::parse(report_json(a));
  EXPECT_EQ(doc.at("records").size(), 4u);
  EXPECT_TRUE(doc.at("slopes").at("l2_error").is_number());
  EXPECT_EQ(std::stoull(doc.at("config_hash").get<std::string>(), nullptr, 16), a.config_hash);
  EXPECT_EQ(doc.at("regime").get<std::string>(), "A");
}

TEST(Report, TableSurvivesJson) {
  ConvergenceReport r = run_sweep(tiny());
  ReportTable direct = report_table(r);
  ReportTable back = report_table_from_json(report_json(r));
  ASSERT_EQ(back.rows.size(), direct.rows.size());
  EXPECT_EQ(report_csv(back), report_csv(direct));
}

TEST(Report, FailedRowsPrintNan) {
  SweepConfig c = tiny();
  c.solver.max_iterations = 0;
  std::string csv = report_csv(report_table(run_sweep(c)));
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) EXPECT_NE(line.find("nan"), std::string::npos) << line;
}

TEST(Report, SvgIsLabelledAndDropsNonPositivePoints) {
  std::string svg = loglog_svg("decay", "eps", "l2 error",
                               {{"l2", {0.25, 0.125, 0.0625}, {1e-2, 0.0, 2e-3}}, {"ref", {0.25, 0.0625}, {1e-2, 6e-4}}});
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find(">eps<"), std::string::npos);
  EXPECT_NE(svg.find(">l2 error<"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
  EXPECT_EQ(svg.find("inf"), std::string::npos);
}

TEST(Report, EmitWritesAllArtifacts) {
  fs::path dir = scratch("emit");
  ConvergenceReport r = run_sweep(tiny());
  auto files = emit_report(r, dir);
  for (const char* name : {"sweep.csv", "report.json", "l2_error.svg", "raw_jump.svg", "trace_gap.svg"})
    EXPECT_TRUE(fs::exists(dir / name)) << name;
  EXPECT_EQ(files.size(), 5u);
  EXPECT_EQ(read_text_file(dir / "sweep.csv"), report_csv(report_table(r)));

  fs::path csv_only = scratch("csv");
  EXPECT_EQ(emit_report(r, csv_only, ReportFormat::csv).size(), 1u);
  fs::remove_all(dir);
  fs::remove_all(csv_only);
}

TEST(Report, IoErrors) {
  fs::path blocker = scratch("blocker");
  write_text_file(blocker, "x");
  EXPECT_THROW(write_text_file(blocker / "nested.txt", "y"), IoFailure);
  EXPECT_THROW(read_text_file(blocker / "missing"), IoFailure);
  EXPECT_THROW(report_table_from_json("{\"format\": 3}"), IoFailure);
  fs::remove(blocker);
}
