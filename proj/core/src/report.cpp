#include "homoglab/report.hpp"

#include "homoglab/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace homoglab {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

nlohmann::json nullable(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

double from_nullable(const nlohmann::json& j) { return j.is_null() ? nan_value : j.get<double>(); }

nlohmann::json solve_json(const SolveReport& r) { return nlohmann::json::parse(solve_report_to_json(r)); }

std::string hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

ReportTable report_table(const ConvergenceReport& report) {
  ReportTable t;
  for (const EpsRecord& r : report.records) {
    ReportRow row{r.eps.to_string(), r.eps.to_double(), report.config.k.to_string(), report.config.gamma.to_string(),
                  to_string(report.regime.regime), r.ok, nan_value, nan_value, nan_value, nan_value, nan_value,
                  nan_value};
    if (r.ok) {
      row.l2_error = r.l2_error;
      row.grad_norm = r.grad_norm;
      row.weighted_jump = r.weighted_jump;
      row.raw_jump = r.raw_jump;
      row.trace_gap_minus = r.trace_gap_minus;
      row.trace_gap_plus = r.trace_gap_plus;
    }
    t.rows.push_back(row);
  }
  return t;
}

std::string report_csv(const ReportTable& table) {
  std::ostringstream os;
  os << csv_header << '\n';
  for (const ReportRow& r : table.rows) {
    os << r.eps << ',' << r.k << ',' << r.gamma << ',' << r.regime << ',' << num(r.l2_error) << ','
       << num(r.grad_norm) << ',' << num(r.weighted_jump) << ',' << num(r.raw_jump) << ','
       << num(r.trace_gap_minus) << ',' << num(r.trace_gap_plus) << '\n';
  }
  return os.str();
}

std::string report_json(const ConvergenceReport& rep) {
  nlohmann::json doc;
  doc["format"] = "homoglab.report";
  doc["config"] = describe(rep.config);
  doc["config_hash"] = hex(rep.config_hash);
  doc["k"] = rep.config.k.to_string();
  doc["gamma"] = rep.config.gamma.to_string();
  doc["regime"] = to_string(rep.regime.regime);
  doc["G"] = rep.regime.G ? nlohmann::json(*rep.regime.G) : nlohmann::json(nullptr);
  const Matrix2& d = rep.d0.entries;
  doc["D0"] = {{d(0, 0), d(0, 1)}, {d(1, 0), d(1, 1)}};
  doc["cell_resolution"] = rep.d0.resolution;
  doc["limit"] = {{"ok", rep.limit_ok}, {"failure", rep.limit_failure}, {"solve", solve_json(rep.limit_solve)}};
  nlohmann::json records = nlohmann::json::array();
  for (const EpsRecord& r : rep.records) {
    nlohmann::json j;
    j["eps"] = r.eps.to_string();
    j["ok"] = r.ok;
    j["failure"] = r.failure;
    j["vertices"] = r.vertices;
    j["l2_error"] = nullable(r.l2_error);
    j["grad_norm"] = nullable(r.grad_norm);
    j["weighted_jump"] = nullable(r.weighted_jump);
    j["raw_jump"] = nullable(r.raw_jump);
    j["trace_gap_minus"] = nullable(r.trace_gap_minus);
    j["trace_gap_plus"] = nullable(r.trace_gap_plus);
    nlohmann::json gaps = nlohmann::json::array();
    for (int f = 0; f < pairing_field_count; ++f)
      gaps.push_back({{"field", pairing_field_name(f)},
                      {"minus", nullable(r.weak_pairing_gaps[2 * f])},
                      {"plus", nullable(r.weak_pairing_gaps[2 * f + 1])}});
    j["weak_pairing_gaps"] = gaps;
    j["solve"] = solve_json(r.solve);
    records.push_back(j);
  }
  doc["records"] = records;
  doc["slopes"] = {{"l2_error", nullable(rep.slopes.l2_error)},
                   {"raw_jump", nullable(rep.slopes.raw_jump)},
                   {"trace_gap_minus", nullable(rep.slopes.trace_gap_minus)},
                   {"trace_gap_plus", nullable(rep.slopes.trace_gap_plus)}};
  return doc.dump(2);
}

ReportTable report_table_from_json(const std::string& text) {
  try {
    auto doc = nlohmann::json::parse(text);
    if (doc.at("format") != "homoglab.report") throw IoFailure("not a report document");
    ReportTable t;
    for (const auto& j : doc.at("records")) {
      const std::string eps = j.at("eps").get<std::string>();
      ReportRow row{eps,
                    Rational::parse(eps).to_double(),
                    doc.at("k").get<std::string>(),
                    doc.at("gamma").get<std::string>(),
                    doc.at("regime").get<std::string>(),
                    j.at("ok").get<bool>(),
                    from_nullable(j.at("l2_error")),
                    from_nullable(j.at("grad_norm")),
                    from_nullable(j.at("weighted_jump")),
                    from_nullable(j.at("raw_jump")),
                    from_nullable(j.at("trace_gap_minus")),
                    from_nullable(j.at("trace_gap_plus"))};
      if (!row.ok)
        row.l2_error = row.grad_norm = row.weighted_jump = row.raw_jump = row.trace_gap_minus =
            row.trace_gap_plus = nan_value;
      t.rows.push_back(row);
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw IoFailure(std::string("malformed report JSON: ") + e.what());
  } catch (const InputError& e) {
    throw IoFailure(std::string("malformed report JSON: ") + e.what());
  }
}

std::string loglog_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<PlotSeries>& series) {
  const double width = 640, height = 420, left = 80, right = 150, top = 40, bottom = 60;
  const double pw = width - left - right;
  const double ph = height - top - bottom;

  double lx0 = std::numeric_limits<double>::infinity(), lx1 = -lx0, ly0 = lx0, ly1 = -lx0;
  for (const PlotSeries& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0) || !std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      lx0 = std::min(lx0, std::log10(s.x[i]));
      lx1 = std::max(lx1, std::log10(s.x[i]));
      ly0 = std::min(ly0, std::log10(s.y[i]));
      ly1 = std::max(ly1, std::log10(s.y[i]));
    }
  if (!std::isfinite(lx0)) {
    lx0 = -2;
    lx1 = 0;
    ly0 = -2;
    ly1 = 0;
  }
  lx0 = std::floor(lx0);
  lx1 = std::max(std::ceil(lx1), lx0 + 1);
  ly0 = std::floor(ly0);
  ly1 = std::max(std::ceil(ly1), ly0 + 1);
  auto px = [&](double lx) { return left + (lx - lx0) / (lx1 - lx0) * pw; };
  auto py = [&](double ly) { return top + (ly1 - ly) / (ly1 - ly0) * ph; };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
     << escape_xml(title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int e = static_cast<int>(lx0); e <= static_cast<int>(lx1); ++e) {
    double x = px(e);
    os << "<line x1=\"" << fixed(x) << "\" y1=\"" << top << "\" x2=\"" << fixed(x) << "\" y2=\"" << top + ph
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << fixed(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">1e" << e
       << "</text>\n";
  }
  for (int e = static_cast<int>(ly0); e <= static_cast<int>(ly1); ++e) {
    double y = py(e);
    os << "<line x1=\"" << left << "\" y1=\"" << fixed(y) << "\" x2=\"" << left + pw << "\" y2=\"" << fixed(y)
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << fixed(y + 4) << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  os << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\">"
     << escape_xml(x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << fixed(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << fixed(top + ph / 2) << ")\">" << escape_xml(y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % 6];
    std::string points;
    for (std::size_t i = 0; i < std::min(series[s].x.size(), series[s].y.size()); ++i) {
      double xv = series[s].x[i], yv = series[s].y[i];
      if (!(xv > 0.0) || !(yv > 0.0) || !std::isfinite(xv) || !std::isfinite(yv)) continue;
      double x = px(std::log10(xv)), y = py(std::log10(yv));
      points += fixed(x) + "," + fixed(y) + " ";
      os << "<circle cx=\"" << fixed(x) << "\" cy=\"" << fixed(y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    if (!points.empty())
      os << "<polyline points=\"" << points << "\" fill=\"none\" stroke=\"" << color << "\"/>\n";
    double ly = top + 16 + 18.0 * static_cast<double>(s);
    os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << fixed(ly) << "\" x2=\"" << left + pw + 32 << "\" y2=\""
       << fixed(ly) << "\" stroke=\"" << color << "\"/>\n";
    os << "<text x=\"" << left + pw + 38 << "\" y=\"" << fixed(ly + 4) << "\">" << escape_xml(series[s].name)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw IoFailure("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoFailure("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
}

}  // namespace

std::vector<std::filesystem::path> emit_table(const ReportTable& table, const std::filesystem::path& dir,
                                              ReportFormat format) {
  ensure_dir(dir);
  std::vector<std::filesystem::path> written;
  if (format == ReportFormat::csv || format == ReportFormat::all) {
    written.push_back(dir / "sweep.csv");
    write_text_file(written.back(), report_csv(table));
  }
  if (format == ReportFormat::svg || format == ReportFormat::all) {
    PlotSeries l2{"l2_error", {}, {}}, jump{"raw_jump", {}, {}}, tm{"trace_gap_minus", {}, {}},
        tp{"trace_gap_plus", {}, {}};
    for (const ReportRow& r : table.rows) {
      for (PlotSeries* s : {&l2, &jump, &tm, &tp}) s->x.push_back(r.eps_value);
      l2.y.push_back(r.l2_error);
      jump.y.push_back(r.raw_jump);
      tm.y.push_back(r.trace_gap_minus);
      tp.y.push_back(r.trace_gap_plus);
    }
    written.push_back(dir / "l2_error.svg");
    write_text_file(written.back(), loglog_svg("L2 distance to the limit", "eps", "l2_error", {l2}));
    written.push_back(dir / "raw_jump.svg");
    write_text_file(written.back(), loglog_svg("Interface jump", "eps", "raw_jump", {jump}));
    written.push_back(dir / "trace_gap.svg");
    write_text_file(written.back(), loglog_svg("Trace gaps", "eps", "trace gap", {tm, tp}));
  }
  return written;
}

std::vector<std::filesystem::path> emit_report(const ConvergenceReport& report, const std::filesystem::path& dir,
                                               ReportFormat format) {
  std::vector<std::filesystem::path> written;
  if (format != ReportFormat::json) written = emit_table(report_table(report), dir, format);
  if (format == ReportFormat::json || format == ReportFormat::all) {
    std::filesystem::path p = dir / "report.json";
    if (format == ReportFormat::json) {
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw IoFailure("cannot create output directory " + dir.string());
    }
    write_text_file(p, report_json(report));
    written.push_back(p);
  }
  return written;
}

}  // namespace homoglab
