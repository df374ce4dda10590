#include "homoglab_cli/cli.hpp"

#include <homoglab/cell_problem.hpp>
#include <homoglab/config.hpp>
#include <homoglab/convergence_lab.hpp>
#include <homoglab/error.hpp>
#include <homoglab/limit_solvers.hpp>
#include <homoglab/report.hpp>
#include <homoglab/sources.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace homoglab::cli {

namespace {

namespace fs = std::filesystem;

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::string> eps_list;
  std::optional<std::string> k;
  std::optional<std::string> gamma;
  std::optional<std::string> profile;
  std::optional<std::string> coefficient;
  std::optional<int> n;
  std::optional<double> tol;
  std::optional<long> seed;
  std::string from;
};

std::vector<Rational> parse_eps_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(Rational::parse(item.substr(b, item.find_last_not_of(" \t") - b + 1)));
  }
  return out;
}

// Config file first, then flags on top; --n means the resolution knob of the
// subcommand at hand.
RunConfig load(const Flags& f, const std::string& command) {
  RunConfig c;
  if (!f.config.empty()) {
    if (!fs::is_regular_file(f.config)) throw UsageError("config file not found: " + f.config);
    c = parse_config(read_text_file(f.config));
  }
  try {
    if (f.out) c.out = *f.out;
    if (f.eps_list) c.eps = parse_eps_list(*f.eps_list);
    if (f.k) c.k = Rational::parse(*f.k);
    if (f.gamma) c.gamma = Rational::parse(*f.gamma);
  } catch (const InputError& e) {
    throw ValidationError({e.what()});
  }
  if (f.profile) c.profile = *f.profile;
  if (f.coefficient) c.coefficient = *f.coefficient;
  if (f.tol) c.tol = *f.tol;
  if (f.seed) {
    if (*f.seed < 0) throw UsageError("--seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(*f.seed);
  }
  if (f.n) {
    if (command == "cell")
      c.resolution.cell_n = *f.n;
    else if (command == "limit")
      c.resolution.limit_resolution = *f.n;
    else
      c.resolution.n_per_period = *f.n;
  }
  check_config(c);
  return c;
}

fs::path prepare_out(const RunConfig& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoFailure("cannot create output directory " + c.out);
  write_text_file(dir / "run.toml", emit_config(c));
  return dir;
}

std::string eps_tag(const Rational& e) { return std::to_string(e.den() / e.num()); }

std::string regime_line(const RegimeTag& tag) {
  std::ostringstream os;
  os << std::setprecision(17) << "regime " << to_string(tag.regime);
  if (tag.G) os << ", G = " << *tag.G;
  return os.str();
}

int cmd_mesh(const RunConfig& c, std::ostream& out) {
  fs::path dir = prepare_out(c);
  SweepConfig s = to_sweep_config(c);
  for (const Rational& e : c.eps) {
    BrokenMesh mesh = sweep_mesh(s, e);
    fs::path p = dir / ("mesh_eps" + eps_tag(e) + ".json");
    write_text_file(p, mesh_to_json(mesh));
    out << "eps " << e.to_string() << ": " << mesh.vertex_count() << " vertices, " << mesh.triangles.size()
        << " triangles, " << mesh.interface_pairs.size() << " interface pairs -> " << p.string() << '\n';
  }
  return ok;
}

int cmd_solve_eps(const RunConfig& c, std::ostream& out) {
  fs::path dir = prepare_out(c);
  SweepConfig s = to_sweep_config(c);
  const ScalarField f = s.source_field();
  for (const Rational& e : c.eps) {
    auto mesh = std::make_shared<const BrokenMesh>(sweep_mesh(s, e));
    auto [u, rep] = solve_eps(mesh, s.d, s.h, f, e, c.gamma, s.solver);
    AprioriMonitors m = monitor_apriori(u, e, c.gamma);
    write_text_file(dir / ("solution_eps" + eps_tag(e) + ".json"), function_to_json(u));
    write_text_file(dir / ("solve_eps" + eps_tag(e) + ".json"), solve_report_to_json(rep));
    out << std::setprecision(10) << "eps " << e.to_string() << ": newton " << rep.iterations << ", residual "
        << rep.final_residual_norm << ", grad_norm " << m.grad_norm << ", weighted_jump " << m.weighted_jump
        << ", raw_jump " << m.raw_jump << '\n';
    if (!rep.converged) throw LineSearchStalled("Newton iteration cap reached for eps = " + e.to_string());
  }
  return ok;
}

int cmd_cell(const RunConfig& c, std::ostream& out) {
  fs::path dir = prepare_out(c);
  EffectiveTensor t = effective_tensor(coefficients::by_name(c.coefficient), c.resolution.cell_n);
  write_text_file(dir / "D0.json", effective_tensor_to_json(t));
  out << std::setprecision(12) << "D0 (" << t.coefficient << ", n = " << t.resolution << ") = [[" << t.entries(0, 0)
      << ", " << t.entries(0, 1) << "], [" << t.entries(1, 0) << ", " << t.entries(1, 1) << "]]\n";
  return ok;
}

int cmd_coefficient(const RunConfig& c, std::ostream& out) {
  InterfaceProfile profile = make_profile(c);
  RegimeTag tag = effective_regime(profile, c.k, c.gamma);
  out << regime_line(tag) << '\n';
  std::vector<Rational> seq = c.eps;
  std::vector<double> m = measure_factor_limit_check(profile, c.k, c.gamma, seq);
  out << std::setprecision(12);
  for (std::size_t i = 0; i < seq.size(); ++i)
    out << "eps " << seq[i].to_string() << ": mean scaled measure factor " << m[i] << '\n';
  return ok;
}

int cmd_limit(const RunConfig& c, std::ostream& out) {
  fs::path dir = prepare_out(c);
  SweepConfig s = to_sweep_config(c);
  EffectiveModel model{effective_tensor(s.d, c.resolution.cell_n), effective_regime(s.profile, c.k, c.gamma), s.h,
                       s.source_field()};
  LimitSolution lim = solve_limit(c.omega_length, c.ell, c.resolution.limit_resolution, model, s.solver);
  write_text_file(dir / "limit.json", limit_solution_to_json(lim.u, model));
  write_text_file(dir / "limit_solve.json", solve_report_to_json(lim.report));
  Norms n = norms(lim.u);
  out << regime_line(model.regime) << '\n'
      << std::setprecision(10) << "limit: newton " << lim.report.iterations << ", residual "
      << lim.report.final_residual_norm << ", l2 " << n.l2 << ", grad " << n.broken_h1 << ", jump " << n.jump_l2
      << '\n';
  if (!lim.report.converged) throw LineSearchStalled("Newton iteration cap reached in the limit solve");
  return ok;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  fs::path dir = prepare_out(c);
  ConvergenceReport rep = run_sweep(to_sweep_config(c));
  emit_report(rep, dir);
  out << regime_line(rep.regime) << '\n' << std::setprecision(8);
  bool failed = !rep.limit_ok;
  if (!rep.limit_ok) out << "limit solve failed: " << rep.limit_failure << '\n';
  for (const EpsRecord& r : rep.records) {
    if (!r.ok) {
      failed = true;
      out << "eps " << r.eps.to_string() << ": FAILED " << r.failure << '\n';
      continue;
    }
    out << "eps " << r.eps.to_string() << ": l2_error " << r.l2_error << ", grad_norm " << r.grad_norm
        << ", raw_jump " << r.raw_jump << ", trace_gap_minus " << r.trace_gap_minus << '\n';
  }
  out << "slopes: l2_error " << rep.slopes.l2_error << ", raw_jump " << rep.slopes.raw_jump << ", trace_gap_minus "
      << rep.slopes.trace_gap_minus << '\n';
  out << "report written to " << dir.string() << '\n';
  return failed ? numerical_failure : ok;
}

int cmd_report(const Flags& f, std::ostream& out) {
  if (f.from.empty()) throw UsageError("report needs --from REPORT_JSON");
  if (!fs::is_regular_file(f.from)) throw UsageError("report file not found: " + f.from);
  ReportTable table = report_table_from_json(read_text_file(f.from));
  fs::path dir = f.out ? fs::path(*f.out) : fs::path(f.from).parent_path();
  for (const fs::path& p : emit_table(table, dir)) out << "wrote " << p.string() << '\n';
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Homogenization of a rough nonlinear imperfect interface"};
  app.name(argv.empty() ? "homoglab" : argv.front());
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "Key = value configuration file");
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--eps-list", f.eps_list, "Comma-separated eps values, e.g. 1/4,1/8");
  app.add_option("--k", f.k, "Amplitude exponent k (rational)");
  app.add_option("--gamma", f.gamma, "Interface weight exponent gamma (rational)");
  app.add_option("--profile", f.profile, "Interface profile: flat, sawtooth, cosine, custom");
  app.add_option("--coefficient", f.coefficient, "Cell coefficient: identity, smooth, laminate-1-4, diag-2-3");
  app.add_option("--n", f.n, "Resolution (columns per period, cell size, or limit cells per unit)");
  app.add_option("--tol", f.tol, "Newton tolerance");
  app.add_option("--seed", f.seed, "Seed recorded with the run");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"mesh", "Build fitted meshes for each eps"},
      {"solve-eps", "Solve the eps-problem for each eps"},
      {"cell", "Solve the cell problem and write D0"},
      {"coefficient", "Classify (k, gamma) and compute G"},
      {"limit", "Solve the homogenized problem"},
      {"sweep", "Run an eps sweep and write the report"},
      {"report", "Re-render CSV and plots from a report JSON"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    if (name == "report") sub->add_option("--from", f.from, "report.json to render");
  }

  std::vector<std::string> args(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return usage_error;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "report") return cmd_report(f, out);
    RunConfig c = load(f, command);
    for (const std::string& w : c.warnings) err << "warning: " << w << '\n';
    if (command == "mesh") return cmd_mesh(c, out);
    if (command == "solve-eps") return cmd_solve_eps(c, out);
    if (command == "cell") return cmd_cell(c, out);
    if (command == "coefficient") return cmd_coefficient(c, out);
    if (command == "limit") return cmd_limit(c, out);
    if (command == "sweep") return cmd_sweep(c, out);
    throw UsageError("unknown subcommand " + command);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return usage_error;
  } catch (const ValidationError& e) {
    err << "validation failed:\n";
    for (const std::string& v : e.violations()) err << "  " << v << '\n';
    return validation_error;
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << '\n';
    return validation_error;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return numerical_failure;
  } catch (const IoFailure& e) {
    err << "i/o failure: " << e.what() << '\n';
    return io_error;
  } catch (const std::exception& e) {
    err << "invalid input: " << e.what() << '\n';
    return validation_error;
  }
}

}  // namespace homoglab::cli
