#include "homoglab/config.hpp"

#include "homoglab/error.hpp"
#include "homoglab/sources.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace homoglab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

std::vector<std::string> split_list(const std::string& value) {
  std::string body = trim(value);
  if (body.size() < 2 || body.front() != '[' || body.back() != ']')
    throw InvalidArgument("expected a bracketed list, got '" + value + "'");
  body = body.substr(1, body.size() - 2);
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(body);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(unquote(item));
  }
  return out;
}

double to_number(const std::string& s) {
  std::string t = unquote(trim(s));
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw InvalidArgument("'" + t + "' is not a finite number");
  return v;
}

long to_integer(const std::string& s) {
  std::string t = unquote(trim(s));
  long v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) throw InvalidArgument("'" + t + "' is not an integer");
  return v;
}

Breakpoint to_breakpoint(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw InvalidArgument("breakpoint '" + s + "' is not of the form y:g");
  return {to_number(s.substr(0, colon)), to_number(s.substr(colon + 1))};
}

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"profile", [](RunConfig& c, const std::string& v) { c.profile = unquote(v); }},
      {"breakpoints",
       [](RunConfig& c, const std::string& v) {
         c.breakpoints.clear();
         for (const auto& item : split_list(v)) c.breakpoints.push_back(to_breakpoint(item));
       }},
      {"coefficient", [](RunConfig& c, const std::string& v) { c.coefficient = unquote(v); }},
      {"h1", [](RunConfig& c, const std::string& v) { c.h1 = unquote(v); }},
      {"h1_param", [](RunConfig& c, const std::string& v) { c.h1_param = to_number(v); }},
      {"q1", [](RunConfig& c, const std::string& v) { c.q1 = to_number(v); }},
      {"h2", [](RunConfig& c, const std::string& v) { c.h2 = unquote(v); }},
      {"h2_param", [](RunConfig& c, const std::string& v) { c.h2_param = to_number(v); }},
      {"q2", [](RunConfig& c, const std::string& v) { c.q2 = to_number(v); }},
      {"source", [](RunConfig& c, const std::string& v) { c.source = unquote(v); }},
      {"k", [](RunConfig& c, const std::string& v) { c.k = Rational::parse(unquote(v)); }},
      {"gamma", [](RunConfig& c, const std::string& v) { c.gamma = Rational::parse(unquote(v)); }},
      {"eps",
       [](RunConfig& c, const std::string& v) {
         c.eps.clear();
         for (const auto& item : split_list(v)) c.eps.push_back(Rational::parse(item));
       }},
      {"omega_length", [](RunConfig& c, const std::string& v) { c.omega_length = to_number(v); }},
      {"ell", [](RunConfig& c, const std::string& v) { c.ell = to_number(v); }},
      {"n_per_period", [](RunConfig& c, const std::string& v) { c.resolution.n_per_period = static_cast<int>(to_integer(v)); }},
      {"layers_per_eps", [](RunConfig& c, const std::string& v) { c.resolution.layers_per_eps = static_cast<int>(to_integer(v)); }},
      {"limit_resolution", [](RunConfig& c, const std::string& v) { c.resolution.limit_resolution = static_cast<int>(to_integer(v)); }},
      {"cell_n", [](RunConfig& c, const std::string& v) { c.resolution.cell_n = static_cast<int>(to_integer(v)); }},
      {"tol", [](RunConfig& c, const std::string& v) { c.tol = to_number(v); }},
      {"out", [](RunConfig& c, const std::string& v) { c.out = unquote(v); }},
      {"seed",
       [](RunConfig& c, const std::string& v) {
         long s = to_integer(v);
         if (s < 0) throw InvalidArgument("seed must be nonnegative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
  };
  return table;
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const {
  auto same_breakpoints = [&] {
    if (breakpoints.size() != o.breakpoints.size()) return false;
    for (std::size_t i = 0; i < breakpoints.size(); ++i)
      if (breakpoints[i].y != o.breakpoints[i].y || breakpoints[i].value != o.breakpoints[i].value) return false;
    return true;
  };
  const ResolutionPolicy& r = resolution;
  const ResolutionPolicy& s = o.resolution;
  return profile == o.profile && same_breakpoints() && coefficient == o.coefficient && h1 == o.h1 &&
         h1_param == o.h1_param && q1 == o.q1 && h2 == o.h2 && h2_param == o.h2_param && q2 == o.q2 &&
         source == o.source && k == o.k && gamma == o.gamma && eps == o.eps && omega_length == o.omega_length &&
         ell == o.ell && r.n_per_period == s.n_per_period && r.layers_per_eps == s.layers_per_eps &&
         r.limit_resolution == s.limit_resolution && r.cell_n == s.cell_n && tol == o.tol && out == o.out &&
         seed == o.seed;
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::vector<std::string> errors;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    const std::string where = "line " + std::to_string(number) + ": ";
    auto eq = body.find('=');
    if (eq == std::string::npos) {
      errors.push_back(where + "expected key = value");
      continue;
    }
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    auto it = setters().find(key);
    if (it == setters().end()) {
      errors.push_back(where + "unknown key '" + key + "'");
      continue;
    }
    if (!seen.insert(key).second) {
      errors.push_back(where + "duplicate key '" + key + "'");
      continue;
    }
    try {
      it->second(c, value);
    } catch (const std::exception& e) {
      errors.push_back(where + key + ": " + e.what());
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return c;
}

InterfaceProfile make_profile(const RunConfig& c) {
  if (c.profile == "custom") return InterfaceProfile(c.breakpoints, "custom");
  return profiles::by_name(c.profile);
}

NonlinearityPair make_nonlinearities(const RunConfig& c) {
  Nonlinearity a = Nonlinearity::from_name(c.h1, c.h1_param);
  Nonlinearity b = Nonlinearity::from_name(c.h2, c.h2_param);
  return NonlinearityPair(a, b, c.q1.value_or(a.growth_exponent()), c.q2.value_or(b.growth_exponent()));
}

void check_config(RunConfig& c) {
  std::vector<std::string> v;
  c.warnings.clear();
  c.regime.reset();

  std::optional<InterfaceProfile> profile;
  try {
    profile = make_profile(c);
  } catch (const InputError& e) {
    v.push_back(e.what());
  }
  try {
    for (const std::string& s : coefficients::by_name(c.coefficient).check_assumptions()) v.push_back(s);
  } catch (const InputError& e) {
    v.push_back(e.what());
  }
  try {
    AssumptionReport rep = check_assumptions(make_nonlinearities(c));
    v.insert(v.end(), rep.violations.begin(), rep.violations.end());
    c.warnings = rep.warnings;
  } catch (const InputError& e) {
    v.push_back(e.what());
  }
  try {
    sources::by_name(c.source);
  } catch (const InputError& e) {
    v.push_back(e.what());
  }
  if (!(c.omega_length > 0.0)) v.push_back("omega_length must be positive, got " + exact(c.omega_length));
  if (!(c.ell > 0.0)) v.push_back("ell must be positive, got " + exact(c.ell));
  if (!(c.tol > 0.0)) v.push_back("tol must be positive");
  if (c.k.sign() <= 0) {
    v.push_back("k must be positive, got " + c.k.to_string());
  } else {
    c.regime = classify_regime(c.k, c.gamma);
  }
  if (c.eps.empty()) v.push_back("eps list is empty");
  for (std::size_t i = 0; i < c.eps.size(); ++i) {
    if (!c.eps[i].is_unit_reciprocal()) v.push_back("eps = " + c.eps[i].to_string() + " is not 1/m");
    if (i > 0 && !(c.eps[i] < c.eps[i - 1])) v.push_back("eps list must be strictly decreasing");
  }
  const ResolutionPolicy& r = c.resolution;
  if (profile && (r.n_per_period < 1 || r.n_per_period % static_cast<int>(profile->segment_count()) != 0))
    v.push_back("n_per_period = " + std::to_string(r.n_per_period) + " is not a multiple of the " +
                std::to_string(profile->segment_count()) + " profile segments");
  if (r.layers_per_eps < 1) v.push_back("layers_per_eps must be at least 1");
  if (r.limit_resolution < 2) v.push_back("limit_resolution must be at least 2");
  if (r.cell_n < 2) v.push_back("cell_n must be at least 2");
  if (profile && c.k.sign() > 0 && c.ell > 0.0)
    for (const Rational& e : c.eps)
      if (e.sign() > 0 && std::pow(e.to_double(), c.k.to_double()) * profile->gbar() >= c.ell)
        v.push_back("interface leaves Q for eps = " + e.to_string());
  if (!v.empty()) throw ValidationError(std::move(v));
  if (c.regime && c.regime->regime == Regime::A) c.regime->G = interface_coefficient(*profile, c.k, c.gamma);
}

RunConfig validate_config(const std::string& text) {
  RunConfig c = parse_config(text);
  check_config(c);
  return c;
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream os;
  os << "profile = " << quoted(c.profile) << '\n';
  if (!c.breakpoints.empty()) {
    os << "breakpoints = [";
    for (std::size_t i = 0; i < c.breakpoints.size(); ++i)
      os << (i ? ", " : "") << quoted(exact(c.breakpoints[i].y) + ":" + exact(c.breakpoints[i].value));
    os << "]\n";
  }
  os << "coefficient = " << quoted(c.coefficient) << '\n';
  os << "h1 = " << quoted(c.h1) << '\n' << "h1_param = " << exact(c.h1_param) << '\n';
  if (c.q1) os << "q1 = " << exact(*c.q1) << '\n';
  os << "h2 = " << quoted(c.h2) << '\n' << "h2_param = " << exact(c.h2_param) << '\n';
  if (c.q2) os << "q2 = " << exact(*c.q2) << '\n';
  os << "source = " << quoted(c.source) << '\n';
  os << "k = " << quoted(c.k.to_string()) << '\n' << "gamma = " << quoted(c.gamma.to_string()) << '\n';
  os << "eps = [";
  for (std::size_t i = 0; i < c.eps.size(); ++i) os << (i ? ", " : "") << quoted(c.eps[i].to_string());
  os << "]\n";
  os << "omega_length = " << exact(c.omega_length) << '\n' << "ell = " << exact(c.ell) << '\n';
  os << "n_per_period = " << c.resolution.n_per_period << '\n'
     << "layers_per_eps = " << c.resolution.layers_per_eps << '\n'
     << "limit_resolution = " << c.resolution.limit_resolution << '\n'
     << "cell_n = " << c.resolution.cell_n << '\n';
  os << "tol = " << exact(c.tol) << '\n' << "out = " << quoted(c.out) << '\n' << "seed = " << c.seed << '\n';
  return os.str();
}

SweepConfig to_sweep_config(const RunConfig& c) {
  SweepConfig s;
  s.profile = make_profile(c);
  s.d = coefficients::by_name(c.coefficient);
  s.h = make_nonlinearities(c);
  s.source = c.source;
  s.k = c.k;
  s.gamma = c.gamma;
  s.eps = c.eps;
  s.omega_length = c.omega_length;
  s.ell = c.ell;
  s.resolution = c.resolution;
  s.solver.tol = c.tol;
  return s;
}

}  // namespace homoglab
