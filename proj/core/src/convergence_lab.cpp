#include "homoglab/convergence_lab.hpp"

#include "homoglab/error.hpp"
#include "homoglab/parallel.hpp"
#include "homoglab/sources.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace homoglab {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Smallest triangle bounding-box width and height.
std::pair<double, double> min_extent(const BrokenMesh& mesh) {
  double hx = std::numeric_limits<double>::infinity();
  double hy = hx;
  for (const Triangle& t : mesh.triangles) {
    double x0 = hx, x1 = -hx, y0 = hx, y1 = -hx;
    for (int v : t.v) {
      const Point& p = mesh.vertices[v];
      x0 = std::min(x0, p[0]);
      x1 = std::max(x1, p[0]);
      y0 = std::min(y0, p[1]);
      y1 = std::max(y1, p[1]);
    }
    hx = std::min(hx, x1 - x0);
    hy = std::min(hy, y1 - y0);
  }
  return {hx, hy};
}

std::optional<Side> side_for(const BrokenMesh& mesh, const Point& x) {
  if (mesh.merged) return std::nullopt;
  return mesh.side_of(x);
}

}  // namespace

ScalarField SweepConfig::source_field() const {
  return custom_source ? *custom_source : sources::by_name(source);
}

SweepConfig standard_config(Regime regime) {
  SweepConfig c;
  c.k = Rational(2);
  switch (regime) {
    case Regime::A: c.gamma = Rational(0); break;
    case Regime::B: c.gamma = Rational(1); break;
    case Regime::C: c.gamma = Rational(-1); break;
  }
  return c;
}

void validate_sweep(const SweepConfig& c) {
  std::vector<std::string> v;
  if (c.k.sign() <= 0) v.push_back("k must be positive, got " + c.k.to_string());
  if (!(c.omega_length > 0.0)) v.push_back("omega length must be positive");
  if (!(c.ell > 0.0)) v.push_back("ell must be positive");
  if (c.eps.size() < 3) v.push_back("eps list needs at least 3 values");
  for (std::size_t i = 0; i < c.eps.size(); ++i) {
    const Rational& e = c.eps[i];
    if (!e.is_unit_reciprocal()) {
      v.push_back("eps = " + e.to_string() + " is not the reciprocal of an integer");
      continue;
    }
    if (i > 0 && !(e < c.eps[i - 1])) v.push_back("eps list must be strictly decreasing");
    double periods = c.omega_length / e.to_double();
    if (std::abs(periods - std::round(periods)) > 1e-9)
      v.push_back("omega length is not a whole number of periods for eps = " + e.to_string());
    if (c.k.sign() > 0 && c.ell > 0.0 &&
        std::pow(e.to_double(), c.k.to_double()) * c.profile.gbar() >= c.ell)
      v.push_back("interface leaves Q for eps = " + e.to_string());
  }
  const ResolutionPolicy& r = c.resolution;
  if (r.n_per_period < 1 || r.n_per_period % static_cast<int>(c.profile.segment_count()) != 0)
    v.push_back("n_per_period = " + std::to_string(r.n_per_period) + " is not a multiple of the " +
                std::to_string(c.profile.segment_count()) + " profile segments");
  if (r.layers_per_eps < 1) v.push_back("layers_per_eps must be at least 1");
  if (r.limit_resolution < 2) v.push_back("limit_resolution must be at least 2");
  if (r.cell_n < 2) v.push_back("cell_n must be at least 2");
  if (!(c.solver.tol > 0.0)) v.push_back("solver tolerance must be positive");
  for (const std::string& s : c.d.check_assumptions()) v.push_back(s);
  for (const std::string& s : check_assumptions(c.h).violations) v.push_back(s);
  if (!c.custom_source) {
    auto names = sources::names();
    if (std::find(names.begin(), names.end(), c.source) == names.end())
      v.push_back("unknown source '" + c.source + "'");
  }
  if (!v.empty()) throw ValidationError(std::move(v));
}

Eigen::Vector2d pairing_field(int index, const Point& x) {
  switch (index) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {x[0], 0.0};
    case 3: return {0.0, x[0]};
    case 4: return {x[1], 0.0};
    case 5: return {0.0, x[1]};
  }
  throw InvalidArgument("pairing field index out of range");
}

std::string pairing_field_name(int index) {
  static const char* names[] = {"(1,0)", "(0,1)", "(x1,0)", "(0,x1)", "(x2,0)", "(0,x2)"};
  if (index < 0 || index >= pairing_field_count) throw InvalidArgument("pairing field index out of range");
  return names[index];
}

std::string describe(const SweepConfig& c) {
  std::ostringstream os;
  os << "profile=" << c.profile.name() << '[';
  for (const Breakpoint& b : c.profile.breakpoints()) os << exact(b.y) << ':' << exact(b.value) << ';';
  os << "];D=" << c.d.name() << ";h1=" << c.h.h1.name() << ";h2=" << c.h.h2.name()
     << ";source=" << (c.custom_source ? std::string("custom") : c.source) << ";k=" << c.k.to_string()
     << ";gamma=" << c.gamma.to_string() << ";eps=";
  for (const Rational& e : c.eps) os << e.to_string() << ',';
  os << ";L=" << exact(c.omega_length) << ";ell=" << exact(c.ell) << ";n_per_period=" << c.resolution.n_per_period
     << ";layers_per_eps=" << c.resolution.layers_per_eps << ";limit_resolution=" << c.resolution.limit_resolution
     << ";cell_n=" << c.resolution.cell_n << ";tol=" << exact(c.solver.tol);
  return os.str();
}

BrokenMesh sweep_mesh(const SweepConfig& c, Rational eps) {
  DomainSpec spec{c.omega_length, c.ell, eps, c.k, c.gamma};
  long layers = static_cast<long>(c.resolution.layers_per_eps) * eps.den() / eps.num();
  return build_fitted_mesh(spec, c.profile, c.resolution.n_per_period, static_cast<int>(layers));
}

double l2_distance(const BrokenFemFunction& a, const BrokenFemFunction& b) {
  const BrokenMesh& ma = a.mesh();
  const BrokenMesh& mb = b.mesh();
  if (ma.omega_length != mb.omega_length || ma.ell != mb.ell)
    throw InvalidArgument("l2_distance needs functions on the same domain");
  auto [ax, ay] = min_extent(ma);
  auto [bx, by] = min_extent(mb);
  const double length = ma.omega_length;
  const double height = 2.0 * ma.ell;
  const long nx = std::min<long>(8192, 4 * static_cast<long>(std::ceil(length / std::min(ax, bx) - 1e-9)));
  const long ny = std::min<long>(16384, 4 * static_cast<long>(std::ceil(height / std::min(ay, by) - 1e-9)));
  const double dx = length / nx;
  const double dy = height / ny;

  PointLocator la(ma);
  PointLocator lb(mb);
  const std::size_t rows_per_chunk = 16;
  std::vector<double> partial(chunk_count(static_cast<std::size_t>(ny), rows_per_chunk), 0.0);
  parallel_chunks(static_cast<std::size_t>(ny), rows_per_chunk, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    double sum = 0.0;
    for (std::size_t j = begin; j < end; ++j) {
      const double y = -ma.ell + (static_cast<double>(j) + 0.5) * dy;
      for (long i = 0; i < nx; ++i) {
        Point x((static_cast<double>(i) + 0.5) * dx, y);
        double d = evaluate(a, la, x, side_for(ma, x)) - evaluate(b, lb, x, side_for(mb, x));
        sum += d * d;
      }
    }
    partial[chunk] = sum;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return std::sqrt(total * dx * dy);
}

PairingValues pairing_integrals(const BrokenFemFunction& u, const CoefficientField& d, double scale) {
  const BrokenMesh& mesh = u.mesh();
  const TriangleRule& rule = gauss3();
  PairingValues out{};
  for (const Triangle& t : mesh.triangles) {
    ElementGeometry g = element_geometry(mesh, t);
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();
    for (int a = 0; a < 3; ++a) grad += u.values()[t.v[a]] * g.grad[a];
    const int side = t.side == Side::plus ? 1 : 0;
    for (int q = 0; q < 3; ++q) {
      const Eigen::Vector3d& bc = rule.bary[q];
      Point x = bc[0] * mesh.vertices[t.v[0]] + bc[1] * mesh.vertices[t.v[1]] + bc[2] * mesh.vertices[t.v[2]];
      Eigen::Vector2d flux = d.at(x, scale) * grad;
      for (int f = 0; f < pairing_field_count; ++f)
        out[2 * f + side] += g.area * rule.weight[q] * flux.dot(pairing_field(f, x));
    }
  }
  return out;
}

PairingValues weak_pairing_gap(const BrokenFemFunction& u_eps, const CoefficientField& d, double eps,
                               const BrokenFemFunction& u_lim, const Matrix2& d0) {
  PairingValues a = pairing_integrals(u_eps, d, eps);
  PairingValues b = pairing_integrals(u_lim, CoefficientField::constant(d0, "D0"), 1.0);
  PairingValues out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(a[i] - b[i]);
  return out;
}

TraceGap trace_gap(const BrokenFemFunction& u_eps, const InterfaceProfile& profile, Rational eps, Rational k) {
  const BrokenMesh& mesh = u_eps.mesh();
  if (mesh.interface_line.size() < 2) throw NoInterface("trace gap needs an interface polyline");
  const double e = eps.to_double();
  const double amp = std::pow(e, k.to_double());
  const double top = amp * profile.gbar();
  PointLocator loc(mesh);
  // 4 sub-intervals per mesh column, 2-point Gauss on each.
  const double gp = 0.5 / std::sqrt(3.0);
  double minus = 0.0;
  double plus = 0.0;
  for (std::size_t c = 0; c + 1 < mesh.interface_line.size(); ++c) {
    const double x0 = mesh.interface_line[c][0];
    const double x1 = mesh.interface_line[c + 1][0];
    const double h = (x1 - x0) / 4.0;
    for (int s = 0; s < 4; ++s) {
      const double mid = x0 + (s + 0.5) * h;
      for (double off : {-gp, gp}) {
        const double x = mid + off * h;
        const double y = amp * profile.value(x / e);
        double dm = evaluate(u_eps, loc, Point(x, y), Side::minus) - evaluate(u_eps, loc, Point(x, 0.0), Side::minus);
        double dp = evaluate(u_eps, loc, Point(x, y), Side::plus) - evaluate(u_eps, loc, Point(x, top), Side::plus);
        minus += 0.5 * h * dm * dm;
        plus += 0.5 * h * dp * dp;
      }
    }
  }
  return {std::sqrt(minus), std::sqrt(plus)};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return nan_value;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) return nan_value;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return nan_value;
  return (n * sxy - sx * sy) / den;
}

ConvergenceReport run_sweep(const SweepConfig& config) {
  validate_sweep(config);
  ConvergenceReport rep;
  rep.config = config;
  rep.config_hash = fnv1a(describe(config));
  rep.regime = effective_regime(config.profile, config.k, config.gamma);
  rep.d0 = effective_tensor(config.d, config.resolution.cell_n);

  const ScalarField f = config.source_field();
  EffectiveModel model{rep.d0, rep.regime, config.h, f};
  std::optional<BrokenFemFunction> u_lim;
  try {
    LimitSolution lim = solve_limit(config.omega_length, config.ell, config.resolution.limit_resolution, model,
                                    config.solver);
    rep.limit_solve = lim.report;
    rep.limit_ok = lim.report.converged;
    if (!rep.limit_ok) rep.limit_failure = "limit solve did not converge";
    u_lim = std::move(lim.u);
  } catch (const Error& e) {
    rep.limit_failure = e.what();
  }

  for (const Rational& eps : config.eps) {
    EpsRecord r;
    r.eps = eps;
    try {
      auto mesh = std::make_shared<const BrokenMesh>(sweep_mesh(config, eps));
      r.vertices = mesh->vertex_count();
      auto [u, solve_report] = solve_eps(mesh, config.d, config.h, f, eps, config.gamma, config.solver);
      r.solve = solve_report;
      AprioriMonitors m = monitor_apriori(u, eps, config.gamma);
      r.grad_norm = m.grad_norm;
      r.weighted_jump = m.weighted_jump;
      r.raw_jump = m.raw_jump;
      TraceGap tg = trace_gap(u, config.profile, eps, config.k);
      r.trace_gap_minus = tg.minus;
      r.trace_gap_plus = tg.plus;
      if (u_lim) {
        r.l2_error = l2_distance(u, *u_lim);
        r.weak_pairing_gaps = weak_pairing_gap(u, config.d, eps.to_double(), *u_lim, rep.d0.entries);
      } else {
        r.l2_error = nan_value;
        r.weak_pairing_gaps.fill(nan_value);
      }
      r.ok = solve_report.converged;
      if (!r.ok) r.failure = "Newton iteration cap reached";
    } catch (const Error& e) {
      r.ok = false;
      r.failure = e.what();
    }
    rep.records.push_back(std::move(r));
  }

  std::vector<double> xs, l2, jump, tm, tp;
  for (const EpsRecord& r : rep.records) {
    if (!r.ok) continue;
    xs.push_back(r.eps.to_double());
    l2.push_back(r.l2_error);
    jump.push_back(r.raw_jump);
    tm.push_back(r.trace_gap_minus);
    tp.push_back(r.trace_gap_plus);
  }
  rep.slopes = {loglog_slope(xs, l2), loglog_slope(xs, jump), loglog_slope(xs, tm), loglog_slope(xs, tp)};
  return rep;
}

}  // namespace homoglab
