#include "homoglab/nonlinearity.hpp"

#include "homoglab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace homoglab {

Nonlinearity Nonlinearity::identity(double slope) { return {NonlinearityKind::identity, slope, 0.0}; }
Nonlinearity Nonlinearity::arctan() { return {NonlinearityKind::arctan, 0.0, 0.0}; }
Nonlinearity Nonlinearity::arctan_shifted() { return {NonlinearityKind::arctan_shifted, 0.0, 0.0}; }
Nonlinearity Nonlinearity::rational_shifted() { return {NonlinearityKind::rational_shifted, 0.0, 0.0}; }

Nonlinearity Nonlinearity::power(double p, double derivative_cap) {
  if (!(p > 0.0)) throw InvalidArgument("power nonlinearity needs p > 0");
  return {NonlinearityKind::power, p, derivative_cap};
}

Nonlinearity Nonlinearity::from_name(const std::string& name, double param) {
  if (name == "identity") return identity(param == 0.0 ? 1.0 : param);
  if (name == "arctan") return arctan();
  if (name == "arctan-shifted") return arctan_shifted();
  if (name == "rational-shifted") return rational_shifted();
  if (name == "power") return power(param);
  throw InvalidArgument("unknown nonlinearity '" + name +
                        "' (expected identity, arctan, arctan-shifted, rational-shifted, power)");
}

double Nonlinearity::value(double z) const {
  switch (kind_) {
    case NonlinearityKind::identity: return param_ * z;
    case NonlinearityKind::arctan: return std::atan(z);
    case NonlinearityKind::arctan_shifted: return z + std::atan(z);
    case NonlinearityKind::rational_shifted: return z + z / (1.0 + std::abs(z));
    case NonlinearityKind::power: return std::copysign(std::pow(std::abs(z), param_), z);
  }
  return 0.0;
}

double Nonlinearity::derivative(double z) const {
  switch (kind_) {
    case NonlinearityKind::identity: return param_;
    case NonlinearityKind::arctan: return 1.0 / (1.0 + z * z);
    case NonlinearityKind::arctan_shifted: return 1.0 + 1.0 / (1.0 + z * z);
    case NonlinearityKind::rational_shifted: {
      double d = 1.0 + std::abs(z);
      return 1.0 + 1.0 / (d * d);
    }
    case NonlinearityKind::power: {
      double a = std::abs(z);
      if (param_ == 1.0) return 1.0;
      if (a == 0.0) return param_ > 1.0 ? 0.0 : cap_;
      return std::min(cap_, param_ * std::pow(a, param_ - 1.0));
    }
  }
  return 0.0;
}

double Nonlinearity::primitive(double z) const {
  switch (kind_) {
    case NonlinearityKind::identity: return 0.5 * param_ * z * z;
    case NonlinearityKind::arctan: return z * std::atan(z) - 0.5 * std::log1p(z * z);
    case NonlinearityKind::arctan_shifted:
      return 0.5 * z * z + z * std::atan(z) - 0.5 * std::log1p(z * z);
    case NonlinearityKind::rational_shifted: {
      double a = std::abs(z);
      return 0.5 * z * z + a - std::log1p(a);
    }
    case NonlinearityKind::power: return std::pow(std::abs(z), param_ + 1.0) / (param_ + 1.0);
  }
  return 0.0;
}

std::string Nonlinearity::name() const {
  switch (kind_) {
    case NonlinearityKind::identity: return "identity";
    case NonlinearityKind::arctan: return "arctan";
    case NonlinearityKind::arctan_shifted: return "arctan-shifted";
    case NonlinearityKind::rational_shifted: return "rational-shifted";
    case NonlinearityKind::power: return "power";
  }
  return "unknown";
}

double Nonlinearity::growth_exponent() const {
  if (kind_ == NonlinearityKind::power) return std::max(1.0, param_);
  return 1.0;
}

namespace {

std::vector<double> sample_grid() {
  std::vector<double> z;
  for (int e = -32; e <= 32; ++e) {
    double v = std::pow(10.0, e / 4.0);
    z.push_back(-v);
    z.push_back(v);
  }
  z.push_back(0.0);
  std::sort(z.begin(), z.end());
  return z;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

AssumptionReport check_assumptions(const NonlinearityPair& pair) {
  AssumptionReport report;
  const auto grid = sample_grid();

  if (pair.h1.value(0.0) != 0.0)
    report.violations.push_back("A2.2 violated: h1(0) = " + fmt(pair.h1.value(0.0)) + " is not 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (pair.h1.value(grid[i]) < pair.h1.value(grid[i - 1])) {
      report.violations.push_back("A2.2 violated: h1 decreases between z = " + fmt(grid[i - 1]) +
                                  " and z = " + fmt(grid[i]));
      break;
    }
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (pair.h2.value(grid[i]) < pair.h2.value(grid[i - 1])) {
      report.violations.push_back("A3.2 violated: h2 decreases between z = " + fmt(grid[i - 1]) +
                                  " and z = " + fmt(grid[i]));
      break;
    }
  }

  double c = std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (double z : grid) {
    if (z == 0.0) continue;
    double ratio = pair.h2.value(z) / z;
    if (ratio < c) {
      c = ratio;
      worst = z;
    }
  }
  report.interface_coercivity = c;
  constexpr double kMinCoercivity = 1e-3;
  if (!(c > kMinCoercivity))
    report.violations.push_back("A3.3 violated: z*h2(z) >= C z^2 fails at z = " + fmt(worst) +
                                " (h2(z)/z = " + fmt(c) + ")");

  for (double z : grid) {
    report.growth_constant_h1 =
        std::max(report.growth_constant_h1, std::abs(pair.h1.value(z)) / (1.0 + std::pow(std::abs(z), pair.q1)));
    report.growth_constant_h2 =
        std::max(report.growth_constant_h2, std::abs(pair.h2.value(z)) / (1.0 + std::pow(std::abs(z), pair.q2)));
  }
  if (report.growth_constant_h1 > 1e6)
    report.violations.push_back("A2.3 violated: |h1(z)| <= C(1 + |z|^q1) needs C = " +
                                fmt(report.growth_constant_h1) + " with q1 = " + fmt(pair.q1));
  if (report.growth_constant_h2 > 1e6)
    report.violations.push_back("A3.4 violated: |h2(z)| <= C(1 + |z|^q2) needs C = " +
                                fmt(report.growth_constant_h2) + " with q2 = " + fmt(pair.q2));

  if (pair.q1 < 1.0 || pair.q1 >= 2.0)
    report.warnings.push_back("growth exponent q1 = " + fmt(pair.q1) +
                              " outside 1 <= q1 < 2 required for N = 2 (assumption A2.3)");
  if (pair.q2 < 1.0 || pair.q2 >= 2.0)
    report.warnings.push_back("growth exponent q2 = " + fmt(pair.q2) +
                              " outside 1 <= q2 < 2 required for N = 2 (assumption A3.4)");
  return report;
}

}  // namespace homoglab
