#include "homoglab/effective_interface.hpp"

#include "homoglab/error.hpp"

#include <cmath>

namespace homoglab {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::A: return "A";
    case Regime::B: return "B";
    case Regime::C: return "C";
  }
  return "?";
}

Regime regime_from_string(const std::string& s) {
  if (s == "A") return Regime::A;
  if (s == "B") return Regime::B;
  if (s == "C") return Regime::C;
  throw InvalidArgument("unknown regime '" + s + "'");
}

RegimeTag classify_regime(Rational k, Rational gamma) {
  if (k.sign() <= 0) throw InvalidArgument("k must be positive, got " + k.to_string());
  // Critical gamma: 0 for k >= 1, 1 - k below.
  const Rational one(1);
  const Rational critical = k >= one ? Rational(0) : one - k;
  if (gamma == critical) return {Regime::A, std::nullopt};
  if (gamma > critical) return {Regime::B, 0.0};
  return {Regime::C, std::nullopt};
}

double interface_coefficient(const InterfaceProfile& profile, Rational k, Rational gamma) {
  if (classify_regime(k, gamma).regime != Regime::A)
    throw NotCaseA("interface constant requested for (k, gamma) = (" + k.to_string() + ", " +
                   gamma.to_string() + "), which is not in regime A");
  const Rational one(1);
  if (k == one) return profile.mean_arclength_factor(1.0);
  if (k > one) return 1.0;
  return profile.mean_abs_slope();
}

RegimeTag effective_regime(const InterfaceProfile& profile, Rational k, Rational gamma) {
  RegimeTag tag = classify_regime(k, gamma);
  if (tag.regime == Regime::A) tag.G = interface_coefficient(profile, k, gamma);
  return tag;
}

std::vector<double> measure_factor_limit_check(const InterfaceProfile& profile, Rational k, Rational gamma,
                                               const std::vector<Rational>& eps) {
  std::vector<double> out;
  out.reserve(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (eps[i].sign() <= 0) throw InvalidArgument("eps must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw InvalidArgument("eps sequence must be strictly decreasing");
    const double e = eps[i].to_double();
    const double scale = std::pow(e, (k - Rational(1)).to_double());
    out.push_back(std::pow(e, gamma.to_double()) * profile.mean_arclength_factor(scale));
  }
  return out;
}

}  // namespace homoglab
