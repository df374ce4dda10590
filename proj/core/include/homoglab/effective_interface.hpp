#pragma once

#include "homoglab/profile.hpp"
#include "homoglab/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace homoglab {

/// A: effective nonlinear transmission, B: insulating interface (two
/// decoupled Neumann problems), C: no interface (global Dirichlet problem).
enum class Regime { A, B, C };

std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);

struct RegimeTag {
  Regime regime;
  /// Set for A (the interface constant) and B (zero); empty for C.
  std::optional<double> G;
};

/// Exact rational classification of the (k, gamma) plane. k must be positive
/// (InvalidArgument otherwise).
RegimeTag classify_regime(Rational k, Rational gamma);

/// Limit of eps^gamma sqrt(1 + eps^(2(k-1)) |g'|^2) averaged over Y':
/// M(sqrt(1 + |g'|^2)) for k = 1, 1 for k > 1, M(|g'|) for k < 1.
/// Throws NotCaseA outside regime A.
double interface_coefficient(const InterfaceProfile& profile, Rational k, Rational gamma);

/// Regime tag with G filled in (G = 0 for B).
RegimeTag effective_regime(const InterfaceProfile& profile, Rational k, Rational gamma);

/// Per-eps Y'-averages of eps^gamma sqrt(1 + eps^(2(k-1)) |g'(y)|^2),
/// exact for piecewise-linear g. Throws InvalidArgument unless `eps` is
/// strictly decreasing and positive.
std::vector<double> measure_factor_limit_check(const InterfaceProfile& profile, Rational k, Rational gamma,
                                               const std::vector<Rational>& eps);

}  // namespace homoglab
