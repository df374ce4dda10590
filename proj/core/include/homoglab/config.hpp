#pragma once

#include "homoglab/convergence_lab.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace homoglab {

/// Everything a CLI run can be configured with. Only the fields a subcommand
/// needs are used by it.
///
/// Text form: flat `key = value` lines, `#` comments, strings optionally
/// quoted, lists in brackets. Rationals may be written "1/4" or 0.25.
struct RunConfig {
  std::string profile{"sawtooth"};
  /// Breakpoints "y:g" for profile = "custom".
  std::vector<Breakpoint> breakpoints;
  std::string coefficient{"smooth"};
  std::string h1{"arctan-shifted"};
  double h1_param{0.0};
  std::optional<double> q1;
  std::string h2{"rational-shifted"};
  double h2_param{0.0};
  std::optional<double> q2;
  std::string source{"standard"};
  Rational k{1};
  Rational gamma{0};
  std::vector<Rational> eps{Rational(1, 4), Rational(1, 8), Rational(1, 16), Rational(1, 32)};
  double omega_length{1.0};
  double ell{1.0};
  ResolutionPolicy resolution;
  double tol{1e-10};
  std::string out{"out"};
  std::uint64_t seed{0};

  /// Filled by check_config.
  std::optional<RegimeTag> regime;
  std::vector<std::string> warnings;

  /// Compares the configurable fields only.
  bool operator==(const RunConfig& other) const;
};

/// Syntax and type parsing; unknown keys and malformed values are collected
/// and thrown together as ValidationError.
RunConfig parse_config(const std::string& text);

/// Runs every assumption check (A_g on the profile, A1 on D, A2/A3 on the
/// nonlinearities, domain and resolution sanity), classifies the regime and
/// records growth-exponent warnings. Throws ValidationError with all
/// violations.
void check_config(RunConfig& config);

/// parse_config followed by check_config.
RunConfig validate_config(const std::string& text);

/// Text form that parse_config reads back to an equal RunConfig.
std::string emit_config(const RunConfig& config);

InterfaceProfile make_profile(const RunConfig& config);
NonlinearityPair make_nonlinearities(const RunConfig& config);
SweepConfig to_sweep_config(const RunConfig& config);

}  // namespace homoglab
