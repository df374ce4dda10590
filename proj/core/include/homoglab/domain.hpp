#pragma once

#include "homoglab/rational.hpp"

namespace homoglab {

/// Cylinder Q = (0, omega_length) x (-ell, ell) together with the scale
/// parameters of the rough interface x2 = eps^k g(x1 / eps).
struct DomainSpec {
  double omega_length{1.0};
  double ell{1.0};
  Rational epsilon{1, 4};
  Rational k{1};
  Rational gamma{0};

  /// eps^k.
  double amplitude() const;
  /// eps^gamma, the weight in front of the interface integral.
  double interface_weight() const;
  /// Number of periods of the profile across omega; throws ResolutionMismatch
  /// unless omega_length / eps is an integer.
  int periods() const;
};

}  // namespace homoglab
