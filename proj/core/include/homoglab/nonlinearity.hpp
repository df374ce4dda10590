#pragma once

#include <string>
#include <vector>

namespace homoglab {

enum class NonlinearityKind {
  identity,          // c z
  arctan,            // atan(z)
  arctan_shifted,    // z + atan(z)
  rational_shifted,  // z + z / (1 + |z|)
  power,             // sign(z) |z|^p
};

/// Scalar monotone function from a fixed registry, with its derivative and
/// primitive (H' = h, H(0) = 0) in closed form.
class Nonlinearity {
 public:
  static Nonlinearity identity(double slope = 1.0);
  static Nonlinearity arctan();
  static Nonlinearity arctan_shifted();
  static Nonlinearity rational_shifted();
  /// Derivative is capped at `derivative_cap` where p|z|^(p-1) blows up.
  static Nonlinearity power(double p, double derivative_cap = 1e8);
  /// Registry lookup: identity, arctan, arctan-shifted, rational-shifted, power.
  static Nonlinearity from_name(const std::string& name, double param);

  double value(double z) const;
  /// Newton derivative; right derivative at kinks, capped.
  double derivative(double z) const;
  double primitive(double z) const;

  NonlinearityKind kind() const noexcept { return kind_; }
  double param() const noexcept { return param_; }
  std::string name() const;
  /// Growth exponent q with |h(z)| <= C (1 + |z|^q).
  double growth_exponent() const;

  friend bool operator==(const Nonlinearity&, const Nonlinearity&) = default;

 private:
  Nonlinearity(NonlinearityKind kind, double param, double cap) : kind_(kind), param_(param), cap_(cap) {}

  NonlinearityKind kind_;
  double param_;
  double cap_;
};

/// h1 acts in the bulk, h2 on the interface jump.
struct NonlinearityPair {
  Nonlinearity h1;
  Nonlinearity h2;
  double q1;
  double q2;

  NonlinearityPair(Nonlinearity a, Nonlinearity b)
      : h1(a), h2(b), q1(a.growth_exponent()), q2(b.growth_exponent()) {}
  NonlinearityPair(Nonlinearity a, Nonlinearity b, double declared_q1, double declared_q2)
      : h1(a), h2(b), q1(declared_q1), q2(declared_q2) {}

  static NonlinearityPair linear() { return {Nonlinearity::identity(), Nonlinearity::identity()}; }
  /// h1 = z + atan z, h2 = z + z / (1 + |z|).
  static NonlinearityPair standard() {
    return {Nonlinearity::arctan_shifted(), Nonlinearity::rational_shifted()};
  }
};

struct AssumptionReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  /// min over sampled z != 0 of h2(z) / z, the empirical constant in z h2(z) >= C z^2.
  double interface_coercivity{0.0};
  /// max over samples of |h_i(z)| / (1 + |z|^{q_i}).
  double growth_constant_h1{0.0};
  double growth_constant_h2{0.0};
};

/// Checks A2 (h1 continuous, nondecreasing, h1(0) = 0, growth) and A3
/// (h2 nondecreasing, z h2(z) >= C z^2, growth) on a log-spaced grid of
/// |z| in [1e-8, 1e8]. Exponent bounds q < 2 (N = 2) produce warnings.
AssumptionReport check_assumptions(const NonlinearityPair& pair);

}  // namespace homoglab
