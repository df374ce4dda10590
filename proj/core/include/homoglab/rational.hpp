#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace homoglab {

/// Exact fraction with 64-bit numerator/denominator, always in lowest terms
/// with a positive denominator. Arithmetic throws std::overflow_error rather
/// than wrapping; malformed text and zero denominators throw InvalidArgument.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Accepts "p/q", an integer, or a finite decimal ("0.25" -> 1/4).
  static Rational parse(std::string_view text);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept;
  std::string to_string() const;

  /// True for 1/m with m >= 1.
  bool is_unit_reciprocal() const noexcept { return num_ == 1 && den_ >= 1; }
  bool is_zero() const noexcept { return num_ == 0; }
  int sign() const noexcept { return (num_ > 0) - (num_ < 0); }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

 private:
  std::int64_t num_{0};
  std::int64_t den_{1};
};

}  // namespace homoglab
