#pragma once

#include <functional>
#include <string>
#include <vector>

namespace homoglab {

struct Breakpoint {
  double y;
  double value;
};

/// Positive, 1-periodic, piecewise-linear interface profile g on Y' = (0, 1).
///
/// Piecewise linearity makes every quantity derived from g' exact: slopes are
/// constant per segment, so averages such as M(sqrt(1 + |g'|^2)) reduce to
/// finite sums.
class InterfaceProfile {
 public:
  /// Validates and takes ownership of the breakpoints.
  /// Throws NonPositiveProfile, NotPeriodic, or InvalidArgument.
  explicit InterfaceProfile(std::vector<Breakpoint> breakpoints, std::string name = "custom");

  /// Piecewise-linear interpolant of a smooth function on n uniform segments.
  /// This approximates g; the derived averages are exact for the interpolant only.
  static InterfaceProfile sampled(const std::function<double(double)>& g, int segments,
                                  std::string name = "sampled");

  const std::vector<Breakpoint>& breakpoints() const noexcept { return breakpoints_; }
  const std::string& name() const noexcept { return name_; }
  std::size_t segment_count() const noexcept { return breakpoints_.size() - 1; }

  double gbar() const noexcept { return gbar_; }
  double gmin() const noexcept { return gmin_; }
  double lip() const noexcept { return lip_; }

  /// g(y) with y wrapped into [0, 1).
  double value(double y) const;
  /// Right derivative g'(y+), y wrapped into [0, 1).
  double slope(double y) const;
  double segment_slope(std::size_t segment) const;

  /// M_{Y'}( sqrt(1 + scale^2 |g'|^2) ), exact.
  double mean_arclength_factor(double scale = 1.0) const;
  /// M_{Y'}( |g'| ), exact.
  double mean_abs_slope() const;

 private:
  std::size_t segment_of(double y) const;

  std::vector<Breakpoint> breakpoints_;
  std::string name_;
  double gbar_{0.0};
  double gmin_{0.0};
  double lip_{0.0};
};

inline InterfaceProfile build_profile(std::vector<Breakpoint> breakpoints) {
  return InterfaceProfile(std::move(breakpoints));
}

namespace profiles {

/// g(y) = level.
InterfaceProfile flat(double level = 1.0);
/// g(y) = 0.5 + 2 min(y, 1 - y): slopes +-2, gbar = 1.5, gmin = 0.5.
InterfaceProfile sawtooth();
/// g(y) = 1 + 0.5 cos(2 pi y), sampled on 16 segments.
InterfaceProfile cosine();
/// "flat", "sawtooth", "cosine". Throws InvalidArgument otherwise.
InterfaceProfile by_name(const std::string& name);

}  // namespace profiles

}  // namespace homoglab
