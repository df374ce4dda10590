#include "homoglab/profile.hpp"

#include "homoglab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace homoglab {

namespace {
constexpr double kPeriodicTol = 1e-12;
}

InterfaceProfile::InterfaceProfile(std::vector<Breakpoint> breakpoints, std::string name)
    : breakpoints_(std::move(breakpoints)), name_(std::move(name)) {
  if (breakpoints_.size() < 2) throw InvalidArgument("profile needs at least 2 breakpoints");
  for (const auto& b : breakpoints_) {
    if (!std::isfinite(b.y) || !std::isfinite(b.value))
      throw InvalidArgument("profile breakpoints must be finite");
  }
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i].y > breakpoints_[i - 1].y))
      throw InvalidArgument("profile breakpoints must have strictly increasing y");
  }
  if (std::abs(breakpoints_.front().y) > kPeriodicTol ||
      std::abs(breakpoints_.back().y - 1.0) > kPeriodicTol)
    throw InvalidArgument("profile breakpoints must span [0, 1]");
  breakpoints_.front().y = 0.0;
  breakpoints_.back().y = 1.0;

  gbar_ = breakpoints_.front().value;
  gmin_ = gbar_;
  for (const auto& b : breakpoints_) {
    gbar_ = std::max(gbar_, b.value);
    gmin_ = std::min(gmin_, b.value);
  }
  if (gmin_ <= 0.0)
    throw NonPositiveProfile("A_g violated: profile minimum " + std::to_string(gmin_) +
                             " is not positive");
  if (std::abs(breakpoints_.front().value - breakpoints_.back().value) > kPeriodicTol)
    throw NotPeriodic("A_g violated: g(0) = " + std::to_string(breakpoints_.front().value) +
                      " differs from g(1) = " + std::to_string(breakpoints_.back().value));

  // For a piecewise-linear function the best Lipschitz constant is the
  // largest segment slope.
  lip_ = 0.0;
  for (std::size_t s = 0; s < segment_count(); ++s) lip_ = std::max(lip_, std::abs(segment_slope(s)));
}

InterfaceProfile InterfaceProfile::sampled(const std::function<double(double)>& g, int segments,
                                           std::string name) {
  if (segments < 1) throw InvalidArgument("sampled profile needs at least one segment");
  std::vector<Breakpoint> pts;
  pts.reserve(segments + 1);
  for (int i = 0; i <= segments; ++i) {
    double y = static_cast<double>(i) / segments;
    pts.push_back({y, g(i == segments ? 0.0 : y)});
  }
  return InterfaceProfile(std::move(pts), std::move(name));
}

std::size_t InterfaceProfile::segment_of(double y) const {
  y -= std::floor(y);
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), y,
                             [](double v, const Breakpoint& b) { return v < b.y; });
  std::size_t idx = static_cast<std::size_t>(it - breakpoints_.begin());
  idx = idx == 0 ? 0 : idx - 1;
  return std::min(idx, segment_count() - 1);
}

double InterfaceProfile::segment_slope(std::size_t s) const {
  const auto& a = breakpoints_[s];
  const auto& b = breakpoints_[s + 1];
  return (b.value - a.value) / (b.y - a.y);
}

double InterfaceProfile::value(double y) const {
  y -= std::floor(y);
  std::size_t s = segment_of(y);
  const auto& a = breakpoints_[s];
  const auto& b = breakpoints_[s + 1];
  double t = (y - a.y) / (b.y - a.y);
  return a.value + t * (b.value - a.value);
}

double InterfaceProfile::slope(double y) const { return segment_slope(segment_of(y)); }

double InterfaceProfile::mean_arclength_factor(double scale) const {
  double sum = 0.0;
  for (std::size_t s = 0; s < segment_count(); ++s) {
    double dy = breakpoints_[s + 1].y - breakpoints_[s].y;
    double slope = scale * segment_slope(s);
    sum += dy * std::sqrt(1.0 + slope * slope);
  }
  return sum;
}

double InterfaceProfile::mean_abs_slope() const {
  double sum = 0.0;
  for (std::size_t s = 0; s < segment_count(); ++s)
    sum += std::abs(breakpoints_[s + 1].value - breakpoints_[s].value);
  return sum;
}

namespace profiles {

InterfaceProfile flat(double level) { return InterfaceProfile({{0.0, level}, {1.0, level}}, "flat"); }

InterfaceProfile sawtooth() {
  return InterfaceProfile({{0.0, 0.5}, {0.5, 1.5}, {1.0, 0.5}}, "sawtooth");
}

InterfaceProfile cosine() {
  return InterfaceProfile::sampled(
      [](double y) { return 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * y); }, 16, "cosine");
}

InterfaceProfile by_name(const std::string& name) {
  if (name == "flat") return flat();
  if (name == "sawtooth") return sawtooth();
  if (name == "cosine") return cosine();
  throw InvalidArgument("unknown profile '" + name + "' (expected flat, sawtooth, cosine)");
}

}  // namespace profiles

}  // namespace homoglab
