#include <homoglab/error.hpp>
#include <homoglab/profile.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace homoglab;

TEST(Profile, SawtoothShape) {
  InterfaceProfile g = profiles::sawtooth();
  EXPECT_EQ(g.segment_count(), 2u);
  EXPECT_DOUBLE_EQ(g.gbar(), 1.5);
  EXPECT_DOUBLE_EQ(g.gmin(), 0.5);
  EXPECT_DOUBLE_EQ(g.lip(), 2.0);
  EXPECT_DOUBLE_EQ(g.value(0.25), 1.0);
  EXPECT_DOUBLE_EQ(g.value(1.25), 1.0);
  EXPECT_DOUBLE_EQ(g.slope(0.1), 2.0);
  EXPECT_DOUBLE_EQ(g.slope(0.9), -2.0);
}

TEST(Profile, ExactAveragesOfSawtooth) {
  InterfaceProfile g = profiles::sawtooth();
  EXPECT_NEAR(g.mean_arclength_factor(), std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(g.mean_abs_slope(), 2.0, 1e-15);
}

TEST(Profile, AveragesMatchHighOrderQuadrature) {
  // Gauss-Legendre on each segment is exact for piecewise-constant integrands;
  // here a blind composite midpoint rule is the independent check.
  InterfaceProfile g = profiles::cosine();
  const int n = 1 << 16;
  double arc = 0.0, abs_slope = 0.0;
  for (int i = 0; i < n; ++i) {
    double y = (i + 0.5) / n;
    arc += std::sqrt(1.0 + g.slope(y) * g.slope(y)) / n;
    abs_slope += std::abs(g.slope(y)) / n;
  }
  EXPECT_NEAR(g.mean_arclength_factor(), arc, 1e-12);
  EXPECT_NEAR(g.mean_abs_slope(), abs_slope, 1e-12);
}

TEST(Profile, FlatHasUnitMeasureFactor) {
  InterfaceProfile g = profiles::flat(1.0);
  EXPECT_DOUBLE_EQ(g.mean_arclength_factor(), 1.0);
  EXPECT_DOUBLE_EQ(g.mean_abs_slope(), 0.0);
  EXPECT_DOUBLE_EQ(g.lip(), 0.0);
}

TEST(Profile, RejectsNonPositive) {
  EXPECT_THROW(build_profile({{0.0, 1.0}, {0.5, 0.0}, {1.0, 1.0}}), NonPositiveProfile);
  EXPECT_THROW(build_profile({{0.0, 1.0}, {0.5, -1.0}, {1.0, 1.0}}), NonPositiveProfile);
}

TEST(Profile, RejectsNonPeriodic) {
  EXPECT_THROW(build_profile({{0.0, 1.0}, {1.0, 2.0}}), NotPeriodic);
}

TEST(Profile, RejectsBadBreakpoints) {
  EXPECT_THROW(build_profile({{0.0, 1.0}}), InvalidArgument);
  EXPECT_THROW(build_profile({{0.0, 1.0}, {0.5, 1.0}, {0.4, 1.0}, {1.0, 1.0}}), InvalidArgument);
  EXPECT_THROW(build_profile({{0.1, 1.0}, {1.0, 1.0}}), InvalidArgument);
  EXPECT_THROW(build_profile({{0.0, 1.0}, {0.5, std::nan("")}, {1.0, 1.0}}), InvalidArgument);
}

TEST(Profile, SampledInterpolatesAtNodes) {
  auto f = [](double y) { return 1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * y); };
  InterfaceProfile g = InterfaceProfile::sampled(f, 8);
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(g.value(i / 8.0), f(i / 8.0), 1e-14);
  EXPECT_THROW(InterfaceProfile::sampled(f, 0), InvalidArgument);
}

TEST(Profile, RegistryLookup) {
  EXPECT_EQ(profiles::by_name("sawtooth").name(), "sawtooth");
  EXPECT_EQ(profiles::by_name("flat").segment_count(), 1u);
  EXPECT_THROW(profiles::by_name("zigzag"), InvalidArgument);
}
