#include <homoglab/error.hpp>
#include <homoglab/nonlinearity.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace homoglab;

namespace {

std::vector<Nonlinearity> registry() {
  return {Nonlinearity::identity(2.0), Nonlinearity::arctan(), Nonlinearity::arctan_shifted(),
          Nonlinearity::rational_shifted(), Nonlinearity::power(1.5), Nonlinearity::power(3.0)};
}

}  // namespace

TEST(Nonlinearity, DerivativeMatchesCentralDifferences) {
  for (const Nonlinearity& h : registry())
    for (double z : {-3.0, -0.7, -0.1, 0.2, 0.9, 4.0}) {
      double t = 1e-6;
      double fd = (h.value(z + t) - h.value(z - t)) / (2 * t);
      EXPECT_NEAR(h.derivative(z), fd, 1e-6 * (1 + std::abs(fd))) << h.name() << " z = " << z;
    }
}

TEST(Nonlinearity, PrimitiveDifferentiatesToValue) {
  for (const Nonlinearity& h : registry()) {
    EXPECT_EQ(h.primitive(0.0), 0.0) << h.name();
    for (double z : {-2.5, -0.3, 0.4, 1.7}) {
      double t = 1e-5;
      double fd = (h.primitive(z + t) - h.primitive(z - t)) / (2 * t);
      EXPECT_NEAR(fd, h.value(z), 1e-7 * (1 + std::abs(h.value(z)))) << h.name() << " z = " << z;
    }
  }
}

TEST(Nonlinearity, ClosedForms) {
  EXPECT_DOUBLE_EQ(Nonlinearity::arctan().value(1.0), M_PI / 4);
  EXPECT_DOUBLE_EQ(Nonlinearity::rational_shifted().value(1.0), 1.5);
  EXPECT_DOUBLE_EQ(Nonlinearity::rational_shifted().value(-1.0), -1.5);
  EXPECT_DOUBLE_EQ(Nonlinearity::power(3.0).value(-2.0), -8.0);
  EXPECT_DOUBLE_EQ(Nonlinearity::arctan().derivative(0.0), 1.0);
}

TEST(Nonlinearity, PowerDerivativeAtZeroUsesCap) {
  EXPECT_EQ(Nonlinearity::power(0.5, 1e3).derivative(0.0), 1e3);
  EXPECT_EQ(Nonlinearity::power(2.0).derivative(0.0), 0.0);
  EXPECT_LE(Nonlinearity::power(0.5, 1e3).derivative(1e-12), 1e3);
  EXPECT_THROW(Nonlinearity::power(0.0), InvalidArgument);
}

TEST(Nonlinearity, Registry) {
  EXPECT_EQ(Nonlinearity::from_name("arctan-shifted", 0.0), Nonlinearity::arctan_shifted());
  EXPECT_EQ(Nonlinearity::from_name("identity", 0.0), Nonlinearity::identity(1.0));
  EXPECT_EQ(Nonlinearity::from_name("power", 1.5), Nonlinearity::power(1.5));
  EXPECT_THROW(Nonlinearity::from_name("cubic", 0.0), InvalidArgument);
}

TEST(Assumptions, StandardPairIsAdmissible) {
  AssumptionReport r = check_assumptions(NonlinearityPair::standard());
  EXPECT_TRUE(r.violations.empty());
  EXPECT_TRUE(r.warnings.empty());
  // h2(z) / z = 1 + 1 / (1 + |z|) decreases to 1 as |z| grows.
  EXPECT_NEAR(r.interface_coercivity, 1.0, 1e-7);
}

TEST(Assumptions, MonotoneSamplesAreNondecreasing) {
  for (const Nonlinearity& h : registry()) {
    double prev = -INFINITY;
    for (int i = -200; i <= 200; ++i) {
      double v = h.value(i / 20.0);
      EXPECT_GE(v, prev) << h.name();
      prev = v;
    }
  }
}

TEST(Assumptions, BoundedH2IsNotCoercive) {
  AssumptionReport r = check_assumptions({Nonlinearity::arctan(), Nonlinearity::arctan()});
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_NE(r.violations[0].find("h2"), std::string::npos);
}

TEST(Assumptions, DecreasingH1IsRejected) {
  AssumptionReport r = check_assumptions({Nonlinearity::identity(-1.0), Nonlinearity::identity()});
  ASSERT_FALSE(r.violations.empty());
  EXPECT_NE(r.violations[0].find("decreases"), std::string::npos);
}

TEST(Assumptions, FastGrowthWarns) {
  NonlinearityPair p{Nonlinearity::power(3.0), Nonlinearity::identity()};
  EXPECT_EQ(p.q1, 3.0);
  AssumptionReport r = check_assumptions(p);
  EXPECT_TRUE(r.violations.empty());
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("q1"), std::string::npos);
}

TEST(Assumptions, UnderstatedGrowthExponentIsAViolation) {
  AssumptionReport r = check_assumptions({Nonlinearity::power(3.0), Nonlinearity::identity(), 1.0, 1.0});
  bool found = false;
  for (const auto& v : r.violations) found |= v.find("h1(z)") != std::string::npos;
  EXPECT_TRUE(found);
}
