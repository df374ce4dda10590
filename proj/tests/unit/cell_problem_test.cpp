#include <homoglab/cell_problem.hpp>
#include <homoglab/error.hpp>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace homoglab;

namespace {

const Eigen::Vector2d e1(1.0, 0.0);
const Eigen::Vector2d e2(0.0, 1.0);

// Midpoint-rule means of a and 1/a over the unit square.
std::pair<double, double> arithmetic_and_harmonic(const CoefficientField& d, int m = 400) {
  double mean = 0.0, inverse = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double a = d.at_cell(Point((i + 0.5) / m, (j + 0.5) / m))(0, 0);
      mean += a;
      inverse += 1.0 / a;
    }
  return {mean / (m * m), (m * m) / inverse};
}

}  // namespace

TEST(Corrector, IdentityHasNoPeriodicPart) {
  for (const Eigen::Vector2d& lambda : {e1, e2, Eigen::Vector2d(0.3, -2.0)}) {
    Corrector c = solve_corrector(coefficients::identity(), lambda, 8);
    EXPECT_LT(c.periodic_part.cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Corrector, LaminateGradientIsHarmonicMeanOverA) {
  const CoefficientField d = coefficients::laminate(1.0, 4.0);
  Corrector c = solve_corrector(d, e1, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      Eigen::Vector2d y((i + 0.3) / 16, (j + 0.6) / 16);
      double a = d.at_cell(y)(0, 0);
      Eigen::Vector2d g = c.gradient(y);
      EXPECT_NEAR(g.x(), 1.6 / a, 1e-11);
      EXPECT_NEAR(g.y(), 0.0, 1e-11);
    }
}

TEST(Corrector, LinearInLambda) {
  const CoefficientField d = coefficients::smooth();
  Corrector a = solve_corrector(d, e1, 12);
  Corrector b = solve_corrector(d, e2, 12);
  Corrector s = solve_corrector(d, e1 + e2, 12);
  EXPECT_LT((s.periodic_part - a.periodic_part - b.periodic_part).cwiseAbs().maxCoeff(), 1e-12);
  Corrector scaled = solve_corrector(d, -3.0 * e1, 12);
  EXPECT_LT((scaled.periodic_part + 3.0 * a.periodic_part).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Corrector, ZeroMeanAndPeriodic) {
  Corrector c = solve_corrector(coefficients::smooth(), Eigen::Vector2d(1.0, 0.5), 16);
  EXPECT_LE(std::abs(c.mean), 1e-12);
  EXPECT_LE(std::abs(c.periodic_part.mean()), 1e-12);
  for (double t : {0.1, 0.45, 0.77}) {
    EXPECT_NEAR(c.value({1.0 - 1e-13, t}), c.value({0.0, t}), 1e-11);
    EXPECT_NEAR(c.value({t, 1.0 - 1e-13}), c.value({t, 0.0}), 1e-11);
  }
}

TEST(Corrector, RejectsTinyGrid) {
  EXPECT_THROW(solve_corrector(coefficients::smooth(), e1, 1), InvalidArgument);
}

TEST(EffectiveTensor, ConstantCoefficientReproducesItself) {
  EffectiveTensor t = effective_tensor(coefficients::diagonal(2.0, 3.0), 8);
  EXPECT_NEAR(t.entries(0, 0), 2.0, 1e-13);
  EXPECT_NEAR(t.entries(1, 1), 3.0, 1e-13);
  EXPECT_NEAR(t.entries(0, 1), 0.0, 1e-13);
  EXPECT_NEAR(t.entries(1, 0), 0.0, 1e-13);
}

TEST(EffectiveTensor, LaminateMatchesOneDimensionalMeans) {
  const CoefficientField d = coefficients::laminate(1.0, 4.0);
  auto [arith, harm] = arithmetic_and_harmonic(d);
  EffectiveTensor t = effective_tensor(d, 64);
  EXPECT_NEAR(t.entries(0, 0), harm, 1e-10);
  EXPECT_NEAR(t.entries(1, 1), arith, 1e-10);
  EXPECT_NEAR(t.entries(0, 1), 0.0, 1e-12);
  EXPECT_NEAR(harm, 1.6, 1e-12);
  EXPECT_NEAR(arith, 2.5, 1e-12);
}

TEST(EffectiveTensor, SymmetricWithinVoigtReussBounds) {
  for (const CoefficientField& d : {coefficients::smooth(), coefficients::laminate(1.0, 4.0)}) {
    EffectiveTensor t = effective_tensor(d, 32);
    EXPECT_LE((t.entries - t.entries.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    Eigen::SelfAdjointEigenSolver<Matrix2> es(t.entries);
    auto [arith, harm] = arithmetic_and_harmonic(d);
    EXPECT_GE(es.eigenvalues()(0), d.alpha());
    EXPECT_LE(es.eigenvalues()(1), d.beta());
    EXPECT_GE(es.eigenvalues()(0), harm - 1e-3);
    EXPECT_LE(es.eigenvalues()(1), arith + 1e-3);
  }
}

TEST(EffectiveTensor, EnergyFormAgrees) {
  const CoefficientField d = coefficients::smooth();
  EffectiveTensor t = effective_tensor(d, 32);
  for (const Eigen::Vector2d& lambda : {e1, e2, Eigen::Vector2d(1.0, -0.4)}) {
    Corrector c = solve_corrector(d, lambda, 32);
    double form = lambda.dot(t.entries * lambda);
    EXPECT_NEAR(corrector_energy(d, c), form, 1e-8 * form);
  }
}

TEST(EffectiveTensor, ResolutionConvergenceIsMonotone) {
  const CoefficientField d = coefficients::smooth();
  Matrix2 previous = effective_tensor(d, 8).entries;
  double last_gap = INFINITY;
  for (int n : {16, 32, 64}) {
    Matrix2 current = effective_tensor(d, n).entries;
    double gap = (current - previous).norm();
    EXPECT_LT(gap, last_gap) << "n = " << n;
    last_gap = gap;
    previous = current;
  }
  // Exact at every even resolution for the laminate.
  const CoefficientField lam = coefficients::laminate(1.0, 4.0);
  EXPECT_LE((effective_tensor(lam, 8).entries - effective_tensor(lam, 32).entries).norm(), 1e-12);
}

TEST(EffectiveTensor, JsonRoundTrip) {
  EffectiveTensor t = effective_tensor(coefficients::smooth(), 8);
  EffectiveTensor back = effective_tensor_from_json(effective_tensor_to_json(t));
  EXPECT_EQ(back.entries, t.entries);
  EXPECT_EQ(back.resolution, 8);
  EXPECT_EQ(back.coefficient, "smooth");
}
