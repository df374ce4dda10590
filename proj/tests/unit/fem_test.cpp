#include <homoglab/error.hpp>
#include <homoglab/fem.hpp>
#include <homoglab/solver.hpp>

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

using namespace homoglab;

namespace {

std::shared_ptr<BrokenMesh> unit_triangle() {
  auto m = std::make_shared<BrokenMesh>();
  m->vertices = {Point(0, 0), Point(1, 0), Point(0, 1)};
  m->triangles = {Triangle{{0, 1, 2}, Side::plus}};
  return m;
}

std::shared_ptr<const BrokenMesh> small_fitted(Rational eps = Rational(1, 2)) {
  DomainSpec s;
  s.epsilon = eps;
  s.k = Rational(1, 2);
  s.ell = 1.5;
  return std::make_shared<const BrokenMesh>(build_fitted_mesh(s, profiles::sawtooth(), 4, 3));
}

Vector random_vector(std::size_t n, unsigned seed, double scale = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  Vector v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

Eigen::MatrixXd dense(const SparseMatrix& a) { return Eigen::MatrixXd(a); }

double max_abs(const Eigen::MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Stiffness, UnitTriangle) {
  auto m = unit_triangle();
  Eigen::Matrix3d expected;
  expected << 1, -0.5, -0.5, -0.5, 0.5, 0, -0.5, 0, 0.5;
  EXPECT_LT(max_abs(dense(assemble_stiffness(*m, coefficients::identity(), 1.0)) - expected), 1e-15);
}

TEST(Stiffness, QuadraticFormOfX1IsArea) {
  BrokenMesh m = build_flat_mesh(1.0, 1.0, 8);
  SparseMatrix k = assemble_stiffness(m, coefficients::identity(), 1.0);
  Vector x1(m.vertex_count());
  for (std::size_t i = 0; i < m.vertex_count(); ++i) x1[i] = m.vertices[i].x();
  EXPECT_NEAR(x1.dot(k * x1), 2.0, 1e-13);
  // Constants lie in the kernel on each side separately.
  Vector ones = Vector::Ones(m.vertex_count());
  EXPECT_LT((k * ones).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Stiffness, LinearInCoefficient) {
  auto m = small_fitted();
  SparseMatrix a = assemble_stiffness(*m, coefficients::identity(), 0.5);
  SparseMatrix b = assemble_stiffness(*m, CoefficientField::constant(2.0 * Matrix2::Identity()), 0.5);
  EXPECT_EQ(max_abs(dense(b) - 2.0 * dense(a)), 0.0);
}

TEST(Stiffness, SymmetricPositiveSemidefinite) {
  auto m = small_fitted();
  Eigen::MatrixXd k = dense(assemble_stiffness(*m, coefficients::smooth(), 0.5));
  EXPECT_LE(max_abs(k - k.transpose()), 1e-12 * max_abs(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12 * max_abs(k));
  // Positive definite after Dirichlet elimination.
  DofMap dofs = DofMap::free_of(*m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> reduced(dense(dofs.restrict(assemble_stiffness(*m, coefficients::smooth(), 0.5))));
  EXPECT_GT(reduced.eigenvalues().minCoeff(), 0.0);
}

TEST(Load, PartitionOfUnity) {
  auto m = unit_triangle();
  Vector f = assemble_load(*m, [](const Point&) { return 1.0; });
  for (double v : f) EXPECT_NEAR(v, 1.0 / 6.0, 1e-16);
  BrokenMesh q = build_flat_mesh(1.5, 0.5, 6);
  EXPECT_NEAR(assemble_load(q, [](const Point&) { return 1.0; }).sum(), 1.5, 1e-13);
  EXPECT_EQ(assemble_load(q, [](const Point&) { return 0.0; }).cwiseAbs().maxCoeff(), 0.0);
}

TEST(VolumeNonlinearity, IdentityOnConstant) {
  auto m = unit_triangle();
  Vector u = Vector::Constant(3, 0.7);
  Linearization l = assemble_volume_nonlinearity(*m, Nonlinearity::identity(), u);
  for (double v : l.vector) EXPECT_NEAR(v, 0.7 / 6.0, 1e-15);
  Linearization z = assemble_volume_nonlinearity(*m, Nonlinearity::arctan_shifted(), Vector::Zero(3));
  EXPECT_EQ(z.vector.cwiseAbs().maxCoeff(), 0.0);
}

TEST(VolumeNonlinearity, ArctanAtZeroGivesMassMatrix) {
  auto m = small_fitted();
  Linearization l = assemble_volume_nonlinearity(*m, Nonlinearity::arctan(), Vector::Zero(m->vertex_count()));
  Eigen::MatrixXd mass = dense(assemble_mass(*m));
  EXPECT_LT(max_abs(dense(l.matrix) - mass), 1e-15);
  // Exact P1 mass on the unit triangle: area / 12 * (1 + delta_ij).
  Eigen::MatrixXd unit = dense(assemble_mass(*unit_triangle()));
  EXPECT_NEAR(unit(0, 0), 1.0 / 12.0, 1e-16);
  EXPECT_NEAR(unit(0, 1), 1.0 / 24.0, 1e-16);
}

TEST(InterfaceNonlinearity, ConstantJump) {
  auto m = small_fitted();
  Vector u = Vector::Zero(m->vertex_count());
  for (const auto& p : m->interface_pairs) u[p.plus] = 0.3;
  Linearization l = assemble_interface_nonlinearity(*m, Nonlinearity::identity(), u, 1.0);
  double plus = 0.0, minus = 0.0;
  for (const auto& p : m->interface_pairs) {
    plus += l.vector[p.plus];
    minus += l.vector[p.minus];
  }
  EXPECT_NEAR(plus, 0.3 * m->total_interface_length(), 1e-14);
  EXPECT_NEAR(minus, -plus, 1e-15);

  Linearization scaled = assemble_interface_nonlinearity(*m, Nonlinearity::identity(), u, 0.25);
  EXPECT_LT((scaled.vector - 0.25 * l.vector).cwiseAbs().maxCoeff(), 1e-16);

  Linearization zero =
      assemble_interface_nonlinearity(*m, Nonlinearity::rational_shifted(), Vector::Ones(m->vertex_count()), 1.0);
  EXPECT_EQ(zero.vector.cwiseAbs().maxCoeff(), 0.0);
}

TEST(InterfaceNonlinearity, NoPairsThrows) {
  BrokenMesh merged = build_flat_mesh(1.0, 1.0, 4, true);
  EXPECT_THROW(assemble_interface_nonlinearity(merged, Nonlinearity::identity(), Vector::Zero(merged.vertex_count()), 1.0),
               NoInterface);
}

TEST(InterfaceNonlinearity, DerivativeBlockIsPsd) {
  auto m = small_fitted();
  Vector u = random_vector(m->vertex_count(), 3, 2.0);
  for (const Nonlinearity& h : {Nonlinearity::rational_shifted(), Nonlinearity::power(1.5), Nonlinearity::arctan()}) {
    Eigen::MatrixXd j = dense(assemble_interface_nonlinearity(*m, h, u, 1.0).matrix);
    EXPECT_LE(max_abs(j - j.transpose()), 1e-12 * max_abs(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12) << h.name();
  }
}

TEST(Jacobian, MatchesFiniteDifferences) {
  auto m = small_fitted();
  const std::size_t n = m->vertex_count();
  for (unsigned seed = 1; seed <= 3; ++seed) {
    Vector u = random_vector(n, seed, 1.5);
    Vector v = random_vector(n, seed + 100);
    const double t = 1e-6;
    for (const Nonlinearity& h : {Nonlinearity::arctan_shifted(), Nonlinearity::rational_shifted(), Nonlinearity::power(3.0)}) {
      Vector jv = assemble_volume_nonlinearity(*m, h, u).matrix * v;
      Vector fd = (assemble_volume_nonlinearity(*m, h, u + t * v).vector -
                   assemble_volume_nonlinearity(*m, h, u - t * v).vector) / (2 * t);
      EXPECT_LE((jv - fd).norm(), 1e-6 * fd.norm()) << "volume " << h.name();

      Vector ji = assemble_interface_nonlinearity(*m, h, u, 0.7).matrix * v;
      Vector fdi = (assemble_interface_nonlinearity(*m, h, u + t * v, 0.7).vector -
                    assemble_interface_nonlinearity(*m, h, u - t * v, 0.7).vector) / (2 * t);
      EXPECT_LE((ji - fdi).norm(), 1e-6 * fdi.norm()) << "interface " << h.name();
    }
  }
}

TEST(Energy, ResidualIsGradientOfEnergy) {
  auto m = small_fitted();
  DiscreteProblem p{m, coefficients::smooth(), 0.5, NonlinearityPair::standard(),
                    [](const Point& x) { return std::sin(3 * x.x()) + x.y(); }, 0.8};
  MonotoneSystem sys(p);
  const std::size_t n = sys.dofs().size();
  for (unsigned seed = 1; seed <= 3; ++seed) {
    Vector u = random_vector(n, seed, 2.0);
    Vector v = random_vector(n, seed + 50);
    const double t = 1e-5;
    double fd = (sys.energy(u + t * v) - sys.energy(u - t * v)) / (2 * t);
    double exact = sys.residual(u).dot(v);
    EXPECT_NEAR(exact, fd, 1e-6 * std::abs(fd));
    Linearization l = sys.linearize(u);
    EXPECT_LT((l.vector - sys.residual(u)).norm(), 1e-13 * l.vector.norm());
    Eigen::MatrixXd j = dense(l.matrix);
    EXPECT_LE(max_abs(j - j.transpose()), 1e-12 * max_abs(j));
  }
}

TEST(Norms, LinearFunctionAndConstantJump) {
  auto m = std::make_shared<const BrokenMesh>(build_flat_mesh(1.0, 1.0, 8));
  auto zero = BrokenFemFunction::zero(m);
  Norms z = norms(zero);
  EXPECT_EQ(z.l2, 0.0);
  EXPECT_EQ(z.broken_h1, 0.0);
  EXPECT_EQ(z.jump_l2, 0.0);

  auto x1 = BrokenFemFunction::interpolate(m, [](const Point& x, Side) { return x.x(); });
  Norms a = norms(x1);
  EXPECT_NEAR(a.broken_h1, std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(a.l2, std::sqrt(2.0 / 3.0), 1e-13);
  EXPECT_EQ(a.jump_l2, 0.0);

  auto sign = BrokenFemFunction::interpolate(m, [](const Point&, Side s) { return s == Side::plus ? 1.0 : -1.0; });
  Norms b = norms(sign);
  EXPECT_NEAR(b.jump_l2, 2.0, 1e-13);
  EXPECT_NEAR(b.broken_h1, 0.0, 1e-13);
  EXPECT_NEAR(b.l2, std::sqrt(2.0), 1e-13);
}

TEST(Norms, JumpOnRoughInterface) {
  DomainSpec s;
  s.epsilon = Rational(1, 4);
  auto m = std::make_shared<const BrokenMesh>(build_fitted_mesh(s, profiles::sawtooth(), 8, 4));
  auto sign = BrokenFemFunction::interpolate(m, [](const Point&, Side s) { return s == Side::plus ? 1.0 : -1.0; });
  EXPECT_NEAR(norms(sign).jump_l2, 2.0 * std::pow(5.0, 0.25), 1e-12);
}

TEST(Evaluate, VerticesBarycentersAndSides) {
  auto m = std::make_shared<const BrokenMesh>(build_flat_mesh(1.0, 1.0, 4));
  Vector vals = random_vector(m->vertex_count(), 11);
  BrokenFemFunction u(m, vals);
  PointLocator loc(*m);
  for (std::size_t t = 0; t < m->triangles.size(); t += 5) {
    const Triangle& tri = m->triangles[t];
    Point c = (m->vertices[tri.v[0]] + m->vertices[tri.v[1]] + m->vertices[tri.v[2]]) / 3.0;
    double mean = (vals[tri.v[0]] + vals[tri.v[1]] + vals[tri.v[2]]) / 3.0;
    EXPECT_NEAR(evaluate(u, loc, c), mean, 1e-14);
  }
  const InterfacePair& p = m->interface_pairs[2];
  std::vector<EvalPoint> pts{{m->vertices[p.plus], Side::plus}, {m->vertices[p.minus], Side::minus},
                             {m->vertices[0], std::nullopt}};
  auto got = evaluate_at_points(u, pts);
  EXPECT_NEAR(got[0], vals[p.plus], 1e-15);
  EXPECT_NEAR(got[1], vals[p.minus], 1e-15);
  EXPECT_NEAR(got[2], vals[0], 1e-15);

  std::vector<EvalPoint> unsided{{m->vertices[p.plus], std::nullopt}};
  EXPECT_THROW(evaluate_at_points(u, unsided), InvalidArgument);
  std::vector<EvalPoint> outside{{Point(1.5, 0.2), std::nullopt}};
  EXPECT_THROW(evaluate_at_points(u, outside), PointOutsideDomain);
}

TEST(FemFunction, DirichletMembershipAndJson) {
  auto m = small_fitted();
  auto u = BrokenFemFunction::interpolate(m, [](const Point& x, Side) { return x.x() * (1.0 - x.x()) * (2.25 - x.y() * x.y()); });
  EXPECT_TRUE(u.satisfies_dirichlet());
  auto back = function_from_json(function_to_json(u), m);
  EXPECT_EQ((back.values() - u.values()).cwiseAbs().maxCoeff(), 0.0);
  auto other = std::make_shared<const BrokenMesh>(build_flat_mesh(1.0, 1.0, 4));
  EXPECT_THROW(function_from_json(function_to_json(u), other), IoFailure);
  auto one = BrokenFemFunction::interpolate(m, [](const Point&, Side) { return 1.0; });
  EXPECT_FALSE(one.satisfies_dirichlet());
}

TEST(FemFunction, CooDump) {
  std::ostringstream os;
  write_coo(os, assemble_stiffness(*unit_triangle(), coefficients::identity(), 1.0));
  std::istringstream is(os.str());
  int rows, cols, nnz;
  is >> rows >> cols >> nnz;
  EXPECT_EQ(rows, 3);
  EXPECT_EQ(cols, 3);
  EXPECT_EQ(nnz, 9);
}

TEST(Assembly, IndependentOfThreadCount) {
  auto m = small_fitted(Rational(1, 8));
  Vector u = random_vector(m->vertex_count(), 5);
  setenv("HOMOGLAB_THREADS", "1", 1);
  SparseMatrix a = assemble_stiffness(*m, coefficients::smooth(), 0.125);
  Vector ra = assemble_volume_nonlinearity(*m, Nonlinearity::arctan_shifted(), u).vector;
  setenv("HOMOGLAB_THREADS", "4", 1);
  SparseMatrix b = assemble_stiffness(*m, coefficients::smooth(), 0.125);
  Vector rb = assemble_volume_nonlinearity(*m, Nonlinearity::arctan_shifted(), u).vector;
  unsetenv("HOMOGLAB_THREADS");
  EXPECT_EQ(max_abs(dense(a) - dense(b)), 0.0);
  EXPECT_EQ((ra - rb).cwiseAbs().maxCoeff(), 0.0);
}
