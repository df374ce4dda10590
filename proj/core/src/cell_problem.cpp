#include "homoglab/cell_problem.hpp"

#include "homoglab/error.hpp"
#include "homoglab/fem.hpp"

#include <Eigen/LU>
#include <Eigen/SparseLU>

#include <json.hpp>

#include <array>
#include <cmath>

namespace homoglab {

namespace {

struct CellTriangle {
  std::array<int, 3> v;
  std::array<Eigen::Vector2d, 3> x;  // unwrapped corner coordinates
  std::array<Eigen::Vector2d, 3> grad;
  double area;
};

int wrap(int i, int n) { return ((i % n) + n) % n; }

// Square (i, j) split along v00-v11 when i + j is even and along v10-v01
// otherwise, matching the fitted meshes.
bool rising_diagonal(int i, int j) { return (i + j) % 2 == 0; }

std::array<CellTriangle, 2> square_triangles(int i, int j, int n) {
  const double h = 1.0 / n;
  auto id = [n](int a, int b) { return wrap(b, n) * n + wrap(a, n); };
  auto pt = [h](int a, int b) { return Eigen::Vector2d(a * h, b * h); };
  std::array<CellTriangle, 2> out;
  const std::array<std::array<int, 6>, 2> corners =
      rising_diagonal(i, j)
          ? std::array<std::array<int, 6>, 2>{{{i, j, i + 1, j, i + 1, j + 1}, {i, j, i + 1, j + 1, i, j + 1}}}
          : std::array<std::array<int, 6>, 2>{{{i, j, i + 1, j, i, j + 1}, {i + 1, j, i + 1, j + 1, i, j + 1}}};
  for (int t = 0; t < 2; ++t) {
    CellTriangle& ct = out[t];
    for (int c = 0; c < 3; ++c) {
      ct.v[c] = id(corners[t][2 * c], corners[t][2 * c + 1]);
      ct.x[c] = pt(corners[t][2 * c], corners[t][2 * c + 1]);
    }
    Eigen::Matrix2d jac;
    jac.col(0) = ct.x[1] - ct.x[0];
    jac.col(1) = ct.x[2] - ct.x[0];
    ct.area = 0.5 * std::abs(jac.determinant());
    Eigen::Matrix2d inv_t = jac.inverse().transpose();
    ct.grad[1] = inv_t.col(0);
    ct.grad[2] = inv_t.col(1);
    ct.grad[0] = -ct.grad[1] - ct.grad[2];
  }
  return out;
}

template <class Visit>
void for_each_triangle(int n, Visit&& visit) {
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (const CellTriangle& t : square_triangles(i, j, n)) visit(t);
}

Eigen::Vector2d quad_point(const CellTriangle& t, const Eigen::Vector3d& b) {
  return b[0] * t.x[0] + b[1] * t.x[1] + b[2] * t.x[2];
}

Eigen::Vector2d triangle_gradient(const CellTriangle& t, const Eigen::VectorXd& chi) {
  return chi[t.v[0]] * t.grad[0] + chi[t.v[1]] * t.grad[1] + chi[t.v[2]] * t.grad[2];
}

struct CellSystem {
  int n;
  Eigen::SparseLU<SparseMatrix> lu;
};

// Bordered system [A 1; 1^T 0]: the multiplier row enforces sum chi = 0, which
// is the exact Y-mean of a P1 function on this uniform periodic grid.
void factorize(const CoefficientField& d, int n, CellSystem& sys) {
  if (n < 2) throw InvalidArgument("cell resolution must be at least 2, got " + std::to_string(n));
  const int nv = n * n;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nv) * 14 + 2 * nv);
  const TriangleRule& rule = gauss3();
  for_each_triangle(n, [&](const CellTriangle& t) {
    Matrix2 dbar = Matrix2::Zero();
    for (int q = 0; q < 3; ++q) dbar += rule.weight[q] * d.at_cell(quad_point(t, rule.bary[q]));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        trip.emplace_back(t.v[a], t.v[b], t.area * t.grad[a].dot(dbar * t.grad[b]));
  });
  for (int v = 0; v < nv; ++v) {
    trip.emplace_back(v, nv, 1.0);
    trip.emplace_back(nv, v, 1.0);
  }
  SparseMatrix a(nv + 1, nv + 1);
  a.setFromTriplets(trip.begin(), trip.end());
  sys.n = n;
  sys.lu.analyzePattern(a);
  sys.lu.factorize(a);
  if (sys.lu.info() != Eigen::Success) throw SingularCellSystem("cell system factorization failed: " + sys.lu.lastErrorMessage());
}

Corrector solve_with(const CoefficientField& d, CellSystem& sys, const Eigen::Vector2d& lambda) {
  const int n = sys.n;
  const int nv = n * n;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nv + 1);
  const TriangleRule& rule = gauss3();
  for_each_triangle(n, [&](const CellTriangle& t) {
    Eigen::Vector2d flux = Eigen::Vector2d::Zero();
    for (int q = 0; q < 3; ++q) flux += rule.weight[q] * (d.at_cell(quad_point(t, rule.bary[q])) * lambda);
    for (int a = 0; a < 3; ++a) rhs[t.v[a]] -= t.area * t.grad[a].dot(flux);
  });
  Eigen::VectorXd sol = sys.lu.solve(rhs);
  if (!sol.allFinite()) throw SingularCellSystem("cell solve produced non-finite values");
  Corrector c;
  c.lambda = lambda;
  c.n = n;
  c.periodic_part = sol.head(nv);
  c.mean = c.periodic_part.mean();
  return c;
}

Eigen::Vector2d flux_mean(const CoefficientField& d, const Corrector& c) {
  const TriangleRule& rule = gauss3();
  Eigen::Vector2d total = Eigen::Vector2d::Zero();
  for_each_triangle(c.n, [&](const CellTriangle& t) {
    Eigen::Vector2d g = triangle_gradient(t, c.periodic_part) + c.lambda;
    for (int q = 0; q < 3; ++q) total += t.area * rule.weight[q] * (d.at_cell(quad_point(t, rule.bary[q])) * g);
  });
  return total;
}

// Triangle of the periodic grid containing y, with local coordinates.
CellTriangle locate(int n, const Eigen::Vector2d& y, Eigen::Vector3d& bary) {
  Eigen::Vector2d w(y[0] - std::floor(y[0]), y[1] - std::floor(y[1]));
  int i = std::min(static_cast<int>(w[0] * n), n - 1);
  int j = std::min(static_cast<int>(w[1] * n), n - 1);
  double s = w[0] * n - i;
  double r = w[1] * n - j;
  auto tris = square_triangles(i, j, n);
  // First triangle: below the rising diagonal (r <= s) or below the falling
  // one (r + s <= 1).
  const bool first = rising_diagonal(i, j) ? r <= s : r + s <= 1.0;
  const CellTriangle& t = first ? tris[0] : tris[1];
  Eigen::Matrix2d jac;
  jac.col(0) = t.x[1] - t.x[0];
  jac.col(1) = t.x[2] - t.x[0];
  Eigen::Vector2d lam = jac.inverse() * (Eigen::Vector2d(i + s, j + r) / n - t.x[0]);
  bary = Eigen::Vector3d(1.0 - lam[0] - lam[1], lam[0], lam[1]);
  return t;
}

}  // namespace

double Corrector::value(const Eigen::Vector2d& y) const {
  Eigen::Vector3d b;
  CellTriangle t = locate(n, y, b);
  return b[0] * periodic_part[t.v[0]] + b[1] * periodic_part[t.v[1]] + b[2] * periodic_part[t.v[2]];
}

Eigen::Vector2d Corrector::gradient(const Eigen::Vector2d& y) const {
  Eigen::Vector3d b;
  CellTriangle t = locate(n, y, b);
  return triangle_gradient(t, periodic_part) + lambda;
}

Corrector solve_corrector(const CoefficientField& d, const Eigen::Vector2d& lambda, int n) {
  CellSystem sys;
  factorize(d, n, sys);
  return solve_with(d, sys, lambda);
}

EffectiveTensor effective_tensor(const CoefficientField& d, int n) {
  CellSystem sys;
  factorize(d, n, sys);
  EffectiveTensor t;
  t.resolution = n;
  t.coefficient = d.name();
  for (int j = 0; j < 2; ++j) {
    Corrector c = solve_with(d, sys, Eigen::Vector2d::Unit(j));
    t.entries.col(j) = flux_mean(d, c);
  }
  return t;
}

double corrector_energy(const CoefficientField& d, const Corrector& c) {
  const TriangleRule& rule = gauss3();
  double total = 0.0;
  for_each_triangle(c.n, [&](const CellTriangle& t) {
    Eigen::Vector2d g = triangle_gradient(t, c.periodic_part) + c.lambda;
    for (int q = 0; q < 3; ++q)
      total += t.area * rule.weight[q] * g.dot(d.at_cell(quad_point(t, rule.bary[q])) * g);
  });
  return total;
}

std::string effective_tensor_to_json(const EffectiveTensor& t) {
  nlohmann::json doc;
  doc["format"] = "homoglab.effective_tensor";
  doc["coefficient"] = t.coefficient;
  doc["resolution"] = t.resolution;
  doc["D0"] = {{t.entries(0, 0), t.entries(0, 1)}, {t.entries(1, 0), t.entries(1, 1)}};
  return doc.dump(2);
}

EffectiveTensor effective_tensor_from_json(const std::string& text) {
  try {
    auto doc = nlohmann::json::parse(text);
    if (doc.at("format") != "homoglab.effective_tensor") throw IoFailure("not an effective tensor document");
    EffectiveTensor t;
    t.coefficient = doc.at("coefficient").get<std::string>();
    t.resolution = doc.at("resolution").get<int>();
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) t.entries(r, c) = doc.at("D0").at(r).at(c).get<double>();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw IoFailure(std::string("malformed effective tensor JSON: ") + e.what());
  }
}

}  // namespace homoglab
