#include "homoglab/fem.hpp"

#include "homoglab/error.hpp"
#include "homoglab/parallel.hpp"

#include <cmath>
#include <utility>

namespace homoglab {

namespace {

constexpr std::size_t kChunk = 8192;

using Triplets = std::vector<Eigen::Triplet<double>>;
using Entries = std::vector<std::pair<int, double>>;

/// Runs `element(index, triplets, entries)` over [0, count) in fixed chunks and
/// merges the chunks in order, so the result matches a serial loop exactly.
template <class Element>
void assemble_chunks(std::size_t count, std::size_t rows, bool with_matrix, bool with_vector,
                     Element&& element, SparseMatrix* matrix, Vector* vector) {
  const std::size_t chunks = chunk_count(count, kChunk);
  std::vector<Triplets> trips(chunks);
  std::vector<Entries> entries(chunks);
  parallel_chunks(count, kChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) element(i, trips[c], entries[c]);
  });
  if (with_matrix) {
    std::size_t total = 0;
    for (const auto& t : trips) total += t.size();
    Triplets all;
    all.reserve(total);
    for (auto& t : trips) all.insert(all.end(), t.begin(), t.end());
    matrix->resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
    matrix->setFromTriplets(all.begin(), all.end());
  }
  if (with_vector) {
    vector->setZero(static_cast<Eigen::Index>(rows));
    for (const auto& e : entries)
      for (const auto& [row, value] : e) (*vector)(row) += value;
  }
}

Point quad_point(const BrokenMesh& mesh, const Triangle& tri, const Eigen::Vector3d& bary) {
  return bary(0) * mesh.vertices[tri.v[0]] + bary(1) * mesh.vertices[tri.v[1]] +
         bary(2) * mesh.vertices[tri.v[2]];
}

double jump_at(const BrokenMesh& mesh, const Vector& u, int pair) {
  const auto& p = mesh.interface_pairs[pair];
  return u(p.plus) - u(p.minus);
}

const std::array<double, 2>& segment_nodes() {
  static const std::array<double, 2> s = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
  return s;
}

}  // namespace

BrokenFemFunction::BrokenFemFunction(std::shared_ptr<const BrokenMesh> mesh, Vector values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (!mesh_) throw InvalidArgument("BrokenFemFunction needs a mesh");
  if (static_cast<std::size_t>(values_.size()) != mesh_->vertex_count())
    throw InvalidArgument("BrokenFemFunction: " + std::to_string(values_.size()) + " values for " +
                          std::to_string(mesh_->vertex_count()) + " vertices");
}

BrokenFemFunction BrokenFemFunction::zero(std::shared_ptr<const BrokenMesh> mesh) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(mesh->vertex_count()));
  return BrokenFemFunction(std::move(mesh), std::move(v));
}

BrokenFemFunction BrokenFemFunction::interpolate(std::shared_ptr<const BrokenMesh> mesh,
                                                 const std::function<double(const Point&, Side)>& fn) {
  auto sides = vertex_sides(*mesh);
  Vector v(static_cast<Eigen::Index>(mesh->vertex_count()));
  for (std::size_t i = 0; i < mesh->vertex_count(); ++i) v(i) = fn(mesh->vertices[i], sides[i]);
  return BrokenFemFunction(std::move(mesh), std::move(v));
}

bool BrokenFemFunction::satisfies_dirichlet() const {
  for (int v : mesh_->boundary_vertices)
    if (values_(v) != 0.0) return false;
  return true;
}

std::vector<Side> vertex_sides(const BrokenMesh& mesh) {
  std::vector<Side> sides(mesh.vertex_count(), Side::minus);
  for (const auto& t : mesh.triangles)
    if (t.side == Side::plus)
      for (int v : t.v) sides[v] = Side::plus;
  // Merged meshes share the interface row; report it as minus consistently.
  if (mesh.merged) {
    for (const auto& t : mesh.triangles)
      if (t.side == Side::minus)
        for (int v : t.v) sides[v] = Side::minus;
  }
  return sides;
}

DofMap DofMap::all(std::size_t vertex_count) {
  DofMap m;
  m.row_of_.resize(vertex_count);
  m.vertex_of_.resize(vertex_count);
  for (std::size_t i = 0; i < vertex_count; ++i) {
    m.row_of_[i] = static_cast<int>(i);
    m.vertex_of_[i] = static_cast<int>(i);
  }
  return m;
}

DofMap DofMap::free_of(const BrokenMesh& mesh) {
  DofMap m;
  auto mask = mesh.boundary_mask();
  m.row_of_.assign(mesh.vertex_count(), -1);
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    if (mask[i]) continue;
    m.row_of_[i] = static_cast<int>(m.vertex_of_.size());
    m.vertex_of_.push_back(static_cast<int>(i));
  }
  return m;
}

Vector DofMap::restrict(const Vector& full) const {
  Vector r(static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < size(); ++i) r(i) = full(vertex_of_[i]);
  return r;
}

Vector DofMap::expand(const Vector& reduced) const {
  Vector f = Vector::Zero(static_cast<Eigen::Index>(vertex_count()));
  for (std::size_t i = 0; i < size(); ++i) f(vertex_of_[i]) = reduced(i);
  return f;
}

SparseMatrix DofMap::restrict(const SparseMatrix& full) const {
  Triplets trips;
  trips.reserve(static_cast<std::size_t>(full.nonZeros()));
  for (int col = 0; col < full.outerSize(); ++col) {
    int c = row_of_[col];
    if (c < 0) continue;
    for (SparseMatrix::InnerIterator it(full, col); it; ++it) {
      int r = row_of_[it.row()];
      if (r >= 0) trips.emplace_back(r, c, it.value());
    }
  }
  SparseMatrix out(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(size()));
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

ElementGeometry element_geometry(const BrokenMesh& mesh, const Triangle& tri) {
  const Point& a = mesh.vertices[tri.v[0]];
  const Point& b = mesh.vertices[tri.v[1]];
  const Point& c = mesh.vertices[tri.v[2]];
  double det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
  ElementGeometry g;
  g.area = 0.5 * std::abs(det);
  g.grad[0] = Eigen::Vector2d(b.y() - c.y(), c.x() - b.x()) / det;
  g.grad[1] = Eigen::Vector2d(c.y() - a.y(), a.x() - c.x()) / det;
  g.grad[2] = Eigen::Vector2d(a.y() - b.y(), b.x() - a.x()) / det;
  return g;
}

const TriangleRule& gauss3() {
  static const TriangleRule rule = {
      {Eigen::Vector3d(2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0), Eigen::Vector3d(1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0),
       Eigen::Vector3d(1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0)},
      {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
  return rule;
}

SparseMatrix assemble_stiffness(const BrokenMesh& mesh, const CoefficientField& d, double eps) {
  return assemble_stiffness(mesh, d, eps, DofMap::all(mesh.vertex_count()));
}

SparseMatrix assemble_stiffness(const BrokenMesh& mesh, const CoefficientField& d, double eps,
                                const DofMap& map) {
  const auto& rule = gauss3();
  SparseMatrix k;
  assemble_chunks(
      mesh.triangles.size(), map.size(), true, false,
      [&](std::size_t t, Triplets& trips, Entries&) {
        const Triangle& tri = mesh.triangles[t];
        ElementGeometry g = element_geometry(mesh, tri);
        Matrix2 dint = Matrix2::Zero();
        if (d.is_constant()) {
          dint = d.at(mesh.vertices[tri.v[0]], eps);
        } else {
          for (int q = 0; q < 3; ++q) dint += rule.weight[q] * d.at(quad_point(mesh, tri, rule.bary[q]), eps);
        }
        dint *= g.area;
        for (int i = 0; i < 3; ++i) {
          int r = map[tri.v[i]];
          if (r < 0) continue;
          for (int j = 0; j < 3; ++j) {
            int c = map[tri.v[j]];
            if (c < 0) continue;
            trips.emplace_back(r, c, g.grad[i].dot(dint * g.grad[j]));
          }
        }
      },
      &k, nullptr);
  return k;
}

SparseMatrix assemble_mass(const BrokenMesh& mesh) {
  SparseMatrix m;
  assemble_chunks(
      mesh.triangles.size(), mesh.vertex_count(), true, false,
      [&](std::size_t t, Triplets& trips, Entries&) {
        const Triangle& tri = mesh.triangles[t];
        double area = element_geometry(mesh, tri).area;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) trips.emplace_back(tri.v[i], tri.v[j], area * (i == j ? 2.0 : 1.0) / 12.0);
      },
      &m, nullptr);
  return m;
}

Vector assemble_load(const BrokenMesh& mesh, const ScalarField& f) {
  return assemble_load(mesh, f, DofMap::all(mesh.vertex_count()));
}

Vector assemble_load(const BrokenMesh& mesh, const ScalarField& f, const DofMap& map) {
  const auto& rule = gauss3();
  Vector b;
  assemble_chunks(
      mesh.triangles.size(), map.size(), false, true,
      [&](std::size_t t, Triplets&, Entries& entries) {
        const Triangle& tri = mesh.triangles[t];
        double area = element_geometry(mesh, tri).area;
        Eigen::Vector3d local = Eigen::Vector3d::Zero();
        for (int q = 0; q < 3; ++q)
          local += rule.weight[q] * f(quad_point(mesh, tri, rule.bary[q])) * rule.bary[q];
        for (int i = 0; i < 3; ++i) {
          int r = map[tri.v[i]];
          if (r >= 0) entries.emplace_back(r, area * local(i));
        }
      },
      nullptr, &b);
  return b;
}

Linearization assemble_volume_nonlinearity(const BrokenMesh& mesh, const Nonlinearity& h1, const Vector& u) {
  return assemble_volume_nonlinearity(mesh, h1, u, DofMap::all(mesh.vertex_count()), true);
}

Linearization assemble_volume_nonlinearity(const BrokenMesh& mesh, const Nonlinearity& h1, const Vector& u,
                                           const DofMap& map, bool with_matrix) {
  const auto& rule = gauss3();
  Linearization out;
  assemble_chunks(
      mesh.triangles.size(), map.size(), with_matrix, true,
      [&](std::size_t t, Triplets& trips, Entries& entries) {
        const Triangle& tri = mesh.triangles[t];
        double area = element_geometry(mesh, tri).area;
        Eigen::Vector3d nodal(u(tri.v[0]), u(tri.v[1]), u(tri.v[2]));
        Eigen::Vector3d vec = Eigen::Vector3d::Zero();
        Eigen::Matrix3d mat = Eigen::Matrix3d::Zero();
        for (int q = 0; q < 3; ++q) {
          const Eigen::Vector3d& lam = rule.bary[q];
          double uq = lam.dot(nodal);
          double w = area * rule.weight[q];
          vec += w * h1.value(uq) * lam;
          if (with_matrix) mat += w * h1.derivative(uq) * lam * lam.transpose();
        }
        for (int i = 0; i < 3; ++i) {
          int r = map[tri.v[i]];
          if (r < 0) continue;
          entries.emplace_back(r, vec(i));
          if (!with_matrix) continue;
          for (int j = 0; j < 3; ++j) {
            int c = map[tri.v[j]];
            if (c >= 0) trips.emplace_back(r, c, mat(i, j));
          }
        }
      },
      &out.matrix, &out.vector);
  return out;
}

Linearization assemble_interface_nonlinearity(const BrokenMesh& mesh, const Nonlinearity& h2, const Vector& u,
                                              double weight) {
  return assemble_interface_nonlinearity(mesh, h2, u, weight, DofMap::all(mesh.vertex_count()), true);
}

Linearization assemble_interface_nonlinearity(const BrokenMesh& mesh, const Nonlinearity& h2, const Vector& u,
                                              double weight, const DofMap& map, bool with_matrix) {
  if (mesh.interface_pairs.empty()) throw NoInterface("mesh has no interface pairs");
  const auto& s = segment_nodes();
  Linearization out;
  assemble_chunks(
      mesh.interface_segments.size(), map.size(), with_matrix, true,
      [&](std::size_t i, Triplets& trips, Entries& entries) {
        const InterfaceSegment& seg = mesh.interface_segments[i];
        const InterfacePair* pair[2] = {&mesh.interface_pairs[seg.pair_a], &mesh.interface_pairs[seg.pair_b]};
        double ja = jump_at(mesh, u, seg.pair_a);
        double jb = jump_at(mesh, u, seg.pair_b);
        Eigen::Vector2d vec = Eigen::Vector2d::Zero();
        Eigen::Matrix2d mat = Eigen::Matrix2d::Zero();
        for (double sq : s) {
          Eigen::Vector2d phi(1.0 - sq, sq);
          double j = phi(0) * ja + phi(1) * jb;
          double w = weight * 0.5 * seg.length;
          vec += w * h2.value(j) * phi;
          if (with_matrix) mat += w * h2.derivative(j) * phi * phi.transpose();
        }
        for (int a = 0; a < 2; ++a) {
          int rows[2] = {map[pair[a]->plus], map[pair[a]->minus]};
          double sign_r[2] = {1.0, -1.0};
          for (int sr = 0; sr < 2; ++sr) {
            if (rows[sr] < 0) continue;
            entries.emplace_back(rows[sr], sign_r[sr] * vec(a));
            if (!with_matrix) continue;
            for (int b = 0; b < 2; ++b) {
              int cols[2] = {map[pair[b]->plus], map[pair[b]->minus]};
              for (int sc = 0; sc < 2; ++sc) {
                if (cols[sc] < 0) continue;
                trips.emplace_back(rows[sr], cols[sc], sign_r[sr] * sign_r[sc] * mat(a, b));
              }
            }
          }
        }
      },
      &out.matrix, &out.vector);
  return out;
}

double volume_energy(const BrokenMesh& mesh, const Nonlinearity& h1, const Vector& u) {
  const auto& rule = gauss3();
  double sum = 0.0;
  for (const auto& tri : mesh.triangles) {
    double area = element_geometry(mesh, tri).area;
    Eigen::Vector3d nodal(u(tri.v[0]), u(tri.v[1]), u(tri.v[2]));
    for (int q = 0; q < 3; ++q) sum += area * rule.weight[q] * h1.primitive(rule.bary[q].dot(nodal));
  }
  return sum;
}

double interface_energy(const BrokenMesh& mesh, const Nonlinearity& h2, const Vector& u, double weight) {
  if (mesh.interface_pairs.empty()) return 0.0;
  const auto& s = segment_nodes();
  double sum = 0.0;
  for (const auto& seg : mesh.interface_segments) {
    double ja = jump_at(mesh, u, seg.pair_a);
    double jb = jump_at(mesh, u, seg.pair_b);
    for (double sq : s) sum += 0.5 * seg.length * h2.primitive((1.0 - sq) * ja + sq * jb);
  }
  return weight * sum;
}

Norms norms(const BrokenFemFunction& fn) {
  const BrokenMesh& mesh = fn.mesh();
  const Vector& u = fn.values();
  double l2 = 0.0, h1 = 0.0, jump = 0.0;
  for (const auto& tri : mesh.triangles) {
    ElementGeometry g = element_geometry(mesh, tri);
    double a = u(tri.v[0]), b = u(tri.v[1]), c = u(tri.v[2]);
    l2 += g.area / 12.0 * (a * a + b * b + c * c + (a + b + c) * (a + b + c));
    Eigen::Vector2d grad = a * g.grad[0] + b * g.grad[1] + c * g.grad[2];
    h1 += g.area * grad.squaredNorm();
  }
  for (const auto& seg : mesh.interface_segments) {
    double ja = jump_at(mesh, u, seg.pair_a);
    double jb = jump_at(mesh, u, seg.pair_b);
    double jm = 0.5 * (ja + jb);
    jump += seg.length / 6.0 * (ja * ja + 4.0 * jm * jm + jb * jb);
  }
  return {std::sqrt(l2), std::sqrt(h1), std::sqrt(jump)};
}

}  // namespace homoglab
