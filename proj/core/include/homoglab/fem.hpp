#pragma once

#include "homoglab/coefficient.hpp"
#include "homoglab/mesh.hpp"
#include "homoglab/nonlinearity.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace homoglab {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using ScalarField = std::function<double(const Point&)>;

/// P1 function on a broken mesh: one value per vertex, so the two copies of
/// an interface vertex carry the independent traces u+ and u-.
class BrokenFemFunction {
 public:
  BrokenFemFunction(std::shared_ptr<const BrokenMesh> mesh, Vector values);

  static BrokenFemFunction zero(std::shared_ptr<const BrokenMesh> mesh);
  /// Nodal interpolation; `side` tells which copy an interface vertex is.
  static BrokenFemFunction interpolate(std::shared_ptr<const BrokenMesh> mesh,
                                       const std::function<double(const Point&, Side)>& fn);

  const BrokenMesh& mesh() const noexcept { return *mesh_; }
  const std::shared_ptr<const BrokenMesh>& mesh_ptr() const noexcept { return mesh_; }
  const Vector& values() const noexcept { return values_; }

  /// True when every Dirichlet vertex holds exactly zero (membership in W_0).
  bool satisfies_dirichlet() const;

 private:
  std::shared_ptr<const BrokenMesh> mesh_;
  Vector values_;
};

/// Side of every vertex, from the triangles it belongs to.
std::vector<Side> vertex_sides(const BrokenMesh& mesh);

/// Maps vertices to equation rows. Eliminated (Dirichlet) vertices map to -1.
class DofMap {
 public:
  static DofMap all(std::size_t vertex_count);
  static DofMap free_of(const BrokenMesh& mesh);

  int operator[](int vertex) const { return row_of_[vertex]; }
  std::size_t size() const noexcept { return vertex_of_.size(); }
  std::size_t vertex_count() const noexcept { return row_of_.size(); }
  std::span<const int> vertices() const noexcept { return vertex_of_; }

  Vector restrict(const Vector& full) const;
  /// Zero-extends a reduced vector to all vertices.
  Vector expand(const Vector& reduced) const;
  /// Principal submatrix on the mapped rows/columns of a full matrix.
  SparseMatrix restrict(const SparseMatrix& full) const;

 private:
  std::vector<int> row_of_;
  std::vector<int> vertex_of_;
};

/// Area and constant barycentric gradients of one triangle.
struct ElementGeometry {
  double area;
  std::array<Eigen::Vector2d, 3> grad;
};
ElementGeometry element_geometry(const BrokenMesh& mesh, const Triangle& tri);

/// Symmetric 3-point rule (degree 2) used for all assembly.
struct TriangleRule {
  std::array<Eigen::Vector3d, 3> bary;
  std::array<double, 3> weight;
};
const TriangleRule& gauss3();

/// Sum over triangles of int D(x/eps) grad phi_i . grad phi_j.
SparseMatrix assemble_stiffness(const BrokenMesh& mesh, const CoefficientField& d, double eps);
SparseMatrix assemble_stiffness(const BrokenMesh& mesh, const CoefficientField& d, double eps,
                                const DofMap& map);
/// Exact P1 mass matrix.
SparseMatrix assemble_mass(const BrokenMesh& mesh);
Vector assemble_load(const BrokenMesh& mesh, const ScalarField& f);
Vector assemble_load(const BrokenMesh& mesh, const ScalarField& f, const DofMap& map);

/// A residual contribution and its derivative.
struct Linearization {
  Vector vector;
  SparseMatrix matrix;
};

/// int h1(u) phi_i and int h1'(u) phi_i phi_j. `u` holds one value per vertex.
Linearization assemble_volume_nonlinearity(const BrokenMesh& mesh, const Nonlinearity& h1,
                                           const Vector& u);
Linearization assemble_volume_nonlinearity(const BrokenMesh& mesh, const Nonlinearity& h1,
                                           const Vector& u, const DofMap& map, bool with_matrix = true);

/// weight * int_Gamma h2([u]) [phi] with 2-point Gauss on each segment, and
/// its derivative with the [[+, -], [-, +]] coupling of paired vertices.
/// Throws NoInterface when the mesh has no interface pairs.
Linearization assemble_interface_nonlinearity(const BrokenMesh& mesh, const Nonlinearity& h2,
                                              const Vector& u, double weight);
Linearization assemble_interface_nonlinearity(const BrokenMesh& mesh, const Nonlinearity& h2,
                                              const Vector& u, double weight, const DofMap& map,
                                              bool with_matrix = true);

/// int H1(u) dx with the same quadrature as the residual.
double volume_energy(const BrokenMesh& mesh, const Nonlinearity& h1, const Vector& u);
/// weight * int_Gamma H2([u]) dsigma with the same quadrature as the residual.
double interface_energy(const BrokenMesh& mesh, const Nonlinearity& h2, const Vector& u, double weight);

struct Norms {
  double l2;
  double broken_h1;
  double jump_l2;
};
/// Exact for P1 data: ||u||_{L2(Q)}, ||grad u||_{L2(Q \ Gamma)}, ||u+ - u-||_{L2(Gamma)}.
Norms norms(const BrokenFemFunction& u);

struct PointLocation {
  int triangle;
  Eigen::Vector3d bary;
};

/// Uniform bucket grid over Q for triangle lookup.
class PointLocator {
 public:
  explicit PointLocator(const BrokenMesh& mesh);

  /// Triangle containing x, restricted to `side` when given.
  std::optional<PointLocation> locate(const Point& x, std::optional<Side> side = std::nullopt) const;

 private:
  const BrokenMesh* mesh_;
  double x0_, y0_, hx_, hy_;
  int nx_, ny_;
  std::vector<int> start_;
  std::vector<int> items_;
};

struct EvalPoint {
  Point x;
  std::optional<Side> side;
};

/// P1 interpolation at points. Points on the interface of a broken mesh need
/// a side flag (InvalidArgument otherwise); points outside Q throw
/// PointOutsideDomain.
std::vector<double> evaluate_at_points(const BrokenFemFunction& u, std::span<const EvalPoint> points);

/// Single evaluation with a prebuilt locator; side defaults to the geometric side.
double evaluate(const BrokenFemFunction& u, const PointLocator& locator, const Point& x,
                std::optional<Side> side = std::nullopt);

std::string function_to_json(const BrokenFemFunction& u);
/// Throws IoFailure when the stored mesh hash does not match `mesh`.
BrokenFemFunction function_from_json(const std::string& text, std::shared_ptr<const BrokenMesh> mesh);

/// "row col value" lines (0-based), preceded by a "rows cols nnz" header.
void write_coo(std::ostream& os, const SparseMatrix& a);

}  // namespace homoglab
