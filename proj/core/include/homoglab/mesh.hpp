#pragma once

#include "homoglab/domain.hpp"
#include "homoglab/profile.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace homoglab {

using Point = Eigen::Vector2d;

enum class Side : std::int8_t { minus = -1, plus = 1 };

inline int side_sign(Side s) { return static_cast<int>(s); }

struct Triangle {
  std::array<int, 3> v;
  Side side;
};

/// Two coincident vertices on the interface, one per side.
struct InterfacePair {
  int plus;
  int minus;
};

/// Interface segment joining consecutive pairs a -> b (increasing x1).
struct InterfaceSegment {
  int pair_a;
  int pair_b;
  double length;
};

/// Triangulation of Q fitted to the interface, with every interface vertex
/// duplicated so the discrete space may jump across it.
///
/// Vertices are stored row by row (bottom layer first, increasing x1 within a
/// row); the interface appears twice, as the top row of the lower block and the
/// bottom row of the upper block. A merged mesh keeps a single interface row
/// and has no pairs.
struct BrokenMesh {
  double omega_length{1.0};
  double ell{1.0};
  bool merged{false};

  std::vector<Point> vertices;
  std::vector<Triangle> triangles;
  std::vector<InterfacePair> interface_pairs;
  std::vector<InterfaceSegment> interface_segments;
  std::vector<int> boundary_vertices;
  /// Material interface polyline, sorted by x1 (present for merged meshes too).
  std::vector<Point> interface_line;

  std::size_t vertex_count() const { return vertices.size(); }
  std::vector<char> boundary_mask() const;

  /// Height of the interface polyline above x1.
  double interface_height(double x1) const;
  /// Side of x relative to the interface; `on_interface` set when |x2 - h| <= tol.
  Side side_of(const Point& x, bool* on_interface = nullptr, double tol = 1e-12) const;

  double signed_area(std::size_t triangle) const;
  double total_interface_length() const;

  /// FNV-1a over coordinates, connectivity, sides and pairs.
  std::uint64_t hash() const;
};

/// Vertical shear of a layered tensor grid so that one mesh line is the
/// interface x2 = eps^k g(x1 / eps).
///
/// Each period is split into `n_per_period` columns, uniformly inside every
/// profile segment, so all breakpoints are mesh nodes. Each half of Q gets
/// max(n_layers, ceil(1 / eps)) layers.
BrokenMesh build_fitted_mesh(const DomainSpec& spec, const InterfaceProfile& profile,
                             int n_per_period, int n_layers);

/// Same structure along x2 = 0 with `resolution` cells per unit length.
/// With `merged` the interface row is single-valued (H^1_0(Q)).
BrokenMesh build_flat_mesh(double omega_length, double ell, int resolution, bool merged = false);

std::string mesh_to_json(const BrokenMesh& mesh);
BrokenMesh mesh_from_json(const std::string& text);

}  // namespace homoglab
