#include "homoglab/mesh.hpp"

#include "homoglab/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace homoglab {

double DomainSpec::amplitude() const { return std::pow(epsilon.to_double(), k.to_double()); }

double DomainSpec::interface_weight() const {
  return std::pow(epsilon.to_double(), gamma.to_double());
}

int DomainSpec::periods() const {
  if (epsilon.sign() <= 0) throw InvalidArgument("epsilon must be positive");
  double periods = omega_length / epsilon.to_double();
  double rounded = std::round(periods);
  if (rounded < 1.0 || std::abs(periods - rounded) > 1e-9 * std::max(1.0, periods))
    throw ResolutionMismatch("omega length " + std::to_string(omega_length) +
                             " is not an integer multiple of eps = " + epsilon.to_string());
  return static_cast<int>(rounded);
}

namespace {

struct LayeredInput {
  double omega_length;
  double ell;
  std::vector<double> x1;
  std::vector<double> height;
  int lower_layers;
  int upper_layers;
  bool merged;
};

BrokenMesh build_layered(const LayeredInput& in) {
  BrokenMesh mesh;
  mesh.omega_length = in.omega_length;
  mesh.ell = in.ell;
  mesh.merged = in.merged;

  const int nx = static_cast<int>(in.x1.size()) - 1;
  const int row = nx + 1;
  const int lower_rows = in.lower_layers + 1;
  const int upper_rows = in.merged ? in.upper_layers : in.upper_layers + 1;
  mesh.vertices.reserve(static_cast<std::size_t>(row) * (lower_rows + upper_rows));

  for (int r = 0; r < lower_rows; ++r) {
    double t = static_cast<double>(r) / in.lower_layers;
    for (int i = 0; i <= nx; ++i) {
      double x2 = r == in.lower_layers ? in.height[i] : -in.ell + t * (in.height[i] + in.ell);
      mesh.vertices.emplace_back(in.x1[i], x2);
    }
  }
  const int upper_base = lower_rows * row;
  const int first_upper_layer = in.merged ? 1 : 0;
  for (int r = first_upper_layer; r <= in.upper_layers; ++r) {
    double t = static_cast<double>(r) / in.upper_layers;
    for (int i = 0; i <= nx; ++i) {
      double x2 = r == 0 ? in.height[i] : in.height[i] + t * (in.ell - in.height[i]);
      if (r == in.upper_layers) x2 = in.ell;
      mesh.vertices.emplace_back(in.x1[i], x2);
    }
  }

  auto lower_index = [&](int i, int r) { return r * row + i; };
  auto upper_index = [&](int i, int r) {
    if (in.merged) return r == 0 ? lower_index(i, in.lower_layers) : upper_base + (r - 1) * row + i;
    return upper_base + r * row + i;
  };

  auto add_block = [&](int layers, Side side, auto index) {
    for (int r = 0; r < layers; ++r) {
      for (int i = 0; i < nx; ++i) {
        int v00 = index(i, r), v10 = index(i + 1, r), v11 = index(i + 1, r + 1), v01 = index(i, r + 1);
        // Union-jack diagonals: a single diagonal direction biases the
        // discrete effective tensor with a spurious off-diagonal term.
        if ((i + r) % 2 == 0) {
          mesh.triangles.push_back({{v00, v10, v11}, side});
          mesh.triangles.push_back({{v00, v11, v01}, side});
        } else {
          mesh.triangles.push_back({{v00, v10, v01}, side});
          mesh.triangles.push_back({{v10, v11, v01}, side});
        }
      }
    }
  };
  add_block(in.lower_layers, Side::minus, lower_index);
  add_block(in.upper_layers, Side::plus, upper_index);

  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (mesh.signed_area(t) < 0.0) std::swap(mesh.triangles[t].v[1], mesh.triangles[t].v[2]);
  }

  std::vector<char> on_boundary(mesh.vertices.size(), 0);
  for (int i = 0; i <= nx; ++i) {
    on_boundary[lower_index(i, 0)] = 1;
    on_boundary[upper_index(i, in.upper_layers)] = 1;
  }
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    int i = static_cast<int>(v % row);
    if (i == 0 || i == nx) on_boundary[v] = 1;
  }
  for (std::size_t v = 0; v < on_boundary.size(); ++v)
    if (on_boundary[v]) mesh.boundary_vertices.push_back(static_cast<int>(v));

  mesh.interface_line.reserve(row);
  for (int i = 0; i <= nx; ++i) mesh.interface_line.emplace_back(in.x1[i], in.height[i]);

  if (!in.merged) {
    for (int i = 0; i <= nx; ++i)
      mesh.interface_pairs.push_back({upper_index(i, 0), lower_index(i, in.lower_layers)});
    for (int i = 0; i < nx; ++i) {
      double len = (mesh.interface_line[i + 1] - mesh.interface_line[i]).norm();
      mesh.interface_segments.push_back({i, i + 1, len});
    }
  }
  return mesh;
}

}  // namespace

std::vector<char> BrokenMesh::boundary_mask() const {
  std::vector<char> mask(vertices.size(), 0);
  for (int v : boundary_vertices) mask[v] = 1;
  return mask;
}

double BrokenMesh::interface_height(double x1) const {
  if (interface_line.empty()) return 0.0;
  if (x1 <= interface_line.front().x()) return interface_line.front().y();
  if (x1 >= interface_line.back().x()) return interface_line.back().y();
  auto it = std::upper_bound(interface_line.begin(), interface_line.end(), x1,
                             [](double v, const Point& p) { return v < p.x(); });
  const Point& b = *it;
  const Point& a = *(it - 1);
  double t = (x1 - a.x()) / (b.x() - a.x());
  return a.y() + t * (b.y() - a.y());
}

Side BrokenMesh::side_of(const Point& x, bool* on_interface, double tol) const {
  double h = interface_height(x.x());
  if (on_interface) *on_interface = std::abs(x.y() - h) <= tol;
  return x.y() > h ? Side::plus : Side::minus;
}

double BrokenMesh::signed_area(std::size_t t) const {
  const auto& tri = triangles[t];
  const Point& a = vertices[tri.v[0]];
  const Point& b = vertices[tri.v[1]];
  const Point& c = vertices[tri.v[2]];
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

double BrokenMesh::total_interface_length() const {
  double sum = 0.0;
  if (!interface_segments.empty()) {
    for (const auto& s : interface_segments) sum += s.length;
    return sum;
  }
  for (std::size_t i = 1; i < interface_line.size(); ++i)
    sum += (interface_line[i] - interface_line[i - 1]).norm();
  return sum;
}

std::uint64_t BrokenMesh::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& v : vertices) {
    double xy[2] = {v.x(), v.y()};
    mix(xy, sizeof xy);
  }
  for (const auto& t : triangles) {
    mix(t.v.data(), sizeof(int) * 3);
    std::int8_t s = static_cast<std::int8_t>(t.side);
    mix(&s, 1);
  }
  for (const auto& p : interface_pairs) {
    int pm[2] = {p.plus, p.minus};
    mix(pm, sizeof pm);
  }
  return h;
}

BrokenMesh build_fitted_mesh(const DomainSpec& spec, const InterfaceProfile& profile,
                             int n_per_period, int n_layers) {
  if (spec.omega_length <= 0.0 || spec.ell <= 0.0)
    throw InvalidArgument("omega length and ell must be positive");
  if (spec.k.sign() <= 0) throw InvalidArgument("k must be positive");
  if (!spec.epsilon.is_unit_reciprocal())
    throw ResolutionMismatch("eps must be 1/m for an integer m, got " + spec.epsilon.to_string());
  if (n_layers < 1) throw InvalidArgument("n_layers must be positive");
  const std::size_t segments = profile.segment_count();
  if (n_per_period < 1 || n_per_period % static_cast<int>(segments) != 0)
    throw ResolutionMismatch("n_per_period = " + std::to_string(n_per_period) +
                             " is not a positive multiple of the " + std::to_string(segments) +
                             " profile segments");

  const double amp = spec.amplitude();
  if (amp * profile.gbar() >= spec.ell)
    throw InterfaceEscapesDomain("eps^k * gbar = " + std::to_string(amp * profile.gbar()) +
                                 " reaches ell = " + std::to_string(spec.ell));

  const int periods = spec.periods();
  const double eps = spec.epsilon.to_double();
  const int sub = n_per_period / static_cast<int>(segments);
  const auto& bp = profile.breakpoints();

  LayeredInput in;
  in.omega_length = spec.omega_length;
  in.ell = spec.ell;
  in.merged = false;
  in.x1.reserve(static_cast<std::size_t>(periods) * n_per_period + 1);
  for (int p = 0; p < periods; ++p) {
    for (std::size_t s = 0; s < segments; ++s) {
      for (int j = 0; j < sub; ++j) {
        double t = static_cast<double>(j) / sub;
        double y = bp[s].y + t * (bp[s + 1].y - bp[s].y);
        double g = bp[s].value + t * (bp[s + 1].value - bp[s].value);
        in.x1.push_back(eps * (p + y));
        in.height.push_back(amp * g);
      }
    }
  }
  in.x1.push_back(spec.omega_length);
  in.height.push_back(amp * bp.back().value);

  const int eps_layers = static_cast<int>((spec.epsilon.den() + spec.epsilon.num() - 1) / spec.epsilon.num());
  in.lower_layers = std::max(n_layers, eps_layers);
  in.upper_layers = in.lower_layers;
  return build_layered(in);
}

BrokenMesh build_flat_mesh(double omega_length, double ell, int resolution, bool merged) {
  if (resolution <= 0) throw InvalidArgument("resolution must be positive");
  if (omega_length <= 0.0 || ell <= 0.0) throw InvalidArgument("omega length and ell must be positive");
  LayeredInput in;
  in.omega_length = omega_length;
  in.ell = ell;
  in.merged = merged;
  const int nx = std::max(1, static_cast<int>(std::lround(resolution * omega_length)));
  for (int i = 0; i <= nx; ++i) {
    in.x1.push_back(i == nx ? omega_length : omega_length * i / nx);
    in.height.push_back(0.0);
  }
  in.lower_layers = std::max(1, static_cast<int>(std::lround(resolution * ell)));
  in.upper_layers = in.lower_layers;
  return build_layered(in);
}

}  // namespace homoglab
