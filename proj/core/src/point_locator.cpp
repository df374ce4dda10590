#include "homoglab/error.hpp"
#include "homoglab/fem.hpp"

#include <algorithm>
#include <cmath>

namespace homoglab {

namespace {

constexpr double kBaryTol = 1e-10;

Eigen::Vector3d barycentric(const BrokenMesh& mesh, const Triangle& tri, const Point& x) {
  const Point& a = mesh.vertices[tri.v[0]];
  const Point& b = mesh.vertices[tri.v[1]];
  const Point& c = mesh.vertices[tri.v[2]];
  double det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
  double l1 = ((x.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (x.y() - a.y())) / det;
  double l2 = ((b.x() - a.x()) * (x.y() - a.y()) - (x.x() - a.x()) * (b.y() - a.y())) / det;
  return {1.0 - l1 - l2, l1, l2};
}

}  // namespace

PointLocator::PointLocator(const BrokenMesh& mesh) : mesh_(&mesh) {
  x0_ = 0.0;
  y0_ = -mesh.ell;
  const double width = mesh.omega_length;
  const double height = 2.0 * mesh.ell;
  const double buckets = std::max(1.0, mesh.triangles.size() / 2.0);
  nx_ = std::max(1, static_cast<int>(std::lround(std::sqrt(buckets * width / height))));
  ny_ = std::max(1, static_cast<int>(std::lround(buckets / nx_)));
  hx_ = width / nx_;
  hy_ = height / ny_;

  auto cell_range = [&](const Triangle& tri, int& i0, int& i1, int& j0, int& j1) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (int v : tri.v) {
      const Point& p = mesh.vertices[v];
      xmin = std::min(xmin, p.x());
      xmax = std::max(xmax, p.x());
      ymin = std::min(ymin, p.y());
      ymax = std::max(ymax, p.y());
    }
    i0 = std::clamp(static_cast<int>(std::floor((xmin - x0_) / hx_)), 0, nx_ - 1);
    i1 = std::clamp(static_cast<int>(std::floor((xmax - x0_) / hx_)), 0, nx_ - 1);
    j0 = std::clamp(static_cast<int>(std::floor((ymin - y0_) / hy_)), 0, ny_ - 1);
    j1 = std::clamp(static_cast<int>(std::floor((ymax - y0_) / hy_)), 0, ny_ - 1);
  };

  std::vector<int> count(static_cast<std::size_t>(nx_) * ny_ + 1, 0);
  for (const auto& tri : mesh.triangles) {
    int i0, i1, j0, j1;
    cell_range(tri, i0, i1, j0, j1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) ++count[j * nx_ + i + 1];
  }
  for (std::size_t c = 1; c < count.size(); ++c) count[c] += count[c - 1];
  start_ = count;
  items_.resize(count.back());
  std::vector<int> fill(count.begin(), count.end() - 1);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    int i0, i1, j0, j1;
    cell_range(mesh.triangles[t], i0, i1, j0, j1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) items_[fill[j * nx_ + i]++] = static_cast<int>(t);
  }
}

std::optional<PointLocation> PointLocator::locate(const Point& x, std::optional<Side> side) const {
  const double slack = 1e-12 * std::max(1.0, mesh_->omega_length + mesh_->ell);
  if (x.x() < x0_ - slack || x.x() > x0_ + nx_ * hx_ + slack || x.y() < y0_ - slack ||
      x.y() > y0_ + ny_ * hy_ + slack)
    return std::nullopt;
  int i = std::clamp(static_cast<int>(std::floor((x.x() - x0_) / hx_)), 0, nx_ - 1);
  int j = std::clamp(static_cast<int>(std::floor((x.y() - y0_) / hy_)), 0, ny_ - 1);
  int cell = j * nx_ + i;

  std::optional<PointLocation> best;
  double best_min = -kBaryTol;
  for (int k = start_[cell]; k < start_[cell + 1]; ++k) {
    const Triangle& tri = mesh_->triangles[items_[k]];
    if (side && tri.side != *side) continue;
    Eigen::Vector3d bary = barycentric(*mesh_, tri, x);
    double m = bary.minCoeff();
    if (m >= best_min) {
      best_min = m;
      best = PointLocation{items_[k], bary};
      if (m >= 0.0) break;
    }
  }
  return best;
}

double evaluate(const BrokenFemFunction& u, const PointLocator& locator, const Point& x,
                std::optional<Side> side) {
  const BrokenMesh& mesh = u.mesh();
  if (!side && !mesh.merged && !mesh.interface_pairs.empty()) {
    bool on = false;
    Side s = mesh.side_of(x, &on);
    if (on)
      throw InvalidArgument("point (" + std::to_string(x.x()) + ", " + std::to_string(x.y()) +
                            ") lies on the interface and needs a side flag");
    side = s;
  }
  if (mesh.merged) side.reset();
  auto loc = locator.locate(x, side);
  if (!loc)
    throw PointOutsideDomain("point (" + std::to_string(x.x()) + ", " + std::to_string(x.y()) +
                             ") is outside the domain");
  const Triangle& tri = mesh.triangles[loc->triangle];
  const Vector& v = u.values();
  return loc->bary(0) * v(tri.v[0]) + loc->bary(1) * v(tri.v[1]) + loc->bary(2) * v(tri.v[2]);
}

std::vector<double> evaluate_at_points(const BrokenFemFunction& u, std::span<const EvalPoint> points) {
  PointLocator locator(u.mesh());
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(evaluate(u, locator, p.x, p.side));
  return out;
}

}  // namespace homoglab
