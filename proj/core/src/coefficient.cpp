#include "homoglab/coefficient.hpp"

#include "homoglab/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

namespace homoglab {

CoefficientField::CoefficientField(std::string name, Evaluator eval, double alpha, double beta,
                                   bool constant)
    : name_(std::move(name)), eval_(std::move(eval)), alpha_(alpha), beta_(beta), constant_(constant) {
  if (!(alpha_ > 0.0) || !(beta_ >= alpha_))
    throw InvalidArgument("A1 violated: need 0 < alpha <= beta, got alpha = " + std::to_string(alpha_) +
                          ", beta = " + std::to_string(beta_));
}

CoefficientField CoefficientField::constant(const Matrix2& d, std::string name) {
  Eigen::SelfAdjointEigenSolver<Matrix2> es(0.5 * (d + d.transpose()));
  double lo = es.eigenvalues()(0);
  double hi = es.eigenvalues()(1);
  return CoefficientField(std::move(name), [d](const Point&) { return d; }, lo, hi, true);
}

Matrix2 CoefficientField::at_cell(const Point& y) const {
  if (constant_) return eval_(y);
  Point w(y.x() - std::floor(y.x()), y.y() - std::floor(y.y()));
  return eval_(w);
}

Matrix2 CoefficientField::at(const Point& x, double eps) const {
  if (constant_) return eval_(x);
  return at_cell(x / eps);
}

std::vector<std::string> CoefficientField::check_assumptions(int grid) const {
  std::vector<std::string> out;
  const double rel = 1e-12;
  bool sym_reported = false, lower_reported = false, upper_reported = false;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      Point y((i + 0.5) / grid, (j + 0.5) / grid);
      Matrix2 d = at_cell(y);
      double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
      std::ostringstream where;
      where << "y = (" << y.x() << ", " << y.y() << ")";
      if (!sym_reported && std::abs(d(0, 1) - d(1, 0)) > rel * scale) {
        out.push_back("A1 violated: D is not symmetric at " + where.str());
        sym_reported = true;
      }
      Eigen::SelfAdjointEigenSolver<Matrix2> es(0.5 * (d + d.transpose()));
      if (!lower_reported && es.eigenvalues()(0) < alpha_ * (1.0 - rel)) {
        out.push_back("A1 violated: (D l, l) >= alpha |l|^2 fails at " + where.str() +
                      " (min eigenvalue " + std::to_string(es.eigenvalues()(0)) + " < alpha = " +
                      std::to_string(alpha_) + ")");
        lower_reported = true;
      }
      Eigen::JacobiSVD<Matrix2> svd(d);
      if (!upper_reported && svd.singularValues()(0) > beta_ * (1.0 + rel)) {
        out.push_back("A1 violated: |D l| <= beta |l| fails at " + where.str() + " (norm " +
                      std::to_string(svd.singularValues()(0)) + " > beta = " + std::to_string(beta_) + ")");
        upper_reported = true;
      }
    }
  }
  return out;
}

namespace coefficients {

CoefficientField identity() { return CoefficientField::constant(Matrix2::Identity(), "identity"); }

CoefficientField smooth() {
  return CoefficientField(
      "smooth",
      [](const Point& y) {
        const double two_pi = 2.0 * std::numbers::pi;
        double a = 2.0 + std::sin(two_pi * y.x()) * std::sin(two_pi * y.y());
        return Matrix2(a * Matrix2::Identity());
      },
      1.0, 3.0);
}

CoefficientField laminate(double low, double high) {
  std::ostringstream name;
  name << "laminate-" << low << "-" << high;
  return CoefficientField(
      name.str(),
      [low, high](const Point& y) { return Matrix2((y.x() < 0.5 ? low : high) * Matrix2::Identity()); },
      std::min(low, high), std::max(low, high));
}

CoefficientField diagonal(double a11, double a22) {
  std::ostringstream name;
  name << "diag-" << a11 << "-" << a22;
  Matrix2 d = Matrix2::Zero();
  d(0, 0) = a11;
  d(1, 1) = a22;
  return CoefficientField::constant(d, name.str());
}

CoefficientField by_name(const std::string& name) {
  if (name == "identity") return identity();
  if (name == "smooth") return smooth();
  if (name == "laminate-1-4") return laminate(1.0, 4.0);
  if (name == "diag-2-3") return diagonal(2.0, 3.0);
  throw InvalidArgument("unknown coefficient '" + name +
                        "' (expected identity, smooth, laminate-1-4, diag-2-3)");
}

}  // namespace coefficients

}  // namespace homoglab
