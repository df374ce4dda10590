#pragma once

#include "homoglab/mesh.hpp"

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

namespace homoglab {

using Matrix2 = Eigen::Matrix2d;

/// Y-periodic symmetric conductivity D(y) with declared ellipticity bounds
/// alpha |l|^2 <= (D l, l) and |D l| <= beta |l|.
class CoefficientField {
 public:
  using Evaluator = std::function<Matrix2(const Point& y)>;

  CoefficientField(std::string name, Evaluator eval, double alpha, double beta,
                   bool constant = false);

  /// Constant tensor; alpha and beta are its extreme eigenvalues.
  static CoefficientField constant(const Matrix2& d, std::string name = "constant");

  /// D(y) with y wrapped into Y = [0, 1)^2.
  Matrix2 at_cell(const Point& y) const;
  /// D^eps(x) = D(x / eps).
  Matrix2 at(const Point& x, double eps) const;

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  bool is_constant() const noexcept { return constant_; }
  const std::string& name() const noexcept { return name_; }

  /// Spot-checks symmetry and the A1 bounds on a grid of cell midpoints.
  /// Returns one message per violated condition (empty when admissible).
  std::vector<std::string> check_assumptions(int grid = 32) const;

 private:
  std::string name_;
  Evaluator eval_;
  double alpha_;
  double beta_;
  bool constant_;
};

namespace coefficients {

CoefficientField identity();
/// D(y) = (2 + sin(2 pi y1) sin(2 pi y2)) I, alpha = 1, beta = 3.
CoefficientField smooth();
/// D(y) = a(y1) I with a = low on y1 < 1/2 and high otherwise.
CoefficientField laminate(double low = 1.0, double high = 4.0);
CoefficientField diagonal(double a11, double a22);
/// "identity", "smooth", "laminate-1-4", "diag-2-3".
CoefficientField by_name(const std::string& name);

}  // namespace coefficients

}  // namespace homoglab
