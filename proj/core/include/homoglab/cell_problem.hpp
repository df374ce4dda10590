#pragma once

#include "homoglab/coefficient.hpp"

#include <Eigen/Core>

#include <string>

namespace homoglab {

/// Solution of the periodic cell problem for one direction lambda, stored as
/// the periodic part chi = w_lambda - lambda . y on an n x n periodic P1 grid
/// of Y = [0, 1)^2 (vertex (i, j) at (i / n, j / n), index j n + i).
struct Corrector {
  Eigen::Vector2d lambda;
  int n;
  Eigen::VectorXd periodic_part;
  /// Y-average of periodic_part; zero up to rounding.
  double mean;

  /// Periodic part at an arbitrary y (wrapped into Y).
  double value(const Eigen::Vector2d& y) const;
  /// grad w_lambda on the triangle containing y.
  Eigen::Vector2d gradient(const Eigen::Vector2d& y) const;
};

struct EffectiveTensor {
  Matrix2 entries;
  int resolution;
  std::string coefficient;
};

/// Throws InvalidArgument when n < 2 and SingularCellSystem when the
/// bordered system cannot be factorized.
Corrector solve_corrector(const CoefficientField& d, const Eigen::Vector2d& lambda, int n);

/// Column j is M_Y(D grad w_{e_j}). Both correctors share one factorization.
EffectiveTensor effective_tensor(const CoefficientField& d, int n = 64);

/// M_Y(D grad w . grad w) for the corrector of `c.lambda`.
double corrector_energy(const CoefficientField& d, const Corrector& c);

std::string effective_tensor_to_json(const EffectiveTensor& t);
EffectiveTensor effective_tensor_from_json(const std::string& text);

}  // namespace homoglab
