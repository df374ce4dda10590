#pragma once

#include "homoglab/coefficient.hpp"
#include "homoglab/fem.hpp"
#include "homoglab/nonlinearity.hpp"
#include "homoglab/rational.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace homoglab {

struct SolverOptions {
  /// Stop when ||R|| <= tol (1 + ||F||).
  double tol{1e-10};
  int max_iterations{60};
  double armijo{1e-4};
  double backtrack{0.5};
  int max_backtracks{40};
  /// Relative residual target of the inner PCG solve.
  double cg_relative_tol{1e-8};
  int cg_max_iterations{20000};
};

struct SolveReport {
  int iterations{0};
  double final_residual_norm{0.0};
  double threshold{0.0};
  std::vector<double> energy_history;
  bool converged{false};
  int gradient_fallbacks{0};
  long linear_iterations{0};
  SolverOptions options;
};

std::string solve_report_to_json(const SolveReport& report);

/// One instance of the weak problem
///   int D(x/s) grad u . grad phi + w int_Gamma h2([u]) [phi] + int h1(u) phi = int f phi
/// on a broken mesh with u = 0 on the boundary of Q. The eps-problem uses
/// s = eps and w = eps^gamma; limit problems use a constant D and w = G.
struct DiscreteProblem {
  std::shared_ptr<const BrokenMesh> mesh;
  CoefficientField coefficient;
  double coefficient_scale;
  NonlinearityPair nonlinearities;
  ScalarField source;
  double interface_weight;
};

/// Discrete operator on the free (non-Dirichlet) vertices: the gradient of
///   J(u) = 1/2 u.K u + int H1(u) + w int_Gamma H2([u]) - F.u
/// and its Jacobian.
class MonotoneSystem {
 public:
  explicit MonotoneSystem(DiscreteProblem problem);

  const DiscreteProblem& problem() const noexcept { return problem_; }
  const DofMap& dofs() const noexcept { return dofs_; }
  const SparseMatrix& stiffness() const noexcept { return stiffness_; }
  const Vector& load() const noexcept { return load_; }
  bool has_interface_term() const noexcept { return with_interface_; }

  Vector residual(const Vector& free) const;
  /// Residual and Jacobian in one pass.
  Linearization linearize(const Vector& free) const;
  double energy(const Vector& free) const;

  /// Stiffness + h1 terms without the interface integral, evaluated on all
  /// vertices (Dirichlet rows included). Used for flux diagnostics.
  Vector bulk_residual_full(const Vector& full) const;

 private:
  DiscreteProblem problem_;
  DofMap dofs_;
  SparseMatrix stiffness_;
  Vector load_;
  bool with_interface_;
};

/// Damped Newton with Armijo backtracking on J; PCG inner solves with a
/// gradient-step fallback. Throws LineSearchStalled or LinearSolveFailure;
/// hitting the iteration cap is reported through `converged = false`.
std::pair<BrokenFemFunction, SolveReport> solve(const DiscreteProblem& problem,
                                                const SolverOptions& options = {},
                                                const BrokenFemFunction* initial = nullptr);

/// The eps-problem: D(x/eps) and interface weight eps^gamma.
std::pair<BrokenFemFunction, SolveReport> solve_eps(std::shared_ptr<const BrokenMesh> mesh,
                                                    const CoefficientField& d,
                                                    const NonlinearityPair& h, const ScalarField& f,
                                                    Rational eps, Rational gamma,
                                                    const SolverOptions& options = {},
                                                    const BrokenFemFunction* initial = nullptr);

struct AprioriMonitors {
  double grad_norm;
  /// eps^(gamma/2) ||u+ - u-||_{L2(Gamma)}
  double weighted_jump;
  double raw_jump;
};

AprioriMonitors monitor_apriori(const BrokenFemFunction& u, Rational eps, Rational gamma);

}  // namespace homoglab
