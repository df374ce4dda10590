#pragma once

#include "homoglab/cell_problem.hpp"
#include "homoglab/effective_interface.hpp"
#include "homoglab/solver.hpp"

#include <memory>
#include <string>

namespace homoglab {

struct EffectiveModel {
  EffectiveTensor d0;
  RegimeTag regime;
  NonlinearityPair h;
  ScalarField f;
};

/// The discrete limit problem: constant D0, interface weight G in A, none in
/// B, and the merged (single-valued) space in C. Throws RegimeMismatch when
/// the model is not tagged with `expected`, NoInterface when A or B gets a
/// mesh without interface pairs, and InvalidArgument when C gets an unmerged
/// mesh or the interface is not the flat line x2 = 0.
DiscreteProblem limit_problem(std::shared_ptr<const BrokenMesh> mesh, const EffectiveModel& model,
                              Regime expected);

struct LimitSolution {
  BrokenFemFunction u;
  SolveReport report;
};

LimitSolution solve_limit_A(std::shared_ptr<const BrokenMesh> flat_mesh, const EffectiveModel& model,
                            const SolverOptions& options = {});
LimitSolution solve_limit_B(std::shared_ptr<const BrokenMesh> flat_mesh, const EffectiveModel& model,
                            const SolverOptions& options = {});
LimitSolution solve_limit_C(std::shared_ptr<const BrokenMesh> merged_mesh, const EffectiveModel& model,
                            const SolverOptions& options = {});

/// Dispatches on model.regime; builds the matching flat mesh at `resolution`
/// cells per unit length.
LimitSolution solve_limit(double omega_length, double ell, int resolution, const EffectiveModel& model,
                          const SolverOptions& options = {});

/// Jacobian of the limit operator at u on the free vertices.
SparseMatrix limit_operator(const DiscreteProblem& problem, const Vector& free_values);

/// Discrete interface fluxes of a converged case-A or case-B solution.
///
/// The bulk residual (stiffness + h1 - load, no interface term) tested with
/// the sum of the free hat functions of each interface copy. By the weak form
/// plus = -G int h2([u]) phi+ and minus = +G int h2([u]) phi-, so continuity of
/// the normal flux reads plus + minus = 0.
struct FluxBalance {
  double plus;
  double minus;
  double interface_term;
  double mismatch;
};

FluxBalance flux_balance(const BrokenFemFunction& u, const DiscreteProblem& problem);

/// Function JSON plus regime, G and D0.
std::string limit_solution_to_json(const BrokenFemFunction& u, const EffectiveModel& model);

}  // namespace homoglab
