#include "homoglab/limit_solvers.hpp"

#include "homoglab/error.hpp"

#include <json.hpp>

#include <cmath>

namespace homoglab {

namespace {

void require_flat_interface(const BrokenMesh& mesh) {
  for (const Point& p : mesh.interface_line)
    if (p[1] != 0.0) throw InvalidArgument("limit problems need the flat interface x2 = 0");
}

}  // namespace

DiscreteProblem limit_problem(std::shared_ptr<const BrokenMesh> mesh, const EffectiveModel& model,
                              Regime expected) {
  if (model.regime.regime != expected)
    throw RegimeMismatch("solver for regime " + to_string(expected) + " called with a model in regime " +
                         to_string(model.regime.regime));
  if (!mesh) throw InvalidArgument("null mesh");
  require_flat_interface(*mesh);
  double weight = 0.0;
  switch (expected) {
    case Regime::A:
      if (!model.regime.G || !(*model.regime.G >= 0.0))
        throw RegimeMismatch("regime A model without a nonnegative interface constant");
      weight = *model.regime.G;
      [[fallthrough]];
    case Regime::B:
      if (mesh->merged || mesh->interface_pairs.empty())
        throw NoInterface("regime " + to_string(expected) + " needs a broken mesh with interface pairs");
      break;
    case Regime::C:
      if (!mesh->merged) throw InvalidArgument("regime C needs a merged mesh");
      break;
  }
  CoefficientField d0 = CoefficientField::constant(model.d0.entries, "D0");
  return DiscreteProblem{std::move(mesh), std::move(d0), 1.0, model.h, model.f, weight};
}

LimitSolution solve_limit_A(std::shared_ptr<const BrokenMesh> flat_mesh, const EffectiveModel& model,
                            const SolverOptions& options) {
  auto [u, rep] = solve(limit_problem(std::move(flat_mesh), model, Regime::A), options);
  return {std::move(u), std::move(rep)};
}

LimitSolution solve_limit_B(std::shared_ptr<const BrokenMesh> flat_mesh, const EffectiveModel& model,
                            const SolverOptions& options) {
  auto [u, rep] = solve(limit_problem(std::move(flat_mesh), model, Regime::B), options);
  return {std::move(u), std::move(rep)};
}

LimitSolution solve_limit_C(std::shared_ptr<const BrokenMesh> merged_mesh, const EffectiveModel& model,
                            const SolverOptions& options) {
  auto [u, rep] = solve(limit_problem(std::move(merged_mesh), model, Regime::C), options);
  return {std::move(u), std::move(rep)};
}

LimitSolution solve_limit(double omega_length, double ell, int resolution, const EffectiveModel& model,
                          const SolverOptions& options) {
  const bool merged = model.regime.regime == Regime::C;
  auto mesh = std::make_shared<const BrokenMesh>(build_flat_mesh(omega_length, ell, resolution, merged));
  switch (model.regime.regime) {
    case Regime::A: return solve_limit_A(mesh, model, options);
    case Regime::B: return solve_limit_B(mesh, model, options);
    case Regime::C: return solve_limit_C(mesh, model, options);
  }
  throw RegimeMismatch("unknown regime");
}

SparseMatrix limit_operator(const DiscreteProblem& problem, const Vector& free_values) {
  MonotoneSystem system(problem);
  return system.linearize(free_values).matrix;
}

FluxBalance flux_balance(const BrokenFemFunction& u, const DiscreteProblem& problem) {
  const BrokenMesh& mesh = *problem.mesh;
  if (mesh.interface_pairs.empty()) throw NoInterface("flux balance needs interface pairs");
  MonotoneSystem system(problem);
  Vector bulk = system.bulk_residual_full(u.values());
  Vector itf = Vector::Zero(static_cast<Eigen::Index>(mesh.vertex_count()));
  if (problem.interface_weight != 0.0)
    itf = assemble_interface_nonlinearity(mesh, problem.nonlinearities.h2, u.values(), problem.interface_weight)
              .vector;
  const DofMap& dofs = system.dofs();
  FluxBalance fb{0.0, 0.0, 0.0, 0.0};
  for (const InterfacePair& p : mesh.interface_pairs) {
    if (dofs[p.plus] < 0) continue;
    fb.plus += bulk[p.plus];
    fb.minus += bulk[p.minus];
    fb.interface_term += itf[p.plus];
  }
  fb.mismatch = std::abs(fb.plus + fb.minus);
  return fb;
}

std::string limit_solution_to_json(const BrokenFemFunction& u, const EffectiveModel& model) {
  auto doc = nlohmann::json::parse(function_to_json(u));
  doc["regime"] = to_string(model.regime.regime);
  if (model.regime.G)
    doc["G"] = *model.regime.G;
  else
    doc["G"] = nullptr;
  const Matrix2& d = model.d0.entries;
  doc["D0"] = {{d(0, 0), d(0, 1)}, {d(1, 0), d(1, 1)}};
  return doc.dump();
}

}  // namespace homoglab
