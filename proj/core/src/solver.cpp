#include "homoglab/solver.hpp"

#include "homoglab/error.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <json.hpp>

#include <cmath>

namespace homoglab {

MonotoneSystem::MonotoneSystem(DiscreteProblem problem)
    : problem_(std::move(problem)), dofs_(DofMap::free_of(*problem_.mesh)) {
  const BrokenMesh& mesh = *problem_.mesh;
  stiffness_ = assemble_stiffness(mesh, problem_.coefficient, problem_.coefficient_scale, dofs_);
  for (int k = 0; k < stiffness_.outerSize(); ++k) {
    bool nonzero = false;
    for (SparseMatrix::InnerIterator it(stiffness_, k); it; ++it) nonzero |= it.value() != 0.0;
    if (!nonzero)
      throw SingularAfterBC("free vertex " + std::to_string(dofs_.vertices()[k]) +
                            " has an empty stiffness row after Dirichlet elimination");
  }
  load_ = assemble_load(mesh, problem_.source, dofs_);
  with_interface_ = problem_.interface_weight != 0.0 && !mesh.interface_pairs.empty();
}

Vector MonotoneSystem::residual(const Vector& free) const {
  const BrokenMesh& mesh = *problem_.mesh;
  Vector full = dofs_.expand(free);
  Vector r = stiffness_ * free - load_;
  r += assemble_volume_nonlinearity(mesh, problem_.nonlinearities.h1, full, dofs_, false).vector;
  if (with_interface_)
    r += assemble_interface_nonlinearity(mesh, problem_.nonlinearities.h2, full, problem_.interface_weight,
                                         dofs_, false)
             .vector;
  return r;
}

Linearization MonotoneSystem::linearize(const Vector& free) const {
  const BrokenMesh& mesh = *problem_.mesh;
  Vector full = dofs_.expand(free);
  Linearization vol = assemble_volume_nonlinearity(mesh, problem_.nonlinearities.h1, full, dofs_, true);
  Linearization out;
  out.vector = stiffness_ * free - load_ + vol.vector;
  out.matrix = stiffness_ + vol.matrix;
  if (with_interface_) {
    Linearization itf = assemble_interface_nonlinearity(mesh, problem_.nonlinearities.h2, full,
                                                        problem_.interface_weight, dofs_, true);
    out.vector += itf.vector;
    out.matrix += itf.matrix;
  }
  return out;
}

double MonotoneSystem::energy(const Vector& free) const {
  const BrokenMesh& mesh = *problem_.mesh;
  Vector full = dofs_.expand(free);
  double e = 0.5 * free.dot(stiffness_ * free) - load_.dot(free);
  e += volume_energy(mesh, problem_.nonlinearities.h1, full);
  if (with_interface_)
    e += interface_energy(mesh, problem_.nonlinearities.h2, full, problem_.interface_weight);
  return e;
}

Vector MonotoneSystem::bulk_residual_full(const Vector& full) const {
  const BrokenMesh& mesh = *problem_.mesh;
  DofMap all = DofMap::all(mesh.vertex_count());
  SparseMatrix k = assemble_stiffness(mesh, problem_.coefficient, problem_.coefficient_scale, all);
  Vector r = k * full - assemble_load(mesh, problem_.source, all);
  r += assemble_volume_nonlinearity(mesh, problem_.nonlinearities.h1, full, all, false).vector;
  return r;
}

namespace {

struct LinearSolve {
  Vector x;
  bool ok;
  long iterations;
};

LinearSolve pcg(const SparseMatrix& a, const Vector& b, const SolverOptions& opt) {
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::IncompleteCholesky<double>> ic;
  ic.setTolerance(opt.cg_relative_tol);
  ic.setMaxIterations(opt.cg_max_iterations);
  ic.compute(a);
  if (ic.info() == Eigen::Success) {
    Vector x = ic.solve(b);
    if (ic.info() == Eigen::Success && x.allFinite()) return {x, true, ic.iterations()};
  }
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> diag;
  diag.setTolerance(opt.cg_relative_tol);
  diag.setMaxIterations(opt.cg_max_iterations);
  diag.compute(a);
  Vector x = diag.solve(b);
  bool ok = diag.info() == Eigen::Success && x.allFinite();
  return {x, ok, diag.iterations()};
}

}  // namespace

std::pair<BrokenFemFunction, SolveReport> solve(const DiscreteProblem& problem, const SolverOptions& options,
                                                const BrokenFemFunction* initial) {
  if (!(options.tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
  MonotoneSystem system(problem);
  const DofMap& dofs = system.dofs();

  SolveReport report;
  report.options = options;
  report.threshold = options.tol * (1.0 + system.load().norm());

  Vector u = Vector::Zero(static_cast<Eigen::Index>(dofs.size()));
  if (initial) {
    if (initial->mesh().vertex_count() != problem.mesh->vertex_count())
      throw InvalidArgument("initial guess lives on a different mesh");
    u = dofs.restrict(initial->values());
  }

  double energy = system.energy(u);
  report.energy_history.push_back(energy);

  for (int it = 0;; ++it) {
    Linearization lin = system.linearize(u);
    const Vector& r = lin.vector;
    if (!r.allFinite()) throw LinearSolveFailure("non-finite residual at Newton iteration " + std::to_string(it));
    double rnorm = r.norm();
    report.final_residual_norm = rnorm;
    report.iterations = it;
    if (rnorm <= report.threshold) {
      report.converged = true;
      break;
    }
    if (it >= options.max_iterations) break;

    LinearSolve ls = pcg(lin.matrix, -r, options);
    report.linear_iterations += ls.iterations;
    Vector dir = ls.x;
    double slope = ls.ok ? r.dot(dir) : 0.0;
    if (!ls.ok || !(slope < 0.0)) {
      dir = -r;
      slope = -rnorm * rnorm;
      ++report.gradient_fallbacks;
    }

    double step = 1.0;
    bool accepted = false;
    for (int b = 0; b <= options.max_backtracks; ++b, step *= options.backtrack) {
      Vector trial = u + step * dir;
      double e = system.energy(trial);
      if (e <= energy + options.armijo * step * slope) {
        u = std::move(trial);
        energy = e;
        accepted = true;
        break;
      }
      // Near the solution J is flat to rounding; fall back to residual decrease.
      if (std::abs(e - energy) <= 1e-13 * std::max(1.0, std::abs(energy)) && system.residual(trial).norm() < rnorm) {
        u = std::move(trial);
        energy = std::min(e, energy);
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw LineSearchStalled("Armijo backtracking failed after " + std::to_string(options.max_backtracks) +
                              " halvings at Newton iteration " + std::to_string(it) +
                              " (residual " + std::to_string(rnorm) + ")");
    report.energy_history.push_back(energy);
  }

  return {BrokenFemFunction(problem.mesh, dofs.expand(u)), std::move(report)};
}

std::pair<BrokenFemFunction, SolveReport> solve_eps(std::shared_ptr<const BrokenMesh> mesh,
                                                    const CoefficientField& d, const NonlinearityPair& h,
                                                    const ScalarField& f, Rational eps, Rational gamma,
                                                    const SolverOptions& options,
                                                    const BrokenFemFunction* initial) {
  double e = eps.to_double();
  DiscreteProblem p{std::move(mesh), d, e, h, f, std::pow(e, gamma.to_double())};
  return solve(p, options, initial);
}

AprioriMonitors monitor_apriori(const BrokenFemFunction& u, Rational eps, Rational gamma) {
  Norms n = norms(u);
  double w = std::pow(eps.to_double(), 0.5 * gamma.to_double());
  return {n.broken_h1, w * n.jump_l2, n.jump_l2};
}

std::string solve_report_to_json(const SolveReport& r) {
  nlohmann::json doc;
  doc["iterations"] = r.iterations;
  doc["final_residual_norm"] = r.final_residual_norm;
  doc["threshold"] = r.threshold;
  doc["energy_history"] = r.energy_history;
  doc["converged"] = r.converged;
  doc["gradient_fallbacks"] = r.gradient_fallbacks;
  doc["linear_iterations"] = r.linear_iterations;
  doc["options"] = {{"tol", r.options.tol},
                    {"max_iterations", r.options.max_iterations},
                    {"armijo", r.options.armijo},
                    {"backtrack", r.options.backtrack},
                    {"max_backtracks", r.options.max_backtracks},
                    {"cg_relative_tol", r.options.cg_relative_tol}};
  return doc.dump();
}

}  // namespace homoglab
