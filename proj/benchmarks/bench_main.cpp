#include <benchmark/benchmark.h>

#include <homoglab/cell_problem.hpp>
#include <homoglab/convergence_lab.hpp>
#include <homoglab/mesh.hpp>
#include <homoglab/solver.hpp>
#include <homoglab/sources.hpp>

#include <memory>

using namespace homoglab;

namespace {

std::shared_ptr<const BrokenMesh> fitted(int m) {
  SweepConfig c;
  return std::make_shared<const BrokenMesh>(sweep_mesh(c, Rational(1, m)));
}

}  // namespace

static void BM_FittedMesh(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fitted(m));
}
BENCHMARK(BM_FittedMesh)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_AssembleStiffness(benchmark::State& state) {
  auto mesh = fitted(static_cast<int>(state.range(0)));
  const CoefficientField d = coefficients::smooth();
  DofMap dofs = DofMap::free_of(*mesh);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(*mesh, d, 1.0 / state.range(0), dofs));
  state.counters["vertices"] = static_cast<double>(mesh->vertex_count());
}
BENCHMARK(BM_AssembleStiffness)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_NonlinearSolve(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  auto mesh = fitted(m);
  const CoefficientField d = coefficients::smooth();
  for (auto _ : state) {
    auto result = solve_eps(mesh, d, NonlinearityPair::standard(), sources::standard(), Rational(1, m), Rational(0));
    benchmark::DoNotOptimize(result.first.values().data());
  }
}
BENCHMARK(BM_NonlinearSolve)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_EffectiveTensor(benchmark::State& state) {
  const CoefficientField d = coefficients::smooth();
  for (auto _ : state) benchmark::DoNotOptimize(effective_tensor(d, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EffectiveTensor)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
