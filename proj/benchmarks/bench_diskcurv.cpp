#include <benchmark/benchmark.h>

#include "diskcurv/curvature.hpp"
#include "diskcurv/energy.hpp"
#include "diskcurv/inequality.hpp"
#include "diskcurv/solver.hpp"

using namespace diskcurv;

static void BM_MeshBuild(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    DiskMesh mesh(n, 4 * n);
    benchmark::DoNotOptimize(mesh.area());
  }
}
BENCHMARK(BM_MeshBuild)->Arg(12)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

static void BM_EnergyAndGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DiskMesh mesh(n, 4 * n);
  const ScalarField k = sample_disk(CurvatureSpec::angular_mode(1.0, 0.5, 2), mesh);
  const BoundaryTrace h = sample_circle(CurvatureSpec::constant(1.0), mesh);
  const ScalarField u = random_smooth_field(mesh, 1);
  const EnergyFunctional functional(mesh, k, h);
  for (auto _ : state) {
    const EnergyPoint p = functional.evaluate(u.values(), kPi);
    benchmark::DoNotOptimize(functional.gradient_u(p));
  }
}
BENCHMARK(BM_EnergyAndGradient)->Arg(24)->Arg(48)->Arg(96)->Unit(benchmark::kMicrosecond);

static void BM_JointSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DiskMesh mesh(n, 4 * n);
  SolveConfig config;
  config.group = SymmetryGroup::cyclic(mesh, 2);
  const ScalarField k = ScalarField::constant(mesh.node_count(), 1.0);
  const BoundaryTrace h = BoundaryTrace::constant(mesh.boundary_count(), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimize_joint(mesh, k, h, config).rho_min);
  }
}
BENCHMARK(BM_JointSolve)->Arg(12)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

static void BM_InequalitySuite(benchmark::State& state) {
  const DiskMesh mesh(48, 1536);
  const InequalityOptions options;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_inequality_suite(mesh, options).violations.size());
  }
}
BENCHMARK(BM_InequalitySuite)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK_MAIN();
