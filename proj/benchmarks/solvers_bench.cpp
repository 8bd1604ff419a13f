#include "lotwassmap/embedding.hpp"
#include "lotwassmap/measures.hpp"
#include "lotwassmap/ot.hpp"

#include <benchmark/benchmark.h>

using namespace lotwassmap;

namespace {

CostMatrix gaussian_cost(Index n, CostConvention convention) {
  const GaussianSpec g0{Vector::Zero(2), Matrix::Identity(2, 2)};
  const GaussianSpec g1{(Vector(2) << 3.0, 4.0).finished(), Matrix::Identity(2, 2)};
  return cost_matrix(sample_gaussian(g0, n, 1).points(), sample_gaussian(g1, n, 2).points(), convention);
}

Vector uniform(Index n) { return Vector::Constant(n, 1.0 / static_cast<double>(n)); }

void BM_ExactSolve(benchmark::State& state) {
  const Index n = state.range(0);
  const CostMatrix c = gaussian_cost(n, CostConvention::Squared);
  for (auto _ : state) benchmark::DoNotOptimize(solve_exact(c, uniform(n), uniform(n)));
  state.SetComplexityN(n);
}
BENCHMARK(BM_ExactSolve)->RangeMultiplier(2)->Range(125, 2000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Sinkhorn(benchmark::State& state) {
  const Index n = state.range(0);
  const double beta = static_cast<double>(state.range(1)) / 10.0;
  const CostMatrix c = gaussian_cost(n, CostConvention::HalfSquared);
  long long iters = 0;
  for (auto _ : state) {
    const SinkhornResult r = solve_sinkhorn(c, uniform(n), uniform(n), {beta, 1e-9, 10000});
    iters = r.iterations;
    benchmark::DoNotOptimize(r.plan.mass.data());
  }
  state.counters["iterations"] = static_cast<double>(iters);
}
BENCHMARK(BM_Sinkhorn)->ArgsProduct({{125, 500, 1000}, {10, 100}})->Unit(benchmark::kMillisecond);

ManifoldDataset grid(Index m) {
  Matrix cov(2, 2);
  cov << 1.0, 0.0, 0.0, 1.0;
  return generate_grid_translation({5, -10.0, 10.0, cov, 0.5, m, m}, 3);
}

void BM_LotWassmap(benchmark::State& state) {
  const ManifoldDataset d = grid(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lot_wassmap(d, SolverConfig::exact(), 2));
}
BENCHMARK(BM_LotWassmap)->Arg(100)->Arg(300)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_Wassmap(benchmark::State& state) {
  const ManifoldDataset d = grid(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wassmap(d, SolverConfig::exact(), 2));
}
BENCHMARK(BM_Wassmap)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
