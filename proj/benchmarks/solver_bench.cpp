#include <benchmark/benchmark.h>

#include "bench_data.hpp"
#include "hmfsvm/mfsvm.hpp"
#include "hmfsvm/solver.hpp"

namespace {

using namespace hmfsvm;

void BM_SmoSolve(benchmark::State& state) {
  const Dataset d = bench::blobs(static_cast<std::size_t>(state.range(0)), 8, 4);
  const GramMatrix g = gram({KernelFamily::Rbf, 0.125, 0.0}, d.features);
  const std::vector<double> memberships(d.size(), 1.0);
  SolverConfig config;
  config.C = 4.0;
  config.tol = 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(solve(g, d.labels, memberships, config));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SmoSolve)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);

void BM_MfsvmTrain(benchmark::State& state) {
  const Dataset d = bench::blobs(static_cast<std::size_t>(state.range(0)), 8, 5);
  MfsvmConfig config;
  config.kernel = {KernelFamily::Rbf, 0.125, 0.0};
  config.C = 4.0;
  config.tol = 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(train(d, config));
}
BENCHMARK(BM_MfsvmTrain)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace
