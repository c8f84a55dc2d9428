#include <benchmark/benchmark.h>

#include <peach/estimators.hpp>
#include <peach/experiment.hpp>
#include <peach/rng.hpp>

namespace {

using namespace peach;

StatModel bench_model(Index n_r) {
  const ExperimentConfig cfg = ExperimentConfig::defaults(Scenario::SweepL);
  return desk_model(cfg, Dims{n_r, 4, 4}, cfg.gamma_db, 0.1);
}

CVector bench_observation(const StatModel& m) {
  RngStream rng(1, 0);
  const GaussianSampler noise(m.n_mean, m.s_cov);
  return noise(rng);
}

// Exact MMSE: forms and factorizes Z on every call.
void BM_MmseSolve(benchmark::State& state) {
  const StatModel m = bench_model(state.range(0));
  const CVector y = bench_observation(m);
  for (auto _ : state) benchmark::DoNotOptimize(mmse_estimate(m, y));
  state.SetComplexityN(m.dims.m());
}

// Matrix-vector chain only; the cost that remains once statistics are known.
void BM_PeachChain(benchmark::State& state) {
  const StatModel m = bench_model(state.range(0));
  const PolyEstimator est = make_peach(m, 4);
  const CVector y = bench_observation(m);
  for (auto _ : state) benchmark::DoNotOptimize(peach_estimate(m, est, y));
  state.SetComplexityN(m.dims.m());
}

void BM_WPeachChain(benchmark::State& state) {
  const StatModel m = bench_model(state.range(0));
  const PolyEstimator est = make_wpeach(m, 4);
  const CVector y = bench_observation(m);
  for (auto _ : state) benchmark::DoNotOptimize(wpeach_estimate(m, est, y));
  state.SetComplexityN(m.dims.m());
}

void BM_WPeachWeights(benchmark::State& state) {
  const StatModel m = bench_model(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(make_wpeach(m, 4));
  state.SetComplexityN(m.dims.m());
}

}  // namespace

BENCHMARK(BM_MmseSolve)->RangeMultiplier(2)->Range(5, 40)->Complexity();
BENCHMARK(BM_PeachChain)->RangeMultiplier(2)->Range(5, 40)->Complexity();
BENCHMARK(BM_WPeachChain)->RangeMultiplier(2)->Range(5, 40)->Complexity();
BENCHMARK(BM_WPeachWeights)->RangeMultiplier(2)->Range(5, 40)->Complexity();

BENCHMARK_MAIN();
