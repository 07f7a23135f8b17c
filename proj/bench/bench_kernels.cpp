#include <benchmark/benchmark.h>

#include <vector>

#include "zeno/bath.hpp"
#include "zeno/ensemble.hpp"
#include "zeno/golden_rule.hpp"
#include "zeno/trajectory.hpp"
#include "zeno/units.hpp"

using namespace zeno;

namespace {

SimConfig bench_config() {
  SimConfig c;
  c.duration = 20.0;
  c.time_points = 21;
  c.bath = {calibrate_strength(thermal_t1(1.0, 20.0), 20.0, to_angular(0.78)), to_angular(0.78), 0.0};
  c.schedule = MeasurementSchedule::projective(1.0);
  return c;
}

void BM_EnsembleSerial(benchmark::State& state) {
  const TrajectoryPlan plan = inversion_recovery_plan(bench_config());
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_ensemble_serial(plan, 7, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EnsembleParallel(benchmark::State& state) {
  const TrajectoryPlan plan = inversion_recovery_plan(bench_config());
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_ensemble(plan, 7, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
  return v;
}

void BM_SweepSerial(benchmark::State& state) {
  const BathSpec b = bench_config().bath;
  const auto det = grid(-5, 5, 41);
  const std::vector<double> rates{kNoMeasurement, 0.5, 1.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(sweep_serial(b, det, rates, 20.0));
}

void BM_SweepParallel(benchmark::State& state) {
  const BathSpec b = bench_config().bath;
  const auto det = grid(-5, 5, 41);
  const std::vector<double> rates{kNoMeasurement, 0.5, 1.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(sweep(b, det, rates, 20.0));
}

}  // namespace

BENCHMARK(BM_EnsembleSerial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleParallel)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
