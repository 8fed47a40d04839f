#include <benchmark/benchmark.h>

#include "mechlab/applications.hpp"
#include "mechlab/engines.hpp"
#include "mechlab/properties.hpp"

using namespace mechlab;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_PureBne(benchmark::State& state) {
  RandomInstance ri = random_instance(11, InstanceSizes{2, 3, 3, 4});
  for (auto _ : state) benchmark::DoNotOptimize(solve_pure_bne(ri.env, ri.mech, exec_of(state)));
}
BENCHMARK(BM_PureBne)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Rationalizable(benchmark::State& state) {
  RandomInstance ri = random_instance(12, InstanceSizes{2, 2, 3, 3});
  for (auto _ : state) benchmark::DoNotOptimize(solve_rationalizable(ri.env, ri.mech, std::nullopt, exec_of(state)));
}
BENCHMARK(BM_Rationalizable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DoubleAuction(benchmark::State& state) {
  TradeInstance ti;
  ti.grid_n = 101;
  for (auto _ : state) benchmark::DoNotOptimize(double_auction_level_k(ti, 2, exec_of(state)));
}
BENCHMARK(BM_DoubleAuction)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SweepT1(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(validate_theorem(TheoremId::T1, 20, InstanceSizes{}, 7, exec_of(state)));
}
BENCHMARK(BM_SweepT1)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
