// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "pawas/allocator.hpp"
#include "pawas/nakagami.hpp"
#include "pawas/oracles.hpp"
#include "pawas/units.hpp"

using namespace pawas;

namespace {

CorridorGeometry grid(std::size_t n) {
    CorridorGeometry g;
    g.grid_points = n;
    return g;
}

void BM_ChannelStates(benchmark::State& st) {
    const CorridorGeometry g = grid(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(channel_states(g));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_ChannelStates)->Arg(1000)->Arg(10000);

void BM_DelayInsensitive(benchmark::State& st) {
    const CorridorGeometry g = grid(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(allocate(g, {1000.0, 0.0, 0.0}, SolverConfig{}));
}
BENCHMARK(BM_DelayInsensitive)->Arg(200)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_DelaySensitive(benchmark::State& st) {
    const CorridorGeometry g = grid(1000);
    for (auto _ : st) benchmark::DoNotOptimize(allocate(g, {0.0, 800.0, 0.01}, SolverConfig{}));
}
BENCHMARK(BM_DelaySensitive)->Unit(benchmark::kMicrosecond);

void BM_Hybrid(benchmark::State& st) {
    const CorridorGeometry g = grid(1000);
    SolverConfig c;
    if (st.range(0) != 0) c.p_max = units::from_db(110.5);
    for (auto _ : st) benchmark::DoNotOptimize(allocate(g, {800.0, 300.0, 0.01}, c));
}
BENCHMARK(BM_Hybrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MonteCarloPoint(benchmark::State& st) {
    const ChannelState s = channel_state(grid(1000), 250.0);
    for (auto _ : st)
        benchmark::DoNotOptimize(monte_carlo_capacity(s, units::from_db(150.0), AntennaMode::Mimo, 0.5, 2000, 1));
}
BENCHMARK(BM_MonteCarloPoint)->Unit(benchmark::kMicrosecond);

void BM_BruteForce(benchmark::State& st) {
    const CorridorGeometry g = grid(16);
    for (auto _ : st)
        benchmark::DoNotOptimize(brute_force_delay_insensitive(g, {400.0, 0.0, 0.0}, SolverConfig{}));
}
BENCHMARK(BM_BruteForce)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
