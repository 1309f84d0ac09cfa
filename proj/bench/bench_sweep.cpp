// Column sweep: OpenMP kernel against the serial reference, and a full solve.

#include "adsense/kernels.hpp"

#include <benchmark/benchmark.h>

using namespace adsense;

namespace {

Scenario bench_scenario(std::size_t n_p) {
    Scenario sc;
    sc.sensing = SensingModel::energy_detector(0.9, -25.0, 31250.0);
    sc.costs.k_sense = 0.01;
    sc.grid.n_p = n_p;
    return sc;
}

DurationPolicy durations(int mode) {
    switch (mode) {
    case 0:
        return FixedDurations{1.0, 10.0};
    case 1:
        return PerStateDurations{};
    default:
        return LinearDurations{5.0, 20.0, 9.0, 7.0};
    }
}

template <bool Fast>
void BM_Column(benchmark::State& state) {
    const BeliefMdp mdp(bench_scenario(static_cast<std::size_t>(state.range(0))),
                        durations(static_cast<int>(state.range(1))));
    Solution sol = backward_induction(mdp);
    PolicyTable policy = mdp.make_policy_table();
    const std::size_t k = mdp.n_t() / 2;
    for (auto _ : state) {
        if constexpr (Fast)
            sweep_column(mdp, sol.values, sol.values, &policy, k);
        else
            sweep_column_reference(mdp, sol.values, sol.values, &policy, k);
        benchmark::DoNotOptimize(sol.values.at(0, k));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mdp.n_p()));
}

void BM_Solve(benchmark::State& state) {
    const BeliefMdp mdp(bench_scenario(static_cast<std::size_t>(state.range(0))),
                        durations(static_cast<int>(state.range(1))));
    for (auto _ : state)
        benchmark::DoNotOptimize(backward_induction(mdp).values.at(0, 0));
}

void args(benchmark::internal::Benchmark* b) {
    for (int n_p : {51, 201})
        for (int mode : {0, 1, 2})
            b->Args({n_p, mode});
    b->ArgNames({"n_p", "mode"});
}

} // namespace

BENCHMARK(BM_Column<true>)->Name("sweep_column/openmp")->Apply(args);
BENCHMARK(BM_Column<false>)->Name("sweep_column/reference")->Apply(args);
BENCHMARK(BM_Solve)->Apply(args)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
