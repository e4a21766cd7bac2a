// Serial reference vs. OpenMP kernels.

#include <benchmark/benchmark.h>

#include "primehit/exact_dp.hpp"
#include "primehit/prime_table.hpp"
#include "primehit/simulate.hpp"
#include "primehit/tail_bounds.hpp"

namespace {

using namespace primehit;

const PrimeTable& table() {
    static const PrimeTable t = build_prime_table(10'000'000);
    return t;
}

void BM_SieveReference(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_prime_table_reference(static_cast<std::uint64_t>(state.range(0))));
    }
}
BENCHMARK(BM_SieveReference)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

void BM_SieveSegmented(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_prime_table(static_cast<std::uint64_t>(state.range(0))));
    }
}
BENCHMARK(BM_SieveSegmented)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

void BM_PntSweepReference(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_pnt_lower_bound_reference(table(), 1001, 200'000));
    }
}
BENCHMARK(BM_PntSweepReference)->Unit(benchmark::kMillisecond);

void BM_PntSweep(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_pnt_lower_bound(table(), 1001, 200'000));
    }
}
BENCHMARK(BM_PntSweep)->Unit(benchmark::kMillisecond);

template <bool Reference>
void BM_DpLayers(benchmark::State& state) {
    const DpConfig config{6, static_cast<int>(state.range(0)), TargetSet::primes()};
    for (auto _ : state) {
        DpLayer layer = dp_init(config, table());
        for (int k = 2; k <= config.k_max; ++k) {
            layer = Reference ? dp_step_reference(layer, config, table()) : dp_step(layer, config, table());
        }
        benchmark::DoNotOptimize(layer.mass());
    }
}
BENCHMARK(BM_DpLayers<true>)->Name("BM_DpReference")->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DpLayers<false>)->Name("BM_DpSlidingWindow")->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SimulateReference(benchmark::State& state) {
    SimulationConfig c;
    c.reps = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_simulation_reference(c, table()).mean);
    }
}
BENCHMARK(BM_SimulateReference)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
    SimulationConfig c;
    c.reps = static_cast<std::uint64_t>(state.range(0));
    c.workers = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_simulation(c, table()).mean);
    }
}
BENCHMARK(BM_Simulate)->Args({1'000'000, 1})->Args({1'000'000, 4})->Unit(benchmark::kMillisecond);

void BM_TailWindowReference(benchmark::State& state) {
    TailOptions o;
    o.n_cut = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(window_sums_reference(1000, o, &table()).first);
    }
}
BENCHMARK(BM_TailWindowReference)->Arg(20'000)->Unit(benchmark::kMillisecond);

void BM_TailWindow(benchmark::State& state) {
    TailOptions o;
    o.n_cut = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(window_sums(1000, o, &table()).first);
    }
}
BENCHMARK(BM_TailWindow)->Arg(20'000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
