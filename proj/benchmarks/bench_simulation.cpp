#include <benchmark/benchmark.h>

#include "vmsched/engine.hpp"
#include "vmsched/harness.hpp"
#include "vmsched/scenario.hpp"

using namespace vmsched;

namespace {

ScenarioConfig bench_scenario(OverheadMode mode, PolicyKind kind, double hours) {
    ScenarioConfig config = default_scenario();
    config.workload.total_hours = hours;
    config.overhead.mode = mode;
    config.policy.kind = kind;
    return config;
}

void BM_WorkloadGeneration(benchmark::State& state) {
    const auto config = default_workload();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            generate_workload(config, 42, static_cast<double>(state.range(0))));
    }
}
BENCHMARK(BM_WorkloadGeneration)->Arg(10000)->Arg(100000);

void BM_SimulationStep(benchmark::State& state) {
    auto config = bench_scenario(OverheadMode::Dynamic, PolicyKind::Adaptive, 100000.0);
    Simulation simulation(config);
    for (auto _ : state) {
        if (simulation.finished()) {
            state.PauseTiming();
            simulation = Simulation(config);
            state.ResumeTiming();
        }
        simulation.step();
    }
}
BENCHMARK(BM_SimulationStep);

void BM_FullRun(benchmark::State& state) {
    const PolicyKind kinds[] = {PolicyKind::None, PolicyKind::Adaptive,
                                PolicyKind::Statistical};
    const auto config = bench_scenario(OverheadMode::Dynamic,
                                       kinds[state.range(0)],
                                       static_cast<double>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_simulation(config));
    }
}
BENCHMARK(BM_FullRun)
    ->ArgsProduct({{0, 1, 2}, {10000}})
    ->Unit(benchmark::kMillisecond);

void BM_SteadySweep(benchmark::State& state) {
    auto base = default_scenario();
    base.workload.total_hours = 10000.0;
    const auto spec = make_sweep(SweepKind::XThreshold, base, {1});
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sweep(spec));
    }
}
BENCHMARK(BM_SteadySweep)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
