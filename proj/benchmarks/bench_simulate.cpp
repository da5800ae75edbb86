#include <benchmark/benchmark.h>

#include "glab/model.hpp"
#include "glab/simulate.hpp"
#include "glab/spin.hpp"

namespace {

glab::ModelParams bench_params(int n, int length) {
    glab::ModelParams p;
    p.scale = n;
    p.alpha = {0.5, 0.5};
    p.gamma = glab::specialize_gamma(p.alpha, 0.5);
    p.geometry = glab::Geometry::torus(length);
    return p;
}

void EventThroughput(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int length = 4 * n;
    const glab::ModelParams params = bench_params(n, length);
    const glab::SpinConfig initial = glab::make_flat(params.geometry);
    glab::Simulator sim(params, initial, 12345);
    uint64_t events = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sim.step());
        ++events;
    }
    state.SetItemsProcessed(static_cast<int64_t>(events));
}
BENCHMARK(EventThroughput)->Arg(32)->Arg(64)->Arg(128)->Arg(256);

void SimulateUnitTime(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const glab::ModelParams params = bench_params(n, 4 * n);
    const glab::SpinConfig initial = glab::make_flat(params.geometry);
    uint64_t seed = 1;
    for (auto _ : state) {
        glab::Simulator sim(params, initial, seed++);
        sim.run_until(8.0 / (static_cast<double>(n) * n));
        benchmark::DoNotOptimize(sim.events_seen());
    }
}
BENCHMARK(SimulateUnitTime)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
