#include <benchmark/benchmark.h>

#include "glab/heat_kernel.hpp"

namespace {

void KernelRow(benchmark::State& state) {
    const int length = static_cast<int>(state.range(0));
    glab::KernelSpec spec{length, 64, {0.5, 0.5}};
    const double t = 4.0 / (spec.alpha_bar() * 64.0 * 64.0);
    for (auto _ : state) benchmark::DoNotOptimize(glab::kernel_row(spec, 0.0, t, 0));
    state.SetComplexityN(length);
}
BENCHMARK(KernelRow)->RangeMultiplier(2)->Range(64, 4096)->Complexity();

void HeatOperatorSpace(benchmark::State& state) {
    const int length = static_cast<int>(state.range(0));
    glab::KernelSpec spec{length, 64, {0.5, 0.5}};
    std::vector<double> phi(length, 0.0);
    phi[length / 2] = 1.0;
    const double t = 4.0 / (spec.alpha_bar() * 64.0 * 64.0);
    for (auto _ : state) benchmark::DoNotOptimize(glab::heat_operator_space(spec, t, phi));
}
BENCHMARK(HeatOperatorSpace)->Arg(256)->Arg(1024)->Arg(4096);

}  // namespace
