#include <benchmark/benchmark.h>

#include "glab/model.hpp"
#include "glab/statespace.hpp"

namespace {

glab::ModelParams law_params(int n, int length) {
    glab::ModelParams p;
    p.scale = n;
    p.alpha = {0.5, 0.5};
    p.gamma = glab::specialize_gamma(p.alpha, 0.5);
    p.geometry = glab::Geometry::torus(length);
    return p;
}

void EvolveLawExact(benchmark::State& state) {
    const int length = static_cast<int>(state.range(0));
    const glab::ModelParams params = law_params(4, length);
    const glab::StateSpace space = glab::full_space(length);
    const glab::GeneratorMatrix gen = glab::build_generator(params, space, true);
    const glab::LawVector law0 = glab::product_bernoulli_law(space, 0.25);
    for (auto _ : state) benchmark::DoNotOptimize(glab::evolve_law_exact(gen, law0, 0.05));
}
BENCHMARK(EvolveLawExact)->Arg(6)->Arg(8)->Arg(10);

void StationarityResidual(benchmark::State& state) {
    const int length = static_cast<int>(state.range(0));
    const glab::ModelParams params = law_params(16, length);
    const glab::StateSpace space = glab::full_space(length);
    const glab::GeneratorMatrix gen = glab::build_generator(params, space, true);
    const glab::LawVector mu = glab::product_bernoulli_law(space, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(glab::stationarity_residual(gen, mu));
}
BENCHMARK(StationarityResidual)->Arg(8)->Arg(10)->Arg(12);

}  // namespace
