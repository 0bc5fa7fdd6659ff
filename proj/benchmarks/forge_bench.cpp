#include <benchmark/benchmark.h>

#include "forge/analysis.hpp"
#include "forge/commands.hpp"
#include "forge/covering.hpp"
#include "forge/cycles.hpp"
#include "forge/graphs.hpp"

namespace {

void GirthWitnessesOnCoverTower(benchmark::State& state) {
    auto first = forge::mod2_homology_cover(forge::theta_graph(3));
    auto second = forge::mod2_homology_cover(first.cover.total);
    for (auto _ : state) {
        auto result = forge::girth(second.cover.total);
        benchmark::DoNotOptimize(result.witnesses.size());
    }
}
BENCHMARK(GirthWitnessesOnCoverTower);

void BareissDeterminant(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    forge::IntMatrix m(n, std::vector<forge::BigInt>(n));
    unsigned x = 12345;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            x = x * 1664525u + 1013904223u;
            m[i][j] = (x >> 16) % 2;
        }
    for (auto _ : state) {
        auto det = forge::exact_determinant(m);
        benchmark::DoNotOptimize(det);
    }
}
BENCHMARK(BareissDeterminant)->Arg(10)->Arg(20)->Arg(40);

void AssembleAndTraceChain(benchmark::State& state) {
    const int g = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto x = forge::fixtures::chain(g);
        benchmark::DoNotOptimize(x.curves().blue_curves.size());
    }
}
BENCHMARK(AssembleAndTraceChain)->Arg(2)->Arg(8);

void HolonomyOnChain(benchmark::State& state) {
    auto x = forge::fixtures::chain(4);
    for (auto _ : state) {
        double len = forge::holonomy_length(x, {false, 0}, 1.3);
        benchmark::DoNotOptimize(len);
    }
}
BENCHMARK(HolonomyOnChain);

} // namespace

BENCHMARK_MAIN();
