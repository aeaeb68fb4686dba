#include <benchmark/benchmark.h>

#include <random>

#include "hbs/builder.hpp"
#include "hbs/dynamics.hpp"
#include "hbs/partition.hpp"

namespace {

hbs::Construction& fixture() {
    static hbs::Construction c = hbs::Construction::build(hbs::BuildConfig::toy(1, 2));
    return c;
}

void BM_SymbolAccess(benchmark::State& state) {
    hbs::Construction& c = fixture();
    std::mt19937_64 rng(1);
    const std::uint64_t len = static_cast<std::uint64_t>(c.x_star_len());
    for (auto _ : state) {
        benchmark::DoNotOptimize(c.x_star_at(static_cast<std::int64_t>(rng() % len)));
    }
}
BENCHMARK(BM_SymbolAccess);

void BM_MarkerPhase(benchmark::State& state) {
    hbs::Construction& c = fixture();
    hbs::FiniteOrbitPoint x(c, 17, 2 * c.block_len(1) + c.block_len(0) + 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hbs::compute_r(c, x, 1));
    }
}
BENCHMARK(BM_MarkerPhase);

void BM_ReturnScan(benchmark::State& state) {
    hbs::Construction& c = fixture();
    const auto seq = c.x_star_prefix(3 * c.block_len(1) + c.block_len(0) + 1);
    const hbs::Word w = c.x_star_window(0, c.block_len(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(hbs::return_set(seq, w, 3 * c.block_len(1)));
    }
}
BENCHMARK(BM_ReturnScan);

void BM_PartitionSearch(benchmark::State& state) {
    std::uint64_t seed = 1;
    for (auto _ : state) {
        hbs::SearchSpec sp;
        sp.d = 2;
        sp.c = 1;
        sp.Q = 3;
        sp.N = 10;
        sp.seed = seed++;
        benchmark::DoNotOptimize(hbs::search_partition(sp));
    }
}
BENCHMARK(BM_PartitionSearch);

void BM_Membership(benchmark::State& state) {
    hbs::Construction& c = fixture();
    const hbs::Word marker = c.flatten_pre(1, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(c.membership(marker, 1));
    }
}
BENCHMARK(BM_Membership);

}  // namespace

BENCHMARK_MAIN();
