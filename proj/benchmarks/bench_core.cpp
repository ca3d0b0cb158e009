#include <benchmark/benchmark.h>

#include <random>

#include "uniwalk/rwr.hpp"
#include "uniwalk/supra.hpp"
#include "uniwalk/synth.hpp"

using namespace uniwalk;

namespace {

SparseMatrix random_csr(std::size_t n, std::size_t nnz_per_row, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Triplet> triplets;
    triplets.reserve(n * nnz_per_row);
    std::uniform_real_distribution<double> value(0.1, 1.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < nnz_per_row; ++k) {
            triplets.push_back({r, rng() % n, value(rng)});
        }
    }
    return SparseMatrix::from_triplets(n, n, std::move(triplets));
}

SynthBundle sized_bundle(std::size_t nodes) {
    RandomNetworkSpec spec;
    spec.layers_per_multiplex = {2, 1};
    spec.nodes_per_multiplex = {nodes, nodes / 2};
    spec.edges_per_layer = {3 * nodes, 2 * nodes};
    spec.overlap = 0.8;
    return generate_random(spec, 99);
}

} // namespace

static void TransposeApply(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const SparseMatrix m = random_csr(n, 8, 1);
    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    std::vector<double> out(n, 0.0);
    for (auto _ : state) {
        transpose_apply_add(m, v, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * m.nnz()));
}
BENCHMARK(TransposeApply)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);

static void NormalizeTransition(benchmark::State& state) {
    const SynthBundle bundle = sized_bundle(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const TransitionMatrix t = normalize(bundle.network, bundle.config);
        benchmark::DoNotOptimize(t.matrix.nnz());
    }
}
BENCHMARK(NormalizeTransition)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)
    ->Unit(benchmark::kMillisecond);

static void SolveSteadyState(benchmark::State& state) {
    const SynthBundle bundle = sized_bundle(static_cast<std::size_t>(state.range(0)));
    const TransitionMatrix t = normalize(bundle.network, bundle.config);
    const SeedSet seeds = resolve_seeds(bundle.network, bundle.seeds);
    const RestartVector p0 = build_restart(bundle.network, bundle.config, seeds, t.layout);
    for (auto _ : state) {
        const ScoreResult result = solve(t, p0, bundle.config.r);
        benchmark::DoNotOptimize(result.steady.data());
    }
}
BENCHMARK(SolveSteadyState)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
