// Microbenchmarks for the hot paths: metric evaluation, star products,
// exponentials, product formulas and tensor products.

#include <benchmark/benchmark.h>

#include "mvnlab/families.hpp"
#include "mvnlab/liealg.hpp"
#include "mvnlab/tensorcat.hpp"
#include "mvnlab/topologies.hpp"

using namespace mvnlab;

namespace {

BlockOperator hermitian_pair(const AlgebraPtr& alg, std::uint64_t seed, double scale) {
    Rng rng(seed);
    return random_hermitian(alg, rng, scale);
}

void BM_star_product(benchmark::State& state) {
    const auto alg = standard_infinite_algebra();
    const auto x = hermitian_pair(alg, 1, 0.9);
    const auto y = hermitian_pair(alg, 2, 0.9);
    for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(BM_star_product);

void BM_exp_op(benchmark::State& state) {
    const auto alg = standard_infinite_algebra();
    Rng rng(3);
    const auto a = random_skew(alg, rng, 0.9);
    for (auto _ : state) benchmark::DoNotOptimize(exp_op(a));
}
BENCHMARK(BM_exp_op);

void BM_srt_dist(benchmark::State& state) {
    const auto alg = standard_infinite_algebra();
    const auto x = hermitian_pair(alg, 4, 0.9);
    const auto y = hermitian_pair(alg, 5, 0.9);
    for (auto _ : state) benchmark::DoNotOptimize(srt_dist(x, y));
}
BENCHMARK(BM_srt_dist);

void BM_set_dist(benchmark::State& state) {
    const auto alg = standard_infinite_algebra();
    const auto x = hermitian_pair(alg, 6, 0.9);
    const auto y = hermitian_pair(alg, 7, 0.9);
    for (auto _ : state) benchmark::DoNotOptimize(set_dist(x, y));
}
BENCHMARK(BM_set_dist);

void BM_measure_dist(benchmark::State& state) {
    const auto alg = standard_infinite_algebra();
    const auto x = hermitian_pair(alg, 8, 0.9);
    const auto y = hermitian_pair(alg, 9, 0.9);
    for (auto _ : state) benchmark::DoNotOptimize(measure_dist(x, y));
}
BENCHMARK(BM_measure_dist);

void BM_trotter(benchmark::State& state) {
    const auto alg = FiniteBlockAlgebra::make({4}, {1.0});
    Rng rng(10);
    const auto a = random_skew(alg, rng, 0.9);
    const auto b = random_skew(alg, rng, 0.9);
    const auto n = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(trotter_product(a, b, 0.5, n));
}
BENCHMARK(BM_trotter)->Arg(16)->Arg(128)->Arg(1024);

void BM_tensor_op(benchmark::State& state) {
    const auto m = FiniteBlockAlgebra::make({2, 3}, {0.5, 0.5});
    const auto n = FiniteBlockAlgebra::make({4}, {1.0});
    Rng rng(11);
    const auto a = random_prefix_operator(m, rng);
    const auto b = random_prefix_operator(n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(tensor_op(a, b));
}
BENCHMARK(BM_tensor_op);

void BM_convergence_row(benchmark::State& state) {
    const auto fam = make_family("rotation-drift", 2026);
    const auto x = fam.member(5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(srt_dist(x, fam.limit));
        benchmark::DoNotOptimize(measure_dist(x, fam.limit));
    }
}
BENCHMARK(BM_convergence_row);

} // namespace

BENCHMARK_MAIN();
