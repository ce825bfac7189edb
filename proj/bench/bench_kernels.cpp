#include <benchmark/benchmark.h>

#include "arborwalk/coin.hpp"
#include "arborwalk/rng.hpp"
#include "arborwalk/walk.hpp"

namespace {

using namespace arborwalk;

walk::WalkOperator make_operator(int q, int radius) {
    const tree::Alphabet alphabet(q);
    const walk::LocalWalk generator(alphabet, disorder::SiteCoinField(coin::haar_random(q, 7)),
                                    disorder::DisorderField::uniform_full(11));
    return walk::WalkOperator(generator, tree::BallIndex(alphabet, tree::Word{}, radius));
}

walk::Vector random_vector(std::size_t n) {
    walk::Vector v(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const auto g = rng::normal_pair(3, k, 0);
        v[static_cast<Eigen::Index>(k)] = {g[0], g[1]};
    }
    return v;
}

void BM_apply_openmp(benchmark::State& state) {
    const auto u = make_operator(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const walk::Vector in = random_vector(u.dimension());
    walk::Vector out;
    for (auto _ : state) {
        u.apply(in, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(u.dimension()));
}

void BM_apply_serial(benchmark::State& state) {
    const auto u = make_operator(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const walk::Vector in = random_vector(u.dimension());
    walk::Vector out;
    for (auto _ : state) {
        u.apply_serial(in, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(u.dimension()));
}

void BM_apply_adjoint_openmp(benchmark::State& state) {
    const auto u = make_operator(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const walk::Vector in = random_vector(u.dimension());
    walk::Vector out;
    for (auto _ : state) {
        u.apply_adjoint(in, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(u.dimension()));
}

}  // namespace

BENCHMARK(BM_apply_openmp)->Args({3, 12})->Args({4, 8})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_serial)->Args({3, 12})->Args({4, 8})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply_adjoint_openmp)->Args({3, 12})->Args({4, 8})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
