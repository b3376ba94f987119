#include <benchmark/benchmark.h>

#include "causalcast/enumerate.hpp"
#include "causalcast/merge.hpp"
#include "causalcast/model_search.hpp"
#include "causalcast/rng.hpp"
#include "causalcast/stat_tests.hpp"
#include "causalcast/synth.hpp"
#include "causalcast/vc_bounds.hpp"

using namespace causalcast;

namespace {

void BM_DSeparated(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Dag dag = std::get<Dag>(sample_graph(ModelClass::dag, n, 7, GeneratorParams{0.3, 0.5, 0.9}));
    Rng rng(11);
    std::vector<Query> queries = sample_queries_iid(QueryKind::cond_indep, n, 256, 3, {});
    std::size_t q = 0;
    for (auto _ : state) {
        const Query& query = queries[q++ % queries.size()];
        benchmark::DoNotOptimize(d_separated(dag, query.vars[0], query.vars[1], query.cond));
    }
}
BENCHMARK(BM_DSeparated)->Arg(8)->Arg(15)->Arg(30);

void BM_EnumerateDags(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_models(ModelClass::dag, n));
    }
}
BENCHMARK(BM_EnumerateDags)->Arg(3)->Arg(4);

void BM_BinaryBound(benchmark::State& state) {
    std::uint64_t k = 1000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(binary_bound(BoundSpec{k, 73.6, 0.1}));
    }
}
BENCHMARK(BM_BinaryBound);

void BM_RequiredK(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(required_k(949.0, 0.1, 0.1, BoundVariant::sqrt_only));
    }
}
BENCHMARK(BM_RequiredK);

void BM_PartialCorr(benchmark::State& state) {
    LinearSem sem;
    sem.graph = Dag(4, {{0, 1}, {1, 2}, {2, 3}});
    sem.coeffs[{0, 1}] = 0.8;
    sem.coeffs[{1, 2}] = 0.7;
    sem.coeffs[{2, 3}] = 0.6;
    sem.noise.assign(4, NoiseSpec{NoiseSpec::Kind::gaussian, 1.0});
    const Dataset d = sample_data(sem, state.range(0), 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(partial_corr(d, 0, 3, {1, 2}));
    }
}
BENCHMARK(BM_PartialCorr)->Arg(1000)->Arg(10000);

void BM_FitLocalPolytree(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto truth = sample_graph(ModelClass::polytree, n, 3, GeneratorParams{});
    std::vector<LabeledQuery> qs;
    for (const auto& q : sample_queries_iid(QueryKind::cond_indep, n, 500, 4, {})) {
        qs.push_back({q, model_predict(truth, q)});
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_local(ModelClass::polytree, n, qs, 100, 1, 5));
    }
}
BENCHMARK(BM_FitLocalPolytree)->Unit(benchmark::kMillisecond)->Arg(10)->Arg(15);

void BM_MergeDiscrete(benchmark::State& state) {
    const DiscreteDist pxy({0, 1}, {4, 4},
                           std::vector<double>(16, 1.0 / 16));
    const DiscreteDist pyz({1, 2}, {4, 4},
                           std::vector<double>(16, 1.0 / 16));
    for (auto _ : state) {
        benchmark::DoNotOptimize(merge_chain_discrete(pxy, pyz, 1e-9));
    }
}
BENCHMARK(BM_MergeDiscrete);

void BM_EstimateVcDirection(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_vc(ClassSpec::Kind::direction, 5, 5000, 1));
    }
}
BENCHMARK(BM_EstimateVcDirection)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
