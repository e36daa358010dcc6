#include <benchmark/benchmark.h>

#include <Eigen/Cholesky>

#include "ubcov/estimate.hpp"
#include "ubcov/mvn.hpp"
#include "ubcov/norms.hpp"
#include "ubcov/scenario.hpp"
#include "ubcov/simulate.hpp"
#include "ubcov/threshold.hpp"
#include "ubcov/variance.hpp"

namespace {

using namespace ubcov;

UniformBlockCoords truth_for(std::size_t k) { return scenario2_truth(k, 10, 1); }

void BM_Inverse(benchmark::State& state) {
    const auto m = truth_for(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(inverse(m));
}
BENCHMARK(BM_Inverse)->Arg(5)->Arg(50)->Arg(200);

void BM_Eigenvalues(benchmark::State& state) {
    const auto m = truth_for(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(eigenvalue_groups(m));
}
BENCHMARK(BM_Eigenvalues)->Arg(5)->Arg(50)->Arg(200);

void BM_DenseInverse(benchmark::State& state) {
    const Eigen::MatrixXd d = expand(truth_for(static_cast<std::size_t>(state.range(0)))).matrix();
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d.rows(), d.cols());
    for (auto _ : state) benchmark::DoNotOptimize(Eigen::MatrixXd(d.llt().solve(eye)));
}
BENCHMARK(BM_DenseInverse)->Arg(5)->Arg(50);

void BM_FrobeniusUb(benchmark::State& state) {
    const auto x = truth_for(static_cast<std::size_t>(state.range(0)));
    const auto y = scale(x, 1.1);
    for (auto _ : state) benchmark::DoNotOptimize(frobenius_ub(x, y));
}
BENCHMARK(BM_FrobeniusUb)->Arg(5)->Arg(50)->Arg(200);

void BM_BlockStatsFromData(benchmark::State& state) {
    const auto t = truth_for(static_cast<std::size_t>(state.range(0)));
    const DataMatrix x = sample_mvn(100, t, 2);
    for (auto _ : state) benchmark::DoNotOptimize(block_stats_from_data(x, t.partition(), true));
}
BENCHMARK(BM_BlockStatsFromData)->Arg(5)->Arg(50);

void BM_ExactVariance(benchmark::State& state) {
    const auto t = truth_for(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(exact_variance_theta(t, std::size_t{100}));
}
BENCHMARK(BM_ExactVariance)->Arg(5)->Arg(50);

void BM_SelectLambda(benchmark::State& state) {
    const auto t = truth_for(50);
    const DataMatrix x = sample_mvn(30, t, 3);
    const ThresholdConfig cfg = ThresholdConfig::resampled(4);
    for (auto _ : state) benchmark::DoNotOptimize(select_lambda(x, t.partition(), cfg));
}
BENCHMARK(BM_SelectLambda)->Unit(benchmark::kMillisecond);

void BM_Scenario1Replicates(benchmark::State& state) {
    const ScenarioSpec spec = make_scenario1(100, 50, 1, 30);
    for (auto _ : state) benchmark::DoNotOptimize(run_scenario(spec));
}
BENCHMARK(BM_Scenario1Replicates)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
