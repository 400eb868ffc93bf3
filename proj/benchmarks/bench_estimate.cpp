#include <benchmark/benchmark.h>

#include "qagarch/baselines.hpp"
#include "qagarch/mc_bench.hpp"
#include "qagarch/model.hpp"
#include "qagarch/quad_estimator.hpp"

namespace {

using namespace qagarch;

TimeSeries arch1_series(std::size_t n) { return simulate(ParamVector(1.2, {0.6}), n, 42); }

void BM_EstimateQuadFit(benchmark::State& state) {
  const auto series = arch1_series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(estimate(series, {1, 0}).theta_hat);
}
BENCHMARK(BM_EstimateQuadFit)->Arg(100)->Arg(300)->Unit(benchmark::kMicrosecond);

void BM_EstimateNelderMead(benchmark::State& state) {
  const auto series = arch1_series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_with(Method::NelderMead, series, {1, 0}).theta_hat);
}
BENCHMARK(BM_EstimateNelderMead)->Arg(100)->Arg(300)->Unit(benchmark::kMicrosecond);

void BM_EstimateBfgs(benchmark::State& state) {
  const auto series = arch1_series(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_with(Method::Bfgs, series, {1, 0}).theta_hat);
}
BENCHMARK(BM_EstimateBfgs)->Arg(100)->Arg(300)->Unit(benchmark::kMicrosecond);

void BM_RmseStudy(benchmark::State& state) {
  Scenario scenario;
  scenario.true_theta = ParamVector(1.2, {0.6});
  scenario.n = 100;
  scenario.replications = 50;
  const std::vector<Method> methods{Method::QuadFit, Method::NelderMead, Method::Bfgs};
  StudyOptions options;
  options.jobs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_rmse_study(std::span(&scenario, 1), methods, options));
}
BENCHMARK(BM_RmseStudy)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
