#include <benchmark/benchmark.h>

#include "qagarch/likelihood.hpp"
#include "qagarch/model.hpp"

namespace {

using namespace qagarch;

void BM_QuasiNll(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ParamVector theta(0.2, {0.1}, {0.7});
  const auto series = simulate(theta, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(quasi_nll(series, theta).value);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_QuasiNll)->Arg(100)->Arg(1000)->Arg(10000);

void BM_QuasiNllGradient(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ParamVector theta(0.2, {0.1}, {0.7});
  const auto series = simulate(theta, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(quasi_nll_gradient(series, theta));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_QuasiNllGradient)->Arg(100)->Arg(1000)->Arg(10000);

void BM_NumericHessian(benchmark::State& state) {
  const ParamVector theta(0.7, {0.4});
  const auto series = simulate(theta, 300, 1);
  for (auto _ : state) benchmark::DoNotOptimize(numeric_hessian(series, theta));
}
BENCHMARK(BM_NumericHessian);

void BM_Simulate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ParamVector theta(1.2, {0.6});
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(theta, n, ++seed));
}
BENCHMARK(BM_Simulate)->Arg(300);

}  // namespace
