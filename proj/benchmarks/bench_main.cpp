#include "samossa/eval.hpp"
#include "samossa/lowrank.hpp"
#include "samossa/model.hpp"
#include "samossa/pagemat.hpp"
#include "samossa/ssa_estimator.hpp"
#include "samossa/synth.hpp"

#include <benchmark/benchmark.h>

using namespace samossa;

namespace {

TimePanel panel(Eigen::Index N, Eigen::Index T) {
  return generate(GeneratorSpec::estimation(0.3, N, T, 1)).y;
}

void BM_Svd(benchmark::State& state) {
  const auto N = state.range(0);
  const auto T = state.range(1);
  const auto page = stack(panel(N, T), default_L(N, T));
  for (auto _ : state) benchmark::DoNotOptimize(svd(page.data, SvdVectors::Left));
  state.SetLabel(std::to_string(page.data.rows()) + "x" + std::to_string(page.data.cols()));
}
BENCHMARK(BM_Svd)->Args({10, 1000})->Args({10, 10000})->Args({25, 10000})->Unit(benchmark::kMillisecond);

void BM_Hsvt(benchmark::State& state) {
  const auto N = state.range(0);
  const auto T = state.range(1);
  const auto page = stack(panel(N, T), default_L(N, T));
  for (auto _ : state) benchmark::DoNotOptimize(hsvt(page.data, 6));
}
BENCHMARK(BM_Hsvt)->Args({10, 1000})->Args({10, 10000})->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
  const auto N = state.range(0);
  const auto T = state.range(1);
  const auto y = panel(N, T);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(y, default_L(N, T), RankRule::universal()));
}
BENCHMARK(BM_Decompose)->Args({10, 1000})->Args({10, 30000})->Unit(benchmark::kMillisecond);

void BM_Fit(benchmark::State& state) {
  const auto N = state.range(0);
  const auto T = state.range(1);
  const auto y = panel(N, T);
  SamossaConfig config;
  config.p = {2};
  for (auto _ : state) benchmark::DoNotOptimize(fit(y, config));
}
BENCHMARK(BM_Fit)->Args({10, 1000})->Args({25, 10000})->Unit(benchmark::kMillisecond);

void BM_RollingEval(benchmark::State& state) {
  const auto data = generate(GeneratorSpec::forecasting(25, 10025, 1));
  SamossaConfig config;
  config.p = {1};
  const auto model = fit(data.y.slice(0, 10000), config);
  const auto test = data.y.slice(10000, 10025);
  for (auto _ : state) benchmark::DoNotOptimize(rolling_eval(model, test));
}
BENCHMARK(BM_RollingEval)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
