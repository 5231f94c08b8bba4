#include <benchmark/benchmark.h>

#include <cmath>

#include "tsdantzig/cov_est.hpp"
#include "tsdantzig/prediction.hpp"
#include "tsdantzig/process_sim.hpp"

using namespace tsdantzig;

namespace {

void BM_Simulate(benchmark::State& state) {
  const auto truncation = static_cast<std::size_t>(state.range(0));
  const LinearProcessModel model = build_model(100, 0.8, 0.8, 1, ModelOptions{.truncation = truncation});
  const ProcessSimulator sim(model);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sim(100, ++seed));
}
BENCHMARK(BM_Simulate)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_SampleCovariance(benchmark::State& state) {
  const SampleMatrix x = simulate(build_model(100, 2.0, 0.8, 2, ModelOptions{.truncation = 100}),
                                  static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(sample_covariance(x, MeanMode::estimated));
}
BENCHMARK(BM_SampleCovariance)->Arg(100)->Arg(1000);

void BM_SfsoAR14(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Vector x = simulate_ar(ARModel::ar14(), n, 7);
  const TaperSpec taper = TaperSpec::trapezoid(select_bandwidth(x));
  const double lambda = std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n));
  for (auto _ : state) benchmark::DoNotOptimize(sfso_coefficients(x, taper, lambda));
}
BENCHMARK(BM_SfsoAR14)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_YuleWalkerAic(benchmark::State& state) {
  const Vector x = simulate_ar(ARModel::ar14(), 500, 8);
  for (auto _ : state) benchmark::DoNotOptimize(yule_walker_aic(x, default_max_order(500)));
}
BENCHMARK(BM_YuleWalkerAic);

}  // namespace

BENCHMARK_MAIN();
