#include <benchmark/benchmark.h>

#include "tsdantzig/cov_est.hpp"
#include "tsdantzig/functional_est.hpp"
#include "tsdantzig/process_sim.hpp"
#include "tsdantzig/random.hpp"
#include "tsdantzig/tuning.hpp"

using namespace tsdantzig;

namespace {

// Dantzig program on a sample covariance of a p-dimensional linear process.
void BM_EstimateFunctional(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const LinearProcessModel model = build_model(p, 2.0, 0.8, 1, ModelOptions{.truncation = 200});
  const DenseMatrix sigma = true_autocovariance(model, 0);
  const Vector b = multiply(sigma, draw_sparse_theta(p, 0.8, 2));
  const DenseMatrix s = sample_covariance(simulate(model, 100, 3), MeanMode::known_zero).matrix;
  DantzigConfig config;
  config.lambda = 0.1 * norm_inf(b);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_functional(s, b, config));
}
BENCHMARK(BM_EstimateFunctional)->Arg(25)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

// The full (u, eta+, eta-) program handed directly to the simplex solver.
void BM_SolveDantzigLP(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const LinearProcessModel model = build_model(p, 2.0, 0.8, 4, ModelOptions{.truncation = 200});
  const DenseMatrix sigma = true_autocovariance(model, 0);
  const Vector b = multiply(sigma, draw_sparse_theta(p, 0.8, 5));
  const DenseMatrix s = sample_covariance(simulate(model, 100, 6), MeanMode::known_zero).matrix;
  const LPProblem lp = build_dantzig_lp(s, b, 0.1 * norm_inf(b));
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(lp));
}
BENCHMARK(BM_SolveDantzigLP)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
