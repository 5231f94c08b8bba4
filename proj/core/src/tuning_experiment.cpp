#include <cmath>
#include <limits>

#include "tsdantzig/error.hpp"
#include "tsdantzig/parallel.hpp"
#include "tsdantzig/random.hpp"
#include "tsdantzig/tuning.hpp"

namespace tsdantzig {

namespace {

constexpr std::uint64_t kModelStream = 0x6d6f64656c;
constexpr std::uint64_t kThetaStream = 0x7468657461;
constexpr std::uint64_t kDataStream = 0x64617461;

}  // namespace

void TuningExperimentConfig::validate() const {
  if (p < 2) throw InvalidArgument("tuning experiment: p must be >= 2");
  if (n < 8) throw InvalidArgument("tuning experiment: n must be >= 8");
  if (!(beta > 0.5)) throw InvalidArgument("tuning experiment: beta must exceed 1/2");
  if (!(sparsify_frac >= 0.0 && sparsify_frac <= 1.0)) throw InvalidArgument("tuning experiment: sparsify_frac must lie in [0, 1]");
  if (!(theta_zero_frac >= 0.0 && theta_zero_frac < 1.0))
    throw InvalidArgument("tuning experiment: theta_zero_frac must lie in [0, 1)");
  if (replicates < 1) throw InvalidArgument("tuning experiment: replicates must be >= 1");
  if (grid_points < 1 || !(grid_lo > 0.0) || !(grid_hi > grid_lo))
    throw InvalidArgument("tuning experiment: need grid_points >= 1 and 0 < grid_lo < grid_hi");
  if (truncation < 1) throw InvalidArgument("tuning experiment: truncation must be >= 1");
}

Vector draw_sparse_theta(std::size_t p, double zero_frac, std::uint64_t seed) {
  Rng rng(mix_seed(seed));
  std::vector<std::size_t> index(p);
  for (std::size_t j = 0; j < p; ++j) index[j] = j;
  const auto nonzero = p - static_cast<std::size_t>(std::llround(zero_frac * static_cast<double>(p)));
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  Vector theta(p, 0.0);
  for (std::size_t j = 0; j < nonzero; ++j) {
    std::uniform_int_distribution<std::size_t> pick(j, p - 1);
    std::swap(index[j], index[pick(rng)]);
    theta[index[j]] = value(rng);
  }
  return theta;
}

std::vector<TuningReplicate> run_tuning_experiment(const TuningExperimentConfig& config) {
  config.validate();
  ModelOptions options;
  options.truncation = config.truncation;
  options.innovation = config.innovation;
  TuneOptions tune;
  tune.mean_mode = config.mean_mode;
  tune.lp_tol = config.lp_tol;

  std::vector<TuningReplicate> out(config.replicates);
  parallel_for(config.replicates, config.workers, [&](std::size_t r) {
    // Every replicate draws its own coefficient matrices.
    const LinearProcessModel model =
        build_model(config.p, config.beta, config.sparsify_frac, derive_seed(config.seed, kModelStream, r), options);
    const ProcessSimulator simulator(model);
    const DenseMatrix sigma = true_autocovariance(model, 0);
    const Vector theta = draw_sparse_theta(config.p, config.theta_zero_frac, derive_seed(config.seed, kThetaStream, r));
    const Vector b = multiply(sigma, theta);
    const double scale = norm_inf(b);
    if (!(scale > 0.0)) throw NumericalError("tuning experiment: b vanished for replicate " + std::to_string(r));
    const LambdaGrid grid = LambdaGrid::log_spaced(config.grid_lo * scale, config.grid_hi * scale, config.grid_points);

    const SampleMatrix x = simulator(config.n, derive_seed(config.seed, kDataStream, r));
    const auto [train, test] = split_halves(x);
    const DenseMatrix s_train = sample_covariance(train, config.mean_mode).matrix;
    const DenseMatrix s_test = sample_covariance(test, config.mean_mode).matrix;
    const auto fits = fit_grid(s_train, b, grid, tune);

    TuningReplicate& rep = out[r];
    rep.replicate = r;
    const ValidationResult oracle = select_lambda(grid, validation_losses(fits, sigma, b));
    const ValidationResult block = select_lambda(grid, validation_losses(fits, s_test, b));
    rep.lambda_oracle = oracle.lambda_star;
    rep.loss_oracle = oracle.loss_star;
    rep.lambda_block = block.lambda_star;
    rep.loss_block = block.loss_star;
    rep.min_l2_error = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fits.size(); ++i) {
      if (!fits[i].ok()) {
        ++rep.infeasible_points;
        continue;
      }
      const double err = norm2(subtract(fits[i].theta_hat, theta));
      if (err < rep.min_l2_error) {
        rep.min_l2_error = err;
        rep.lambda_min_l2 = grid.values[i];
      }
    }
  });
  return out;
}

}  // namespace tsdantzig
