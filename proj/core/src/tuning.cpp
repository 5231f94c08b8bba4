#include "tsdantzig/tuning.hpp"

#include <cmath>
#include <limits>

#include "tsdantzig/error.hpp"
#include "tsdantzig/parallel.hpp"

namespace tsdantzig {

void LambdaGrid::validate() const {
  if (values.empty()) throw InvalidArgument("LambdaGrid: grid is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) throw InvalidArgument("LambdaGrid: values must be finite and >= 0");
    if (i > 0 && !(values[i] > values[i - 1])) throw InvalidArgument("LambdaGrid: values must be strictly increasing");
  }
}

LambdaGrid LambdaGrid::log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw InvalidArgument("LambdaGrid::log_spaced: need 0 < lo <= hi, count >= 1");
  if (count > 1 && hi == lo) throw InvalidArgument("LambdaGrid::log_spaced: lo == hi with several points");
  LambdaGrid grid;
  grid.values.resize(count);
  const double a = std::log(lo);
  const double step = count > 1 ? (std::log(hi) - a) / static_cast<double>(count - 1) : 0.0;
  for (std::size_t i = 0; i < count; ++i) grid.values[i] = std::exp(a + step * static_cast<double>(i));
  grid.values.front() = lo;
  grid.values.back() = count > 1 ? hi : lo;
  grid.validate();
  return grid;
}

LambdaGrid LambdaGrid::linear(double lo, double hi, std::size_t count) {
  if (!(lo >= 0.0) || !(hi >= lo) || count == 0) throw InvalidArgument("LambdaGrid::linear: need 0 <= lo <= hi, count >= 1");
  if (count > 1 && hi == lo) throw InvalidArgument("LambdaGrid::linear: lo == hi with several points");
  LambdaGrid grid;
  grid.values.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    grid.values[i] = count > 1 ? lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1) : lo;
  grid.validate();
  return grid;
}

LambdaGrid LambdaGrid::default_for(std::span<const double> b) {
  const double scale = norm_inf(b);
  if (!(scale > 0.0)) throw InvalidArgument("LambdaGrid::default_for: b must be nonzero");
  return log_spaced(0.01 * scale, 1.5 * scale, 30);
}

std::pair<SampleMatrix, SampleMatrix> split_halves(const SampleMatrix& x) {
  if (x.n() < 4) throw InvalidArgument("split_halves: need n >= 4");
  const std::size_t half = x.n() / 2;
  return {x.slice(0, half), x.slice(half, x.n() - half)};
}

std::vector<FunctionalEstimate> fit_grid(const DenseMatrix& s_train, std::span<const double> b,
                                         const LambdaGrid& grid, const TuneOptions& options) {
  grid.validate();
  std::vector<FunctionalEstimate> fits(grid.size());
  parallel_for(grid.size(), options.workers, [&](std::size_t i) {
    DantzigConfig config;
    config.lambda = grid.values[i];
    config.lp_tol = options.lp_tol;
    config.lp_max_iter = options.lp_max_iter;
    fits[i] = estimate_functional(s_train, b, config);
  });
  return fits;
}

Vector validation_losses(const std::vector<FunctionalEstimate>& fits, const DenseMatrix& m,
                         std::span<const double> b) {
  Vector losses(fits.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < fits.size(); ++i) {
    if (!fits[i].ok()) continue;
    losses[i] = norm2(subtract(multiply(m, fits[i].theta_hat), b));
  }
  return losses;
}

ValidationResult select_lambda(const LambdaGrid& grid, Vector losses) {
  grid.validate();
  if (losses.size() != grid.size()) throw InvalidArgument("select_lambda: losses and grid differ in length");
  std::size_t best = grid.size();
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (!std::isfinite(losses[i])) continue;
    if (best == grid.size() || losses[i] <= losses[best]) best = i;
  }
  if (best == grid.size())
    throw InfeasibleError("no feasible lambda on the grid; extend the grid towards larger values");
  ValidationResult result;
  result.grid = grid;
  result.losses = std::move(losses);
  result.index_star = best;
  result.lambda_star = grid.values[best];
  result.loss_star = result.losses[best];
  return result;
}

ValidationResult tune_lambda_datasplit(const SampleMatrix& x, std::span<const double> b, const LambdaGrid& grid,
                                       const TuneOptions& options) {
  if (b.size() != x.p()) throw InvalidArgument("tune_lambda_datasplit: b length differs from p");
  const auto [train, test] = split_halves(x);
  const DenseMatrix s_train = sample_covariance(train, options.mean_mode).matrix;
  const DenseMatrix s_test = sample_covariance(test, options.mean_mode).matrix;
  return select_lambda(grid, validation_losses(fit_grid(s_train, b, grid, options), s_test, b));
}

ValidationResult tune_lambda_oracle(const SampleMatrix& x, std::span<const double> b, const DenseMatrix& sigma,
                                    const LambdaGrid& grid, const TuneOptions& options) {
  if (b.size() != x.p()) throw InvalidArgument("tune_lambda_oracle: b length differs from p");
  const auto halves = split_halves(x);
  const DenseMatrix s_train = sample_covariance(halves.first, options.mean_mode).matrix;
  return tune_lambda_oracle(s_train, b, sigma, grid, options);
}

ValidationResult tune_lambda_oracle(const DenseMatrix& s_train, std::span<const double> b, const DenseMatrix& sigma,
                                    const LambdaGrid& grid, const TuneOptions& options) {
  if (sigma.rows() != s_train.rows() || sigma.cols() != s_train.cols())
    throw InvalidArgument("tune_lambda_oracle: Sigma and S differ in shape");
  return select_lambda(grid, validation_losses(fit_grid(s_train, b, grid, options), sigma, b));
}

}  // namespace tsdantzig
