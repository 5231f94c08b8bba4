#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tsdantzig/cov_est.hpp"
#include "tsdantzig/functional_est.hpp"
#include "tsdantzig/process_sim.hpp"

namespace tsdantzig {

struct LambdaGrid {
  Vector values;

  std::size_t size() const noexcept { return values.size(); }
  /// Nonempty, nonnegative, finite and strictly increasing.
  void validate() const;

  static LambdaGrid log_spaced(double lo, double hi, std::size_t count);
  static LambdaGrid linear(double lo, double hi, std::size_t count);
  /// 30 log-spaced points from 0.01 |b|_inf to 1.5 |b|_inf.
  static LambdaGrid default_for(std::span<const double> b);
};

struct ValidationResult {
  LambdaGrid grid;
  /// One entry per grid point; +inf marks an infeasible (or failed) fit.
  Vector losses;
  double lambda_star = 0.0;
  double loss_star = 0.0;
  std::size_t index_star = 0;
};

/// First floor(n/2) rows, then the rest.
std::pair<SampleMatrix, SampleMatrix> split_halves(const SampleMatrix& x);

struct TuneOptions {
  MeanMode mean_mode = MeanMode::estimated;
  double lp_tol = 1e-9;
  std::size_t lp_max_iter = 200000;
  /// Grid points are fitted on this many threads (0 = all cores).
  std::size_t workers = 1;
};

/// theta_hat(lambda) on a fixed training covariance for every grid point.
std::vector<FunctionalEstimate> fit_grid(const DenseMatrix& s_train, std::span<const double> b,
                                         const LambdaGrid& grid, const TuneOptions& options = {});

/// |M theta_hat - b|_2 per fit, +inf where there is no estimate.
Vector validation_losses(const std::vector<FunctionalEstimate>& fits, const DenseMatrix& m,
                         std::span<const double> b);

/// Minimum finite loss, ties going to the larger lambda. Throws InfeasibleError
/// when every loss is infinite (the grid does not reach a feasible lambda).
ValidationResult select_lambda(const LambdaGrid& grid, Vector losses);

/// Scores |S_test theta_hat_train(lambda) - b|_2 using the two halves of x.
ValidationResult tune_lambda_datasplit(const SampleMatrix& x, std::span<const double> b, const LambdaGrid& grid,
                                       const TuneOptions& options = {});

/// Scores |Sigma theta_hat_train(lambda) - b|_2.
ValidationResult tune_lambda_oracle(const SampleMatrix& x, std::span<const double> b, const DenseMatrix& sigma,
                                    const LambdaGrid& grid, const TuneOptions& options = {});

/// Oracle scoring for a training covariance supplied directly.
ValidationResult tune_lambda_oracle(const DenseMatrix& s_train, std::span<const double> b, const DenseMatrix& sigma,
                                    const LambdaGrid& grid, const TuneOptions& options = {});

/// Replicated simulation of the two tuning procedures on a linear process.
struct TuningExperimentConfig {
  std::size_t p = 100;
  std::size_t n = 100;
  double beta = 2.0;
  Innovation innovation = Innovation::gaussian;
  double sparsify_frac = 0.8;
  std::size_t truncation = 2000;
  /// Fraction of exact zeros in theta; the rest are i.i.d. uniform on [-1, 1].
  double theta_zero_frac = 0.8;
  std::size_t replicates = 100;
  std::uint64_t seed = 1;
  /// Log-spaced grid from grid_lo |b|_inf to grid_hi |b|_inf.
  std::size_t grid_points = 30;
  double grid_lo = 0.01;
  double grid_hi = 1.5;
  MeanMode mean_mode = MeanMode::known_zero;
  double lp_tol = 1e-9;
  std::size_t workers = 1;

  void validate() const;
};

struct TuningReplicate {
  std::size_t replicate = 0;
  double lambda_oracle = 0.0;
  double loss_oracle = 0.0;
  double lambda_block = 0.0;
  double loss_block = 0.0;
  /// min over the grid of |theta_hat_train(lambda) - theta|_2 and its argmin.
  double min_l2_error = 0.0;
  double lambda_min_l2 = 0.0;
  std::size_t infeasible_points = 0;
};

/// theta with round(theta_zero_frac p) zeros at random positions.
Vector draw_sparse_theta(std::size_t p, double zero_frac, std::uint64_t seed);

/// The model, theta and data streams depend only on (seed, replicate), so
/// runs that differ in beta, n or the innovation law are paired.
std::vector<TuningReplicate> run_tuning_experiment(const TuningExperimentConfig& config);

}  // namespace tsdantzig
