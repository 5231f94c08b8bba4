#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tsdantzig/functional_est.hpp"
#include "tsdantzig/process_sim.hpp"
#include "tsdantzig/tuning.hpp"

namespace tsdantzig {

enum class PortfolioMethod { dantzig, ridge };

std::string_view to_string(PortfolioMethod method) noexcept;
PortfolioMethod parse_portfolio_method(std::string_view name);

struct PortfolioWeights {
  Vector w;
  double m = 1.0;
  /// x_bar^T theta_hat for the Dantzig method, x_bar^T (S + lambda I)^{-1} x_bar for ridge.
  double delta_hat = 0.0;
  PortfolioMethod method = PortfolioMethod::dantzig;
  double lambda = 0.0;
  Vector theta_hat;
};

/// theta_hat from the Dantzig program with S_n (sample-mean centered) and
/// b_hat = x_bar, then w = m theta_hat / (x_bar^T theta_hat). Throws
/// InfeasibleError when the program has no solution and NumericalError when
/// |x_bar^T theta_hat| < 1e-10.
PortfolioWeights estimate_weights_dantzig(const SampleMatrix& x, double m, double lambda,
                                          const DantzigConfig& lp = {});
PortfolioWeights estimate_weights_dantzig(const DenseMatrix& s, std::span<const double> x_bar, double m,
                                          double lambda, const DantzigConfig& lp = {});

/// w proportional to (S_n + lambda I)^{-1} x_bar with w^T x_bar = m.
PortfolioWeights ridge_weights(const SampleMatrix& x, double m, double lambda_ridge);
PortfolioWeights ridge_weights(const DenseMatrix& s, std::span<const double> x_bar, double m, double lambda_ridge);

struct RiskRatio {
  double risk = 0.0;
  double ratio = 0.0;
};

/// R(w) = w^T Sigma w and R(w) / R(w_star).
RiskRatio portfolio_risk_and_ratio(std::span<const double> w, std::span<const double> w_star, const DenseMatrix& sigma);

/// Train/test pair used to score one validation period.
struct ValidationPeriod {
  SampleMatrix train;
  SampleMatrix test;
};

struct BacktestConfig {
  /// Trailing training days for each rebalance of the rolling backtest.
  std::size_t window = 126;
  /// Holding days between rebalances.
  std::size_t hold = 21;
  /// Validation periods used to choose lambda.
  std::size_t K = 17;
  std::size_t n_train = 125;
  std::size_t n_test = 21;
  double m = 1.0;
  LambdaGrid dantzig_grid = LambdaGrid::linear(0.0, 0.1, 21);
  /// 0 is excluded because ridge needs a positive lambda: the 21-point grid on
  /// [0, 2] with its first point replaced by the smallest positive one.
  LambdaGrid ridge_grid = LambdaGrid::linear(0.1, 2.0, 20);
  DantzigConfig lp;
  std::size_t workers = 1;

  void validate() const;
};

/// K consecutive (n_train, n_test) blocks from the start of the data.
std::vector<ValidationPeriod> validation_periods(const SampleMatrix& returns, const BacktestConfig& config);

/// K^{-1} sum_k w_k^T mu_k / sqrt(w_k^T S_k w_k) over the periods, with w_k
/// fitted on the train block and (mu_k, S_k) the test-block mean and
/// covariance. Returns -inf when any period has no valid weights.
double information_ratio(const std::vector<ValidationPeriod>& periods, PortfolioMethod method, double lambda,
                         const BacktestConfig& config);

struct WindowResult {
  std::size_t start = 0;
  bool skipped = false;
  Vector w;
  /// Sum of w^T x over the holding days.
  double period_return = 0.0;
  /// w^T S_next w with S_next the covariance of the holding days.
  double risk = 0.0;
};

struct BacktestReport {
  PortfolioMethod method = PortfolioMethod::dantzig;
  double lambda_selected = 0.0;
  double information_ratio = 0.0;
  /// Information ratio for every grid point.
  Vector ir_curve;
  std::vector<WindowResult> windows;
  double mean_return = 0.0;
  double risk = 0.0;
  std::size_t skipped_windows = 0;
};

/// Picks lambda by information ratio over the validation periods, then
/// re-estimates weights on every trailing window and holds them for `hold`
/// days. Windows whose fit fails are skipped and counted.
BacktestReport backtest_information_ratio(const SampleMatrix& returns, const BacktestConfig& config,
                                          PortfolioMethod method);

/// Synthetic market with a known sparse optimal allocation: returns are
/// Gaussian with mean mu and covariance Sigma, and w_star = m Sigma^{-1} mu /
/// (mu^T Sigma^{-1} mu) has `active` nonzero entries.
struct SparseMarket {
  DenseMatrix sigma;
  Vector mu;
  Vector w_star;
  double m = 1.0;
  double delta = 0.0;
  DenseMatrix chol;

  SampleMatrix sample(std::size_t n, std::uint64_t seed) const;
  double optimal_risk() const noexcept { return m * m / delta; }
};

struct SparseMarketSpec {
  std::size_t p = 50;
  std::size_t active = 5;
  /// Sigma_jk = rho^{|j-k|} scaled by `volatility`^2.
  double rho = 0.5;
  double volatility = 1.0;
  /// Nonzero entries of Sigma^{-1} mu are drawn uniformly from [lo, hi] with a random sign.
  double signal_lo = 0.5;
  double signal_hi = 1.0;
  double m = 1.0;
};

SparseMarket make_sparse_market(const SparseMarketSpec& spec, std::uint64_t seed);

/// Factor covariance B B^T + D with `factors` Gaussian loadings per asset and
/// idiosyncratic variances D_jj = exp(U(-idio_log_spread, idio_log_spread));
/// Sigma^{-1} mu is nonzero on `priced` randomly chosen assets.
struct FactorMarketSpec {
  std::size_t p = 100;
  std::size_t factors = 3;
  double loading_sd = 1.0;
  double idio_log_spread = 2.5;
  std::size_t priced = 5;
  double signal_lo = 0.3;
  double signal_hi = 0.6;
  double m = 1.0;
};

SparseMarket make_factor_market(const FactorMarketSpec& spec, std::uint64_t seed);

/// Market with covariance `sigma` and optimal direction `theta` (mu = Sigma theta).
SparseMarket make_market(DenseMatrix sigma, std::span<const double> theta, double m = 1.0);

}  // namespace tsdantzig
