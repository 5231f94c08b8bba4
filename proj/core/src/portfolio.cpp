#include "tsdantzig/portfolio.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tsdantzig/cov_est.hpp"
#include "tsdantzig/error.hpp"
#include "tsdantzig/linalg.hpp"
#include "tsdantzig/parallel.hpp"

namespace tsdantzig {

namespace {

constexpr double kMinDelta = 1e-10;

void check_target(double m) {
  if (!std::isfinite(m)) throw InvalidArgument("portfolio: target return m must be finite");
}

PortfolioWeights fit_weights(const SampleMatrix& x, PortfolioMethod method, double lambda, const BacktestConfig& config) {
  if (method == PortfolioMethod::dantzig) return estimate_weights_dantzig(x, config.m, lambda, config.lp);
  return ridge_weights(x, config.m, lambda);
}

}  // namespace

std::string_view to_string(PortfolioMethod method) noexcept {
  return method == PortfolioMethod::dantzig ? "dantzig" : "ridge";
}

PortfolioMethod parse_portfolio_method(std::string_view name) {
  if (name == "dantzig" || name == "functional") return PortfolioMethod::dantzig;
  if (name == "ridge") return PortfolioMethod::ridge;
  throw InvalidArgument("unknown portfolio method '" + std::string(name) + "'");
}

PortfolioWeights estimate_weights_dantzig(const SampleMatrix& x, double m, double lambda, const DantzigConfig& lp) {
  if (x.n() < 2) throw InvalidArgument("estimate_weights_dantzig: need n >= 2");
  const Vector x_bar = x.column_means();
  return estimate_weights_dantzig(sample_covariance(x, MeanMode::estimated).matrix, x_bar, m, lambda, lp);
}

PortfolioWeights estimate_weights_dantzig(const DenseMatrix& s, std::span<const double> x_bar, double m,
                                          double lambda, const DantzigConfig& lp) {
  check_target(m);
  DantzigConfig config = lp;
  config.lambda = lambda;
  FunctionalEstimate est = estimate_functional(s, x_bar, config);
  if (est.status == EstimateStatus::infeasible)
    throw InfeasibleError("estimate_weights_dantzig: no feasible theta at lambda = " + std::to_string(lambda));
  if (!est.ok()) throw NumericalError("estimate_weights_dantzig: LP solver did not reach an optimum");
  const double delta = dot(x_bar, est.theta_hat);
  if (!(std::abs(delta) >= kMinDelta))
    throw NumericalError("estimate_weights_dantzig: x_bar^T theta_hat is numerically zero");
  PortfolioWeights out;
  out.w = est.theta_hat;
  for (double& v : out.w) v *= m / delta;
  out.m = m;
  out.delta_hat = delta;
  out.method = PortfolioMethod::dantzig;
  out.lambda = lambda;
  out.theta_hat = std::move(est.theta_hat);
  return out;
}

PortfolioWeights ridge_weights(const SampleMatrix& x, double m, double lambda_ridge) {
  if (x.n() < 2) throw InvalidArgument("ridge_weights: need n >= 2");
  const Vector x_bar = x.column_means();
  return ridge_weights(sample_covariance(x, MeanMode::estimated).matrix, x_bar, m, lambda_ridge);
}

PortfolioWeights ridge_weights(const DenseMatrix& s, std::span<const double> x_bar, double m, double lambda_ridge) {
  check_target(m);
  if (!(lambda_ridge > 0.0) || !std::isfinite(lambda_ridge))
    throw InvalidArgument("ridge_weights: lambda_ridge must be positive");
  if (!s.square() || s.rows() != x_bar.size()) throw InvalidArgument("ridge_weights: dimension mismatch");
  DenseMatrix shifted = s;
  for (std::size_t j = 0; j < shifted.rows(); ++j) shifted(j, j) += lambda_ridge;
  Vector v = solve_linear_system(shifted, x_bar);
  const double delta = dot(x_bar, v);
  if (!(std::abs(delta) >= kMinDelta)) throw NumericalError("ridge_weights: x_bar is numerically zero");
  PortfolioWeights out;
  out.theta_hat = v;
  for (double& e : v) e *= m / delta;
  out.w = std::move(v);
  out.m = m;
  out.delta_hat = delta;
  out.method = PortfolioMethod::ridge;
  out.lambda = lambda_ridge;
  return out;
}

RiskRatio portfolio_risk_and_ratio(std::span<const double> w, std::span<const double> w_star, const DenseMatrix& sigma) {
  if (!sigma.square() || sigma.rows() != w.size() || w_star.size() != w.size())
    throw InvalidArgument("portfolio_risk_and_ratio: dimension mismatch");
  RiskRatio out;
  out.risk = quadratic_form(sigma, w);
  const double base = quadratic_form(sigma, w_star);
  if (!(base > 0.0)) throw NumericalError("portfolio_risk_and_ratio: R(w_star) must be positive");
  out.ratio = out.risk / base;
  return out;
}

void BacktestConfig::validate() const {
  if (window < 2 || hold < 2 || K < 1 || n_train < 2 || n_test < 2)
    throw InvalidArgument("BacktestConfig: window, hold, n_train, n_test must be >= 2 and K >= 1");
  check_target(m);
  dantzig_grid.validate();
  ridge_grid.validate();
  if (!(ridge_grid.values.front() > 0.0)) throw InvalidArgument("BacktestConfig: ridge grid must be positive");
  lp.validate();
}

std::vector<ValidationPeriod> validation_periods(const SampleMatrix& returns, const BacktestConfig& config) {
  config.validate();
  const std::size_t span = config.n_train + config.n_test;
  if (returns.n() < config.K * span)
    throw InvalidArgument("backtest: " + std::to_string(returns.n()) + " rows cannot hold " +
                          std::to_string(config.K) + " periods of " + std::to_string(span) + " rows");
  std::vector<ValidationPeriod> periods;
  periods.reserve(config.K);
  for (std::size_t k = 0; k < config.K; ++k) {
    const std::size_t start = k * span;
    periods.push_back({returns.slice(start, config.n_train), returns.slice(start + config.n_train, config.n_test)});
  }
  return periods;
}

double information_ratio(const std::vector<ValidationPeriod>& periods, PortfolioMethod method, double lambda,
                         const BacktestConfig& config) {
  if (periods.empty()) throw InvalidArgument("information_ratio: no periods");
  double total = 0.0;
  for (const auto& period : periods) {
    PortfolioWeights w;
    try {
      w = fit_weights(period.train, method, lambda, config);
    } catch (const NumericalError&) {
      return -std::numeric_limits<double>::infinity();
    }
    const Vector mu = period.test.column_means();
    const double var = quadratic_form(sample_covariance(period.test, MeanMode::estimated).matrix, w.w);
    if (!(var > 0.0)) return -std::numeric_limits<double>::infinity();
    total += dot(w.w, mu) / std::sqrt(var);
  }
  return total / static_cast<double>(periods.size());
}

BacktestReport backtest_information_ratio(const SampleMatrix& returns, const BacktestConfig& config,
                                          PortfolioMethod method) {
  const auto periods = validation_periods(returns, config);
  if (returns.n() < config.window + config.hold)
    throw InvalidArgument("backtest: fewer rows than one window plus one holding period");
  const LambdaGrid& grid = method == PortfolioMethod::dantzig ? config.dantzig_grid : config.ridge_grid;

  BacktestReport report;
  report.method = method;
  report.ir_curve.assign(grid.size(), 0.0);
  parallel_for(grid.size(), config.workers, [&](std::size_t i) {
    report.ir_curve[i] = information_ratio(periods, method, grid.values[i], config);
  });
  std::size_t best = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(report.ir_curve[i])) continue;
    if (best == grid.size() || report.ir_curve[i] > report.ir_curve[best]) best = i;
  }
  if (best == grid.size()) throw InfeasibleError("backtest: no lambda on the grid gives valid weights in every period");
  report.lambda_selected = grid.values[best];
  report.information_ratio = report.ir_curve[best];

  const std::size_t count = (returns.n() - config.window) / config.hold;
  report.windows.resize(count);
  parallel_for(count, config.workers, [&](std::size_t k) {
    WindowResult& out = report.windows[k];
    out.start = config.window + k * config.hold;
    try {
      out.w = fit_weights(returns.slice(out.start - config.window, config.window), method, report.lambda_selected,
                          config).w;
    } catch (const NumericalError&) {
      out.skipped = true;
      return;
    }
    const SampleMatrix next = returns.slice(out.start, config.hold);
    for (std::size_t i = 0; i < next.n(); ++i) out.period_return += dot(out.w, next.data.row(i));
    out.risk = quadratic_form(sample_covariance(next, MeanMode::estimated).matrix, out.w);
  });

  std::size_t used = 0;
  for (const auto& window : report.windows) {
    if (window.skipped) {
      ++report.skipped_windows;
      continue;
    }
    ++used;
    report.mean_return += window.period_return;
    report.risk += window.risk;
  }
  if (used == 0) throw InfeasibleError("backtest: every rolling window failed");
  report.mean_return /= static_cast<double>(used);
  report.risk /= static_cast<double>(used);
  return report;
}

SampleMatrix SparseMarket::sample(std::size_t n, std::uint64_t seed) const {
  const std::size_t p = mu.size();
  Rng rng(mix_seed(seed));
  std::normal_distribution<double> normal(0.0, 1.0);
  SampleMatrix out{DenseMatrix(n, p)};
  Vector z(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : z) v = normal(rng);
    auto row = out.data.row(i);
    for (std::size_t j = 0; j < p; ++j) {
      double v = mu[j];
      for (std::size_t k = 0; k <= j; ++k) v += chol(j, k) * z[k];
      row[j] = v;
    }
  }
  return out;
}

namespace {

Vector sparse_direction(std::size_t p, std::size_t active, double lo, double hi, Rng& rng) {
  std::vector<std::size_t> index(p);
  for (std::size_t j = 0; j < p; ++j) index[j] = j;
  for (std::size_t j = 0; j < active; ++j) {
    std::uniform_int_distribution<std::size_t> pick(j, p - 1);
    std::swap(index[j], index[pick(rng)]);
  }
  std::uniform_real_distribution<double> magnitude(lo, hi);
  Vector theta(p, 0.0);
  for (std::size_t j = 0; j < active; ++j) {
    const double sign = (rng() & 1) ? 1.0 : -1.0;
    theta[index[j]] = sign * magnitude(rng);
  }
  return theta;
}

}  // namespace

SparseMarket make_sparse_market(const SparseMarketSpec& spec, std::uint64_t seed) {
  if (spec.p < 1 || spec.active < 1 || spec.active > spec.p)
    throw InvalidArgument("make_sparse_market: need 1 <= active <= p");
  if (!(std::abs(spec.rho) < 1.0)) throw InvalidArgument("make_sparse_market: |rho| must be < 1");
  if (!(spec.volatility > 0.0)) throw InvalidArgument("make_sparse_market: volatility must be positive");
  if (!(spec.signal_lo > 0.0 && spec.signal_hi >= spec.signal_lo))
    throw InvalidArgument("make_sparse_market: need 0 < signal_lo <= signal_hi");
  check_target(spec.m);

  const std::size_t p = spec.p;
  SparseMarket market;
  market.m = spec.m;
  market.sigma = DenseMatrix(p, p);
  const double var = spec.volatility * spec.volatility;
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t k = 0; k < p; ++k)
      market.sigma(j, k) = var * std::pow(spec.rho, static_cast<double>(j > k ? j - k : k - j));

  Rng rng(mix_seed(seed));
  const Vector theta = sparse_direction(p, spec.active, spec.signal_lo, spec.signal_hi, rng);
  return make_market(std::move(market.sigma), theta, spec.m);
}

SparseMarket make_factor_market(const FactorMarketSpec& spec, std::uint64_t seed) {
  if (spec.p < 1 || spec.priced < 1 || spec.priced > spec.p)
    throw InvalidArgument("make_factor_market: need 1 <= priced <= p");
  if (!(spec.loading_sd >= 0.0) || !(spec.idio_log_spread >= 0.0))
    throw InvalidArgument("make_factor_market: loading_sd and idio_log_spread must be nonnegative");
  if (!(spec.signal_lo > 0.0 && spec.signal_hi >= spec.signal_lo))
    throw InvalidArgument("make_factor_market: need 0 < signal_lo <= signal_hi");
  check_target(spec.m);

  const std::size_t p = spec.p;
  Rng rng(mix_seed(seed));
  std::normal_distribution<double> normal(0.0, spec.loading_sd);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  DenseMatrix loadings(p, spec.factors);
  for (double& v : loadings.entries()) v = normal(rng);
  DenseMatrix sigma = loadings * loadings.transposed();
  for (std::size_t j = 0; j < p; ++j) sigma(j, j) += std::exp(spec.idio_log_spread * unit(rng));
  const Vector theta = sparse_direction(p, spec.priced, spec.signal_lo, spec.signal_hi, rng);
  return make_market(std::move(sigma), theta, spec.m);
}

SparseMarket make_market(DenseMatrix sigma, std::span<const double> theta, double m) {
  check_target(m);
  if (!sigma.square() || sigma.rows() != theta.size()) throw InvalidArgument("make_market: dimension mismatch");
  SparseMarket market;
  market.m = m;
  market.mu = multiply(sigma, theta);
  market.delta = dot(market.mu, theta);
  if (!(market.delta > 0.0)) throw InvalidArgument("make_market: theta^T Sigma theta must be positive");
  market.w_star.assign(theta.begin(), theta.end());
  for (double& v : market.w_star) v *= m / market.delta;
  market.chol = cholesky_lower(sigma);
  market.sigma = std::move(sigma);
  return market;
}

}  // namespace tsdantzig
