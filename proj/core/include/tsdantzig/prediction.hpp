#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "tsdantzig/cov_est.hpp"
#include "tsdantzig/functional_est.hpp"
#include "tsdantzig/process_sim.hpp"

namespace tsdantzig {

enum class PredictorMethod { sfso, fso, ar };

std::string_view to_string(PredictorMethod method) noexcept;
PredictorMethod parse_predictor_method(std::string_view name);

/// One-step predictor X_hat_{n+1} = sum_i theta[i-1] X_{n+1-i}.
struct PredictorCoefficients {
  Vector theta;
  PredictorMethod method = PredictorMethod::sfso;
  std::size_t bandwidth = 0;
  double lambda = 0.0;
  /// Selected order of the AR method.
  std::size_t order = 0;
};

/// Dantzig program with S = Gamma_hat_n and b_hat = gamma_hat_n (the tapered
/// lags 1..n). Throws InfeasibleError / NumericalError when it has no solution.
PredictorCoefficients sfso_coefficients(std::span<const double> x, const TaperSpec& taper, double lambda,
                                        const DantzigConfig& lp = {});
/// The same program on given autocovariances gamma_0..gamma_n.
PredictorCoefficients sfso_from_autocovariances(std::span<const double> gamma, double lambda,
                                                const DantzigConfig& lp = {});

/// Gamma_hat_n^{-1} gamma_hat_n; throws SingularMatrixError when the tapered
/// matrix is numerically singular.
PredictorCoefficients fso_coefficients(std::span<const double> x, const TaperSpec& taper);

struct LevinsonDurbin {
  /// coefficients[k] holds phi_{k,1..k}.
  std::vector<Vector> coefficients;
  /// Innovation variance sigma_k^2 for k = 0..max_order.
  Vector innovation_variance;
};

/// Durbin-Levinson recursion on gamma_0..gamma_{max_order}.
LevinsonDurbin levinson_durbin(std::span<const double> gamma, std::size_t max_order);

/// min(floor(10 log10 n), n - 1).
std::size_t default_max_order(std::size_t n) noexcept;

/// Yule-Walker fits of orders 0..max_order on mean-centered autocovariances
/// (divisor n); keeps the order minimizing n log sigma_k^2 + 2k.
PredictorCoefficients yule_walker_aic(std::span<const double> x, std::size_t max_order);

using PredictionModel = std::variant<ARModel, LinearProcessModel>;

/// gamma_0 .. gamma_{max_lag} of a univariate model.
Vector true_autocovariances(const PredictionModel& model, std::size_t max_lag);

/// w^T Gamma w - 2 w^T gamma + gamma_0 with gamma holding gamma_0..gamma_n, n = |w|.
double prediction_risk(std::span<const double> w, std::span<const double> gamma);
double prediction_risk(const PredictorCoefficients& coefficients, const PredictionModel& model);

/// Gamma^{-1} gamma for the true moments; the oracle one-step predictor.
Vector oracle_predictor(std::span<const double> gamma, std::size_t n);

struct PredictionRiskReport {
  PredictorMethod method = PredictorMethod::sfso;
  std::size_t n = 0;
  double oracle_risk = 0.0;
  /// Mean risk over successful replicates.
  double method_risk = 0.0;
  /// Mean of R(method) / R(oracle) over successful replicates.
  double relative_risk = 0.0;
  double std_error = 0.0;
  std::size_t replicates = 0;
  std::size_t failures = 0;
};

struct RelativeRiskConfig {
  std::size_t n = 500;
  std::vector<PredictorMethod> methods{PredictorMethod::sfso, PredictorMethod::ar};
  std::size_t replicates = 200;
  std::uint64_t seed = 1;
  /// NaN selects sqrt(log n / n).
  double lambda = std::numeric_limits<double>::quiet_NaN();
  BandwidthRule bandwidth_rule;
  /// 0 selects default_max_order(n).
  std::size_t max_order = 0;
  DantzigConfig lp;
  std::size_t workers = 1;
};

/// Per replicate: simulate, choose the bandwidth with select_bandwidth, fit
/// every method and evaluate its exact risk.
std::vector<PredictionRiskReport> relative_risk_experiment(const PredictionModel& model,
                                                           const RelativeRiskConfig& config);

}  // namespace tsdantzig
