#include "tsdantzig/prediction.hpp"

#include <cmath>
#include <string>

#include "tsdantzig/error.hpp"
#include "tsdantzig/linalg.hpp"
#include "tsdantzig/parallel.hpp"
#include "tsdantzig/random.hpp"

namespace tsdantzig {

namespace {

PredictorCoefficients solve_sfso(const DenseMatrix& gamma_matrix, std::span<const double> gamma_shifted, double lambda,
                                 const DantzigConfig& lp) {
  DantzigConfig config = lp;
  config.lambda = lambda;
  FunctionalEstimate est = estimate_functional(gamma_matrix, gamma_shifted, config);
  if (est.status == EstimateStatus::infeasible)
    throw InfeasibleError("sfso: no feasible predictor at lambda = " + std::to_string(lambda));
  if (!est.ok()) throw NumericalError("sfso: LP solver did not reach an optimum");
  PredictorCoefficients out;
  out.theta = std::move(est.theta_hat);
  out.method = PredictorMethod::sfso;
  out.lambda = lambda;
  return out;
}

Vector demeaned(std::span<const double> x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  Vector out(x.begin(), x.end());
  for (double& v : out) v -= mean;
  return out;
}

Vector simulate_series(const PredictionModel& model, std::size_t n, std::uint64_t seed) {
  if (const auto* ar = std::get_if<ARModel>(&model)) return simulate_ar(*ar, n, seed);
  const auto& lin = std::get<LinearProcessModel>(model);
  return simulate(lin, n, seed).column(0);
}

}  // namespace

std::string_view to_string(PredictorMethod method) noexcept {
  switch (method) {
    case PredictorMethod::sfso: return "sfso";
    case PredictorMethod::fso: return "fso";
    case PredictorMethod::ar: return "ar";
  }
  return "unknown";
}

PredictorMethod parse_predictor_method(std::string_view name) {
  if (name == "sfso") return PredictorMethod::sfso;
  if (name == "fso") return PredictorMethod::fso;
  if (name == "ar") return PredictorMethod::ar;
  throw InvalidArgument("unknown prediction method '" + std::string(name) + "'");
}

PredictorCoefficients sfso_coefficients(std::span<const double> x, const TaperSpec& taper, double lambda,
                                        const DantzigConfig& lp) {
  if (x.size() < 4) throw InvalidArgument("sfso_coefficients: need n >= 4");
  const ToeplitzAutocov acov = flat_top_autocov_matrix(x, taper);
  PredictorCoefficients out = solve_sfso(acov.assemble(), acov.shifted(), lambda, lp);
  out.bandwidth = taper.l;
  return out;
}

PredictorCoefficients sfso_from_autocovariances(std::span<const double> gamma, double lambda,
                                                const DantzigConfig& lp) {
  if (gamma.size() < 2) throw InvalidArgument("sfso_from_autocovariances: need gamma_0..gamma_n with n >= 1");
  const ToeplitzAutocov acov{Vector(gamma.begin(), gamma.end() - 1)};
  return solve_sfso(acov.assemble(), gamma.subspan(1), lambda, lp);
}

PredictorCoefficients fso_coefficients(std::span<const double> x, const TaperSpec& taper) {
  if (x.size() < 4) throw InvalidArgument("fso_coefficients: need n >= 4");
  const ToeplitzAutocov acov = flat_top_autocov_matrix(x, taper);
  PredictorCoefficients out;
  out.theta = solve_linear_system(acov.assemble(), acov.shifted());
  out.method = PredictorMethod::fso;
  out.bandwidth = taper.l;
  return out;
}

LevinsonDurbin levinson_durbin(std::span<const double> gamma, std::size_t max_order) {
  if (gamma.size() < max_order + 1) throw InvalidArgument("levinson_durbin: need gamma_0..gamma_max_order");
  LevinsonDurbin out;
  out.coefficients.reserve(max_order + 1);
  out.innovation_variance.reserve(max_order + 1);
  out.coefficients.emplace_back();
  out.innovation_variance.push_back(gamma[0]);
  for (std::size_t k = 1; k <= max_order; ++k) {
    const Vector& prev = out.coefficients.back();
    const double v = out.innovation_variance.back();
    if (!(v > 0.0)) break;
    double num = gamma[k];
    for (std::size_t j = 1; j < k; ++j) num -= prev[j - 1] * gamma[k - j];
    const double reflection = num / v;
    Vector next(k);
    for (std::size_t j = 1; j < k; ++j) next[j - 1] = prev[j - 1] - reflection * prev[k - j - 1];
    next[k - 1] = reflection;
    out.coefficients.push_back(std::move(next));
    out.innovation_variance.push_back(v * (1.0 - reflection * reflection));
  }
  return out;
}

std::size_t default_max_order(std::size_t n) noexcept {
  if (n < 2) return 0;
  const auto order = static_cast<std::size_t>(std::floor(10.0 * std::log10(static_cast<double>(n))));
  return std::min(order, n - 1);
}

PredictorCoefficients yule_walker_aic(std::span<const double> x, std::size_t max_order) {
  const std::size_t n = x.size();
  if (n < 2 || 2 * max_order >= n) throw InvalidArgument("yule_walker_aic: need max_order < n / 2");
  const Vector centered = demeaned(x);
  Vector gamma(max_order + 1);
  for (std::size_t k = 0; k <= max_order; ++k)
    gamma[k] = sample_autocovariance(centered, static_cast<std::ptrdiff_t>(k));

  PredictorCoefficients out;
  out.theta.assign(n, 0.0);
  out.method = PredictorMethod::ar;
  const LevinsonDurbin ld = levinson_durbin(gamma, max_order);
  if (!(ld.innovation_variance[0] > 0.0)) return out;

  const double dn = static_cast<double>(n);
  std::size_t best = 0;
  double best_aic = dn * std::log(ld.innovation_variance[0]);
  for (std::size_t k = 1; k < ld.innovation_variance.size(); ++k) {
    const double var = ld.innovation_variance[k];
    if (!(var > 0.0)) break;
    const double aic = dn * std::log(var) + 2.0 * static_cast<double>(k);
    if (aic < best_aic) {
      best_aic = aic;
      best = k;
    }
  }
  out.order = best;
  for (std::size_t j = 0; j < best; ++j) out.theta[j] = ld.coefficients[best][j];
  return out;
}

Vector true_autocovariances(const PredictionModel& model, std::size_t max_lag) {
  if (const auto* ar = std::get_if<ARModel>(&model)) return ar_autocovariance(*ar, max_lag);
  const auto& lin = std::get<LinearProcessModel>(model);
  if (lin.p != 1) throw InvalidArgument("true_autocovariances: prediction needs a univariate model");
  lin.validate();
  const std::size_t m = lin.truncation();
  Vector gamma(max_lag + 1, 0.0);
  for (std::size_t k = 0; k <= std::min(max_lag, m); ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j + k <= m; ++j) acc += lin.coefficients[j](0, 0) * lin.coefficients[j + k](0, 0);
    gamma[k] = acc;
  }
  return gamma;
}

double prediction_risk(std::span<const double> w, std::span<const double> gamma) {
  const std::size_t n = w.size();
  if (gamma.size() < n + 1) throw InvalidArgument("prediction_risk: need gamma_0..gamma_n");
  double quad = 0.0;
  double cross = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (w[j] == 0.0) continue;
    double row = gamma[0] * w[j];
    for (std::size_t k = 0; k < j; ++k) row += 2.0 * gamma[j - k] * w[k];
    quad += w[j] * row;
    cross += w[j] * gamma[j + 1];
  }
  return quad - 2.0 * cross + gamma[0];
}

double prediction_risk(const PredictorCoefficients& coefficients, const PredictionModel& model) {
  return prediction_risk(coefficients.theta, true_autocovariances(model, coefficients.theta.size()));
}

Vector oracle_predictor(std::span<const double> gamma, std::size_t n) {
  const LevinsonDurbin ld = levinson_durbin(gamma, n);
  if (ld.coefficients.size() != n + 1) throw SingularMatrixError("oracle_predictor: Gamma_n is singular");
  return ld.coefficients.back();
}

std::vector<PredictionRiskReport> relative_risk_experiment(const PredictionModel& model,
                                                           const RelativeRiskConfig& config) {
  const std::size_t n = config.n;
  if (config.replicates < 1) throw InvalidArgument("relative_risk_experiment: need at least one replicate");
  if (config.methods.empty()) throw InvalidArgument("relative_risk_experiment: no methods requested");
  if (n < 20) throw InvalidArgument("relative_risk_experiment: need n >= 20");
  const double lambda =
      std::isnan(config.lambda) ? std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n)) : config.lambda;
  const std::size_t max_order = config.max_order == 0 ? default_max_order(n) : config.max_order;

  const Vector gamma = true_autocovariances(model, n);
  const double oracle_risk = prediction_risk(oracle_predictor(gamma, n), gamma);
  if (!(oracle_risk > 0.0)) throw NumericalError("relative_risk_experiment: oracle risk is not positive");

  const std::size_t methods = config.methods.size();
  // NaN marks a failed fit.
  std::vector<Vector> risks(methods, Vector(config.replicates));
  parallel_for(config.replicates, config.workers, [&](std::size_t r) {
    const Vector x = simulate_series(model, n, derive_seed(config.seed, 0x707265, r));
    const std::size_t l = select_bandwidth(x, config.bandwidth_rule);
    for (std::size_t k = 0; k < methods; ++k) {
      try {
        PredictorCoefficients fit;
        switch (config.methods[k]) {
          case PredictorMethod::sfso: fit = sfso_coefficients(x, TaperSpec::trapezoid(l), lambda, config.lp); break;
          case PredictorMethod::fso: fit = fso_coefficients(x, TaperSpec::trapezoid(l)); break;
          case PredictorMethod::ar: fit = yule_walker_aic(x, max_order); break;
        }
        risks[k][r] = prediction_risk(fit.theta, gamma);
      } catch (const NumericalError&) {
        risks[k][r] = std::numeric_limits<double>::quiet_NaN();
      }
    }
  });

  std::vector<PredictionRiskReport> reports;
  for (std::size_t k = 0; k < methods; ++k) {
    PredictionRiskReport rep;
    rep.method = config.methods[k];
    rep.n = n;
    rep.oracle_risk = oracle_risk;
    double sum = 0.0;
    double sum_sq = 0.0;
    double risk_sum = 0.0;
    for (double risk : risks[k]) {
      if (std::isnan(risk)) {
        ++rep.failures;
        continue;
      }
      const double rel = risk / oracle_risk;
      sum += rel;
      sum_sq += rel * rel;
      risk_sum += risk;
      ++rep.replicates;
    }
    if (rep.replicates > 0) {
      const double count = static_cast<double>(rep.replicates);
      rep.relative_risk = sum / count;
      rep.method_risk = risk_sum / count;
      if (rep.replicates > 1) {
        const double var = std::max(0.0, (sum_sq - count * rep.relative_risk * rep.relative_risk) / (count - 1.0));
        rep.std_error = std::sqrt(var / count);
      }
    } else {
      rep.relative_risk = rep.method_risk = std::numeric_limits<double>::quiet_NaN();
    }
    reports.push_back(rep);
  }
  return reports;
}

}  // namespace tsdantzig
