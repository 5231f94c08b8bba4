#include "tsdantzig_cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "tsdantzig/classify.hpp"
#include "tsdantzig/cov_est.hpp"
#include "tsdantzig/csv.hpp"
#include "tsdantzig/error.hpp"
#include "tsdantzig/functional_est.hpp"
#include "tsdantzig/model_io.hpp"
#include "tsdantzig/parallel.hpp"
#include "tsdantzig/portfolio.hpp"
#include "tsdantzig/prediction.hpp"
#include "tsdantzig/process_sim.hpp"
#include "tsdantzig/random.hpp"
#include "tsdantzig/rates.hpp"
#include "tsdantzig/tuning.hpp"

namespace tsdantzig::cli {

namespace {

constexpr std::uint64_t kModelStream = 0x6d6f64656c;
constexpr std::uint64_t kThetaStream = 0x7468657461;
constexpr std::uint64_t kDataStream = 0x64617461;

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

template <typename Fn>
auto keyed(const char* key, Fn&& fn) {
  try {
    return fn();
  } catch (const tsdantzig::InvalidArgument& e) {
    throw ConfigError(key, e.what());
  }
}

LinearProcessModel model_from_config(const Json& c) {
  ModelOptions options;
  options.truncation = get_count(c, "truncation");
  options.innovation = keyed("innovation", [&] { return parse_innovation(get_string(c, "innovation")); });
  if (c.contains("c0")) options.c0 = get_number(c, "c0");
  const std::size_t p = get_count(c, "p");
  const double beta = get_number(c, "beta");
  const double frac = get_number(c, "sparsify_frac");
  if (!(frac >= 0.0 && frac <= 1.0)) throw ConfigError("sparsify_frac", "must lie in [0, 1]");
  if (!(beta > 0.5)) throw ConfigError("beta", "must exceed 1/2");
  if (p < 1) throw ConfigError("p", "must be >= 1");
  if (options.truncation < 1) throw ConfigError("truncation", "must be >= 1");
  return build_model(p, beta, frac, derive_seed(get_seed(c), kModelStream), options);
}

LambdaGrid grid_from(const Json& c, const char* key) {
  const auto spec = get_numbers(c, key);
  if (spec.size() != 3 || spec[2] < 1 || spec[2] != std::floor(spec[2]))
    throw ConfigError(key, "expected [lo, hi, points]");
  return keyed(key, [&] { return LambdaGrid::linear(spec[0], spec[1], static_cast<std::size_t>(spec[2])); });
}

Table run_simulate(const Json& c, std::ostream& log) {
  const LinearProcessModel model = model_from_config(c);
  const std::size_t n = get_count(c, "n");
  if (n < 1) throw ConfigError("n", "must be >= 1");
  const SampleMatrix x = simulate(model, n, derive_seed(get_seed(c), kDataStream));
  const std::string model_out = get_string(c, "model_out");
  if (!model_out.empty()) {
    std::ofstream out(model_out, std::ios::binary | std::ios::trunc);
    if (!out) throw tsdantzig::Error("cannot open '" + model_out + "' for writing");
    out << model_to_json(model) << "\n";
  }
  Table t;
  for (std::size_t j = 0; j < x.p(); ++j) t.columns.push_back("x" + std::to_string(j + 1));
  for (std::size_t i = 0; i < x.n(); ++i) {
    std::vector<Cell> row;
    for (double v : x.data.row(i)) row.emplace_back(v);
    t.add_row(std::move(row));
  }
  log << "simulated n=" << n << " p=" << x.p() << " M=" << model.truncation() << "\n";
  return t;
}

Table run_estimate(const Json& c, std::size_t workers, std::ostream& log) {
  DantzigConfig config;
  config.lambda = get_number(c, "lambda");
  config.lp_tol = get_number(c, "lp_tol");
  keyed("lambda", [&] { config.validate(); return 0; });
  const MeanMode mode = keyed("mean_mode", [&] { return parse_mean_mode(get_string(c, "mean_mode")); });
  const std::string data = get_string(c, "data");
  const std::string cov = get_string(c, "covariance");

  if (!data.empty() || !cov.empty()) {
    if (!data.empty() && !cov.empty()) throw ConfigError("covariance", "give either data or covariance, not both");
    DenseMatrix s;
    Vector b = get_numbers(c, "b");
    if (!data.empty()) {
      const SampleMatrix x = keyed("data", [&] { return read_numeric_csv(data); });
      if (mode == MeanMode::known_mu) throw ConfigError("mean_mode", "known_mu needs a mean; use known_zero or estimated");
      s = keyed("data", [&] { return sample_covariance(x, mode).matrix; });
      if (b.empty()) b = x.column_means();
    } else {
      s = keyed("covariance", [&] { return read_numeric_csv(cov).data; });
      if (!s.square()) throw ConfigError("covariance", "matrix must be square");
      if (b.empty()) throw ConfigError("b", "required with a covariance file");
    }
    if (b.size() != s.rows()) throw ConfigError("b", "length differs from the dimension of S");
    const FunctionalEstimate est = estimate_functional(s, b, config);
    if (est.status == EstimateStatus::infeasible)
      throw InfeasibleError("no feasible theta at lambda = " + format_number(config.lambda) + "; increase lambda");
    if (!est.ok()) throw NumericalError("LP solver stopped before reaching an optimum");
    Table t;
    t.columns = {"j", "theta_hat"};
    for (std::size_t j = 0; j < est.theta_hat.size(); ++j) t.add_row({as_int(j + 1), est.theta_hat[j]});
    log << "lambda=" << format_number(config.lambda) << " l1_norm=" << format_number(est.l1_norm)
        << " band_residual=" << format_number(est.band_residual) << " lp_iterations=" << est.lp_iterations << "\n";
    return t;
  }

  const LinearProcessModel model = model_from_config(c);
  const ProcessSimulator simulator(model);
  const DenseMatrix sigma = true_autocovariance(model, 0);
  const std::size_t n = get_count(c, "n");
  const std::size_t reps = get_count(c, "replicates");
  const double zero_frac = get_number(c, "theta_zero_frac");
  if (n < 2) throw ConfigError("n", "must be >= 2");
  if (reps < 1) throw ConfigError("replicates", "must be >= 1");
  if (!(zero_frac >= 0.0 && zero_frac < 1.0)) throw ConfigError("theta_zero_frac", "must lie in [0, 1)");
  const std::uint64_t seed = get_seed(c);
  const double w_list[] = {1.0, 2.0, kInfNorm};

  std::vector<FunctionalEstimate> fits(reps);
  std::vector<Vector> thetas(reps);
  parallel_for(reps, workers, [&](std::size_t r) {
    thetas[r] = draw_sparse_theta(model.p, zero_frac, derive_seed(seed, kThetaStream, r));
    const Vector b = multiply(sigma, thetas[r]);
    const SampleMatrix x = simulator(n, derive_seed(seed, kDataStream, r));
    fits[r] = estimate_functional(sample_covariance(x, mode).matrix, b, config);
  });
  Table t;
  t.columns = {"replicate", "lambda", "status", "l1_norm", "err_l1", "err_l2", "err_inf", "lp_iterations"};
  std::size_t ok = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto& f = fits[r];
    Vector err(3, std::nan(""));
    if (f.ok()) {
      err = error_norms(f.theta_hat, thetas[r], w_list);
      ++ok;
    }
    t.add_row({as_int(r), config.lambda, std::string(to_string(f.status)), f.ok() ? f.l1_norm : std::nan(""), err[0],
               err[1], err[2], as_int(f.lp_iterations)});
  }
  log << ok << " of " << reps << " replicates feasible at lambda=" << format_number(config.lambda) << "\n";
  return t;
}

Table run_tune(const Json& c, std::size_t workers, std::ostream& log) {
  TuningExperimentConfig e;
  e.p = get_count(c, "p");
  e.n = get_count(c, "n");
  e.beta = get_number(c, "beta");
  e.innovation = keyed("innovation", [&] { return parse_innovation(get_string(c, "innovation")); });
  e.sparsify_frac = get_number(c, "sparsify_frac");
  e.truncation = get_count(c, "truncation");
  e.theta_zero_frac = get_number(c, "theta_zero_frac");
  e.replicates = get_count(c, "replicates");
  e.seed = get_seed(c);
  e.grid_points = get_count(c, "grid_points");
  e.grid_lo = get_number(c, "grid_lo");
  e.grid_hi = get_number(c, "grid_hi");
  e.mean_mode = keyed("mean_mode", [&] { return parse_mean_mode(get_string(c, "mean_mode")); });
  if (e.mean_mode == MeanMode::known_mu) throw ConfigError("mean_mode", "use known_zero or estimated");
  e.lp_tol = get_number(c, "lp_tol");
  e.workers = workers;
  if (!std::isfinite(e.beta)) throw ConfigError("beta", "tuning needs a finite beta");
  keyed("replicates", [&] { e.validate(); return 0; });

  const auto reps = run_tuning_experiment(e);
  Table t;
  t.columns = {"replicate", "lambda_oracle", "loss_oracle", "lambda_block", "loss_block", "min_l2_error",
               "lambda_min_l2", "infeasible_points"};
  double oracle = 0.0;
  double block = 0.0;
  for (const auto& r : reps) {
    t.add_row({as_int(r.replicate), r.lambda_oracle, r.loss_oracle, r.lambda_block, r.loss_block, r.min_l2_error,
               r.lambda_min_l2, as_int(r.infeasible_points)});
    oracle += r.lambda_oracle;
    block += r.lambda_block;
  }
  const double count = static_cast<double>(reps.size());
  log << "mean lambda: oracle=" << format_number(oracle / count) << " block=" << format_number(block / count) << "\n";
  return t;
}

Table run_predict(const Json& c, std::size_t workers, std::ostream& log) {
  const std::string name = get_string(c, "model");
  PredictionModel model;
  if (name == "ar1") {
    model = ARModel::ar1(get_number(c, "ar_theta"), get_number(c, "noise_sd"));
  } else if (name == "ar14") {
    ARModel ar = ARModel::ar14();
    ar.noise_sd = get_number(c, "noise_sd");
    model = ar;
  } else if (name == "linear") {
    ModelOptions options;
    options.truncation = get_count(c, "truncation");
    const double beta = get_number(c, "beta");
    if (!(beta > 0.5) || !std::isfinite(beta)) throw ConfigError("beta", "must be finite and exceed 1/2");
    model = build_model(1, beta, 0.0, derive_seed(get_seed(c), kModelStream), options);
  } else {
    throw ConfigError("model", "expected ar1, ar14 or linear");
  }
  if (const auto* ar = std::get_if<ARModel>(&model); ar != nullptr && !(ar->noise_sd > 0.0))
    throw ConfigError("noise_sd", "must be positive");

  RelativeRiskConfig r;
  r.n = get_count(c, "n");
  r.replicates = get_count(c, "replicates");
  r.seed = get_seed(c);
  r.methods.clear();
  for (const auto& m : get_strings(c, "methods"))
    r.methods.push_back(keyed("methods", [&] { return parse_predictor_method(m); }));
  if (r.methods.empty()) throw ConfigError("methods", "at least one method is required");
  const double scale = get_number(c, "lambda_scale");
  if (!(scale >= 0.0)) throw ConfigError("lambda_scale", "must be >= 0");
  if (r.n < 20) throw ConfigError("n", "must be >= 20");
  r.lambda = scale * std::sqrt(std::log(static_cast<double>(r.n)) / static_cast<double>(r.n));
  r.bandwidth_rule.c_thr = get_number(c, "bandwidth_c_thr");
  r.max_order = get_count(c, "max_order");
  if (r.max_order > 0 && 2 * r.max_order >= r.n) throw ConfigError("max_order", "must be below n / 2");
  r.workers = workers;

  const auto reports = keyed("replicates", [&] { return relative_risk_experiment(model, r); });
  Table t;
  t.columns = {"method", "n", "mean_relative_risk", "std_error", "failures", "replicates", "oracle_risk"};
  for (const auto& rep : reports) {
    t.add_row({std::string(to_string(rep.method)), as_int(rep.n), rep.relative_risk, rep.std_error,
               as_int(rep.failures), as_int(rep.replicates), rep.oracle_risk});
    log << to_string(rep.method) << ": relative risk " << format_number(rep.relative_risk) << " ("
        << format_number(rep.std_error) << "), failures " << rep.failures << "\n";
  }
  return t;
}

Table run_portfolio(const Json& c, std::size_t workers, std::ostream& log) {
  BacktestConfig b;
  b.window = get_count(c, "window");
  b.hold = get_count(c, "hold");
  b.K = get_count(c, "K");
  b.n_train = get_count(c, "n_train");
  b.n_test = get_count(c, "n_test");
  b.m = get_number(c, "m");
  b.dantzig_grid = grid_from(c, "dantzig_grid");
  b.ridge_grid = grid_from(c, "ridge_grid");
  b.workers = workers;
  keyed("window", [&] { b.validate(); return 0; });

  SampleMatrix returns;
  const std::string path = get_string(c, "returns_csv");
  if (!path.empty()) {
    returns = keyed("returns_csv", [&] { return read_returns_csv(path).returns; });
    log << "loaded " << returns.n() << " days x " << returns.p() << " assets\n";
  } else {
    const std::string kind = get_string(c, "market");
    const std::uint64_t market_seed = derive_seed(get_seed(c), kModelStream);
    SparseMarket market;
    if (kind == "factor") {
      FactorMarketSpec spec;
      spec.p = get_count(c, "p");
      spec.factors = get_count(c, "factors");
      spec.loading_sd = get_number(c, "loading_sd");
      spec.idio_log_spread = get_number(c, "idio_log_spread");
      spec.priced = get_count(c, "active");
      spec.signal_lo = get_number(c, "signal_lo");
      spec.signal_hi = get_number(c, "signal_hi");
      spec.m = b.m;
      market = keyed("p", [&] { return make_factor_market(spec, market_seed); });
    } else if (kind == "toeplitz") {
      SparseMarketSpec spec;
      spec.p = get_count(c, "p");
      spec.active = get_count(c, "active");
      spec.rho = get_number(c, "rho");
      spec.volatility = get_number(c, "volatility");
      spec.signal_lo = get_number(c, "signal_lo");
      spec.signal_hi = get_number(c, "signal_hi");
      spec.m = b.m;
      market = keyed("p", [&] { return make_sparse_market(spec, market_seed); });
    } else {
      throw ConfigError("market", "expected factor or toeplitz");
    }
    returns = market.sample(get_count(c, "n_days"), derive_seed(get_seed(c), kDataStream));
  }

  Table t;
  t.columns = {"window_start", "method", "lambda", "return", "risk", "information_ratio", "skipped"};
  for (const auto& name : get_strings(c, "methods")) {
    const PortfolioMethod method = keyed("methods", [&] { return parse_portfolio_method(name); });
    const BacktestReport report = keyed("n_days", [&] { return backtest_information_ratio(returns, b, method); });
    const std::string tag(to_string(method));
    for (const auto& w : report.windows)
      t.add_row({std::to_string(w.start), tag, report.lambda_selected, w.skipped ? std::nan("") : w.period_return,
                 w.skipped ? std::nan("") : w.risk, report.information_ratio, as_int(w.skipped ? 1 : 0)});
    t.add_row({std::string("summary"), tag, report.lambda_selected, report.mean_return, report.risk,
               report.information_ratio, as_int(report.skipped_windows)});
    log << tag << ": lambda=" << format_number(report.lambda_selected)
        << " IR=" << format_number(report.information_ratio) << " mean_return=" << format_number(report.mean_return)
        << " risk=" << format_number(report.risk) << " skipped=" << report.skipped_windows << "\n";
  }
  return t;
}

struct ClassifyInput {
  SampleMatrix train_P;
  SampleMatrix train_S;
  SampleMatrix test;
  std::vector<Label> labels;
};

ClassifyInput load_labeled(const std::string& train_path, const std::string& test_path) {
  const LabeledData train = keyed("train_csv", [&] { return read_labeled_csv(train_path); });
  const LabeledData test = keyed("test_csv", [&] { return read_labeled_csv(test_path); });
  if (train.data.p() != test.data.p()) throw ConfigError("test_csv", "feature count differs from train_csv");
  ClassifyInput in;
  std::size_t n_p = 0;
  for (Label l : train.labels) n_p += l == Label::P ? 1 : 0;
  in.train_P.data = DenseMatrix(n_p, train.data.p());
  in.train_S.data = DenseMatrix(train.labels.size() - n_p, train.data.p());
  std::size_t ip = 0;
  std::size_t is = 0;
  for (std::size_t i = 0; i < train.labels.size(); ++i) {
    const auto src = train.data.data.row(i);
    auto dst = train.labels[i] == Label::P ? in.train_P.data.row(ip++) : in.train_S.data.row(is++);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  in.test = test.data;
  in.labels = test.labels;
  return in;
}

Table run_classify(const Json& c, std::size_t workers, std::ostream& log) {
  const std::size_t window = get_count(c, "window");
  if (window < 1) throw ConfigError("window", "must be >= 1");
  const std::size_t grid_points = get_count(c, "grid_points");
  const double grid_lo = get_number(c, "grid_lo");
  const double grid_hi = get_number(c, "grid_hi");
  if (grid_points < 1 || !(grid_lo > 0.0) || !(grid_hi > grid_lo))
    throw ConfigError("grid_points", "need grid_points >= 1 and 0 < grid_lo < grid_hi");
  RldaOptions options;
  options.standardize = get_bool(c, "standardize");
  std::vector<RldaMode> modes;
  for (const auto& m : get_strings(c, "modes")) modes.push_back(keyed("modes", [&] { return parse_rlda_mode(m); }));
  if (modes.empty()) throw ConfigError("modes", "at least one mode is required");

  const std::string train_path = get_string(c, "train_csv");
  const std::string test_path = get_string(c, "test_csv");
  const bool from_files = !train_path.empty() || !test_path.empty();
  if (from_files && (train_path.empty() || test_path.empty()))
    throw ConfigError(train_path.empty() ? "train_csv" : "test_csv", "train_csv and test_csv go together");

  BlockDesignSpec spec;
  spec.p = get_count(c, "p");
  spec.block_len = get_count(c, "block_len");
  spec.train_blocks = get_count(c, "train_blocks");
  spec.test_blocks = get_count(c, "test_blocks");
  spec.active = get_count(c, "active");
  spec.signal = get_number(c, "signal");
  spec.rho = get_number(c, "rho");
  spec.beta = get_number(c, "beta");
  spec.truncation = get_count(c, "truncation");
  const std::size_t seeds = from_files ? 1 : get_count(c, "seeds");
  if (seeds < 1) throw ConfigError("seeds", "must be >= 1");

  struct Row {
    double lambda = 0.0;
    ClassificationReport report;
  };
  std::vector<std::vector<Row>> results(seeds, std::vector<Row>(modes.size()));
  parallel_for(seeds, workers, [&](std::size_t s) {
    ClassifyInput in;
    if (from_files) {
      in = load_labeled(train_path, test_path);
    } else {
      BlockDesign d = keyed("p", [&] { return make_block_design(spec, derive_seed(get_seed(c), kDataStream, s)); });
      in = ClassifyInput{std::move(d.train_P), std::move(d.train_S), std::move(d.test), std::move(d.test_labels)};
    }
    const Vector b = subtract(in.train_P.column_means(), in.train_S.column_means());
    const double scale = norm_inf(b);
    for (std::size_t k = 0; k < modes.size(); ++k) {
      Row& row = results[s][k];
      if (modes[k] == RldaMode::functional) {
        if (!(scale > 0.0)) throw NumericalError("classify: class means coincide");
        const LambdaGrid grid = LambdaGrid::log_spaced(grid_lo * scale, grid_hi * scale, grid_points);
        row.lambda = select_rlda_lambda(in.train_P, in.train_S, grid, window, options);
      }
      const RLDAModel model = fit_rlda(in.train_P, in.train_S, row.lambda, modes[k], options);
      row.report = keyed("window", [&] { return evaluate_accuracy(model, in.test, in.labels, window); });
    }
  });

  Table t;
  t.columns = {"seed", "mode", "lambda", "accuracy", "windows", "true_P", "false_S", "false_P", "true_S"};
  std::vector<double> mean(modes.size(), 0.0);
  for (std::size_t s = 0; s < seeds; ++s)
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const auto& r = results[s][k];
      const auto& cm = r.report.confusion;
      t.add_row({as_int(s), std::string(to_string(modes[k])), r.lambda, r.report.accuracy, as_int(r.report.total),
                 as_int(cm[0][0]), as_int(cm[0][1]), as_int(cm[1][0]), as_int(cm[1][1])});
      mean[k] += r.report.accuracy / static_cast<double>(seeds);
    }
  for (std::size_t k = 0; k < modes.size(); ++k)
    log << to_string(modes[k]) << ": mean accuracy " << format_number(mean[k]) << "\n";
  return t;
}

Table run_rates(const Json& c, std::ostream& log) {
  RateSpec spec;
  spec.regime = keyed("regime", [&] { return parse_tail_regime(get_string(c, "regime")); });
  spec.alpha = get_number(c, "alpha");
  spec.q = get_number(c, "q");
  spec.beta = get_number(c, "beta");
  spec.n = get_number(c, "n");
  spec.p = get_number(c, "p");
  spec.r_b = get_number(c, "r_b");
  const RateTerms terms = keyed("beta", [&] { return rate_terms(spec); });
  const double j = theoretical_rate_J(spec);
  const double lambda =
      keyed("c1", [&] { return recommend_lambda(spec, get_number(c, "theta_l1_bound"), get_number(c, "c1")); });
  Table t;
  t.columns = {"regime", "beta", "n", "p", "J", "u1", "u2", "u5", "u6", "lambda"};
  t.add_row({std::string(to_string(spec.regime)), spec.beta, spec.n, spec.p, j, terms.u1, terms.u2, terms.u5, terms.u6,
             lambda});
  (void)log;
  return t;
}

}  // namespace

Table run_command(std::string_view command, const Json& config, std::size_t workers, std::ostream& log) {
  if (command == "simulate") return run_simulate(config, log);
  if (command == "estimate") return run_estimate(config, workers, log);
  if (command == "tune") return run_tune(config, workers, log);
  if (command == "predict") return run_predict(config, workers, log);
  if (command == "portfolio") return run_portfolio(config, workers, log);
  if (command == "classify") return run_classify(config, workers, log);
  if (command == "rates") return run_rates(config, log);
  throw ConfigError("command", "unknown subcommand '" + std::string(command) + "'");
}

}  // namespace tsdantzig::cli
