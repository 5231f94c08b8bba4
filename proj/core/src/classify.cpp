#include "tsdantzig/classify.hpp"

#include <cmath>
#include <string>

#include "tsdantzig/error.hpp"
#include "tsdantzig/linalg.hpp"

namespace tsdantzig {

std::string_view to_string(RldaMode mode) noexcept { return mode == RldaMode::functional ? "functional" : "gnb"; }

RldaMode parse_rlda_mode(std::string_view name) {
  if (name == "functional") return RldaMode::functional;
  if (name == "gnb") return RldaMode::gnb;
  throw InvalidArgument("unknown RLDA mode '" + std::string(name) + "'");
}

std::string_view to_string(Label label) noexcept { return label == Label::P ? "P" : "S"; }

Label parse_label(std::string_view name) {
  if (name == "P" || name == "p" || name == "0") return Label::P;
  if (name == "S" || name == "s" || name == "1") return Label::S;
  throw InvalidArgument("unknown class label '" + std::string(name) + "'");
}

DenseMatrix pooled_covariance(const SampleMatrix& train_P, const SampleMatrix& train_S) {
  if (train_P.n() == 0 || train_S.n() == 0) throw InvalidArgument("pooled_covariance: both classes need rows");
  if (train_P.p() != train_S.p()) throw InvalidArgument("pooled_covariance: classes differ in dimension");
  const std::size_t p = train_P.p();
  DenseMatrix s(p, p);
  Vector r(p);
  for (const SampleMatrix* cls : {&train_P, &train_S}) {
    const Vector mean = cls->column_means();
    for (std::size_t i = 0; i < cls->n(); ++i) {
      const auto row = cls->data.row(i);
      for (std::size_t j = 0; j < p; ++j) r[j] = row[j] - mean[j];
      for (std::size_t j = 0; j < p; ++j) {
        auto out = s.row(j);
        for (std::size_t k = j; k < p; ++k) out[k] += r[j] * r[k];
      }
    }
  }
  const double inv_n = 1.0 / static_cast<double>(train_P.n() + train_S.n());
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = j; k < p; ++k) {
      s(j, k) *= inv_n;
      s(k, j) = s(j, k);
    }
  }
  return s;
}

RLDAModel fit_rlda(const SampleMatrix& train_P, const SampleMatrix& train_S, double lambda, RldaMode mode,
                   const RldaOptions& options) {
  DenseMatrix s = pooled_covariance(train_P, train_S);
  const std::size_t p = s.rows();
  RLDAModel model;
  model.mode = mode;
  model.mu_P = train_P.column_means();
  model.mu_S = train_S.column_means();
  model.log_prior = std::log(static_cast<double>(train_S.n()) / static_cast<double>(train_P.n()));
  Vector b = subtract(model.mu_P, model.mu_S);

  if (options.standardize) {
    model.scale.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
      if (!(s(j, j) > 0.0)) throw NumericalError("fit_rlda: feature " + std::to_string(j) + " has zero variance");
      model.scale[j] = std::sqrt(s(j, j));
    }
    for (std::size_t j = 0; j < p; ++j) {
      b[j] /= model.scale[j];
      for (std::size_t k = 0; k < p; ++k) s(j, k) /= model.scale[j] * model.scale[k];
    }
  }

  if (mode == RldaMode::gnb) {
    model.direction.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
      if (!(s(j, j) > 0.0)) throw NumericalError("fit_rlda: feature " + std::to_string(j) + " has zero variance");
      model.direction[j] = b[j] / s(j, j);
    }
  } else {
    DantzigConfig config = options.lp;
    config.lambda = lambda;
    FunctionalEstimate est = estimate_functional(s, b, config);
    if (est.status == EstimateStatus::infeasible)
      throw InfeasibleError("fit_rlda: no feasible direction at lambda = " + std::to_string(lambda));
    if (!est.ok()) throw NumericalError("fit_rlda: LP solver did not reach an optimum");
    model.direction = std::move(est.theta_hat);
  }
  // Fold the standardization into the direction so scoring works on raw inputs.
  if (options.standardize)
    for (std::size_t j = 0; j < p; ++j) model.direction[j] /= model.scale[j];
  return model;
}

Classification classify_score(const RLDAModel& model, std::span<const double> z) {
  const std::size_t p = model.direction.size();
  if (z.size() != p || model.mu_P.size() != p || model.mu_S.size() != p)
    throw InvalidArgument("classify_score: dimension mismatch");
  double proj = 0.0;
  for (std::size_t j = 0; j < p; ++j) proj += (z[j] - 0.5 * (model.mu_P[j] + model.mu_S[j])) * model.direction[j];
  Classification out;
  out.score = -proj + model.log_prior;
  out.label = out.score <= 0.0 ? Label::P : Label::S;
  return out;
}

ClassificationReport evaluate_accuracy(const RLDAModel& model, const SampleMatrix& test, std::span<const Label> labels,
                                       std::size_t window) {
  if (window == 0) throw InvalidArgument("evaluate_accuracy: window must be >= 1");
  if (labels.size() != test.n()) throw InvalidArgument("evaluate_accuracy: one label per test row is required");
  if (test.n() == 0 || test.n() % window != 0)
    throw InvalidArgument("evaluate_accuracy: test rows are not a positive multiple of the window");
  const std::size_t p = test.p();
  ClassificationReport report;
  Vector avg(p);
  std::size_t correct = 0;
  for (std::size_t start = 0; start < test.n(); start += window) {
    const Label truth = labels[start];
    std::fill(avg.begin(), avg.end(), 0.0);
    for (std::size_t i = start; i < start + window; ++i) {
      if (labels[i] != truth)
        throw InvalidArgument("evaluate_accuracy: labels change inside the block starting at row " +
                              std::to_string(start));
      const auto row = test.data.row(i);
      for (std::size_t j = 0; j < p; ++j) avg[j] += row[j];
    }
    for (double& v : avg) v /= static_cast<double>(window);
    const Label predicted = classify_score(model, avg).label;
    ++report.confusion[truth == Label::P ? 0 : 1][predicted == Label::P ? 0 : 1];
    if (predicted == truth) ++correct;
    ++report.total;
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(report.total);
  return report;
}

double select_rlda_lambda(const SampleMatrix& train_P, const SampleMatrix& train_S, const LambdaGrid& grid,
                          std::size_t window, const RldaOptions& options) {
  grid.validate();
  if (window == 0) throw InvalidArgument("select_rlda_lambda: window must be >= 1");
  auto holdout_rows = [&](const SampleMatrix& cls) {
    const std::size_t windows = cls.n() / window;
    if (windows < 2) throw InvalidArgument("select_rlda_lambda: each class needs at least two windows of rows");
    return std::max<std::size_t>(1, windows / 3) * window;
  };
  const std::size_t hold_p = holdout_rows(train_P);
  const std::size_t hold_s = holdout_rows(train_S);
  const SampleMatrix fit_p = train_P.slice(0, train_P.n() - hold_p);
  const SampleMatrix fit_s = train_S.slice(0, train_S.n() - hold_s);

  SampleMatrix holdout{DenseMatrix(hold_p + hold_s, train_P.p())};
  std::vector<Label> labels;
  for (std::size_t i = 0; i < hold_p; ++i) {
    const auto src = train_P.data.row(train_P.n() - hold_p + i);
    std::copy(src.begin(), src.end(), holdout.data.row(i).begin());
    labels.push_back(Label::P);
  }
  for (std::size_t i = 0; i < hold_s; ++i) {
    const auto src = train_S.data.row(train_S.n() - hold_s + i);
    std::copy(src.begin(), src.end(), holdout.data.row(hold_p + i).begin());
    labels.push_back(Label::S);
  }

  std::size_t best = grid.size();
  double best_accuracy = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    RLDAModel model;
    try {
      model = fit_rlda(fit_p, fit_s, grid.values[i], RldaMode::functional, options);
    } catch (const NumericalError&) {
      continue;
    }
    const double accuracy = evaluate_accuracy(model, holdout, labels, window).accuracy;
    if (accuracy >= best_accuracy) {
      best_accuracy = accuracy;
      best = i;
    }
  }
  if (best == grid.size()) throw InfeasibleError("select_rlda_lambda: no feasible lambda on the grid");
  return grid.values[best];
}

BlockDesign make_block_design(const BlockDesignSpec& spec, std::uint64_t seed) {
  if (spec.p < 1 || spec.active > spec.p) throw InvalidArgument("make_block_design: need active <= p");
  if (spec.block_len < 1 || spec.train_blocks < 2 || spec.test_blocks < 1)
    throw InvalidArgument("make_block_design: need block_len >= 1, train_blocks >= 2, test_blocks >= 1");
  if (!(std::abs(spec.rho) < 1.0)) throw InvalidArgument("make_block_design: |rho| must be < 1");
  const std::size_t p = spec.p;

  DenseMatrix corr(p, p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t k = 0; k < p; ++k) corr(j, k) = std::pow(spec.rho, static_cast<double>(j > k ? j - k : k - j));
  const DenseMatrix chol = cholesky_lower(corr);

  LinearProcessModel model;
  model.p = p;
  model.beta = spec.beta;
  model.innovation = Innovation::gaussian;
  model.mean.assign(p, 0.0);
  for (std::size_t m = 0; m <= std::max<std::size_t>(spec.truncation, 1); ++m)
    model.coefficients.push_back(chol * std::pow(static_cast<double>(std::max<std::size_t>(m, 1)), -spec.beta));
  model.c0 = model.effective_c0();
  model.seed = seed;

  const std::size_t blocks = spec.train_blocks + spec.test_blocks;
  const SampleMatrix noise = simulate(model, blocks * spec.block_len, derive_seed(seed, 0x626c6b, 0));

  BlockDesign design;
  design.mu_P.assign(p, 0.0);
  design.mu_S.assign(p, 0.0);
  Rng rng(derive_seed(seed, 0x6d6561, 0));
  std::vector<std::size_t> index(p);
  for (std::size_t j = 0; j < p; ++j) index[j] = j;
  for (std::size_t j = 0; j < spec.active; ++j) {
    std::uniform_int_distribution<std::size_t> pick(j, p - 1);
    std::swap(index[j], index[pick(rng)]);
    design.mu_P[index[j]] = 0.5 * spec.signal;
    design.mu_S[index[j]] = -0.5 * spec.signal;
  }

  const std::size_t train_rows = spec.train_blocks * spec.block_len;
  const std::size_t p_blocks = (spec.train_blocks + 1) / 2;
  design.train_P.data = DenseMatrix(p_blocks * spec.block_len, p);
  design.train_S.data = DenseMatrix((spec.train_blocks - p_blocks) * spec.block_len, p);
  design.test.data = DenseMatrix(spec.test_blocks * spec.block_len, p);
  std::size_t next_p = 0;
  std::size_t next_s = 0;
  for (std::size_t i = 0; i < noise.n(); ++i) {
    const std::size_t block = i / spec.block_len;
    const Label label = block % 2 == 0 ? Label::P : Label::S;
    const Vector& mean = label == Label::P ? design.mu_P : design.mu_S;
    std::span<double> out;
    if (i < train_rows) {
      out = label == Label::P ? design.train_P.data.row(next_p++) : design.train_S.data.row(next_s++);
    } else {
      out = design.test.data.row(i - train_rows);
      design.test_labels.push_back(label);
    }
    const auto src = noise.data.row(i);
    for (std::size_t j = 0; j < p; ++j) out[j] = src[j] + mean[j];
  }
  return design;
}

}  // namespace tsdantzig
