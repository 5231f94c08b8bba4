#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "tsdantzig/functional_est.hpp"
#include "tsdantzig/process_sim.hpp"
#include "tsdantzig/tuning.hpp"

namespace tsdantzig {

enum class RldaMode { functional, gnb };
enum class Label { P, S };

std::string_view to_string(RldaMode mode) noexcept;
RldaMode parse_rlda_mode(std::string_view name);
std::string_view to_string(Label label) noexcept;
Label parse_label(std::string_view name);

struct RLDAModel {
  Vector mu_P;
  Vector mu_S;
  /// Estimate of Sigma^{-1} (mu_P - mu_S).
  Vector direction;
  /// log(n_S / n_P).
  double log_prior = 0.0;
  RldaMode mode = RldaMode::functional;
  /// Training standard deviations when the inputs were standardized, else empty.
  Vector scale;
};

struct RldaOptions {
  /// Rescale every feature to unit training variance before fitting.
  bool standardize = false;
  DantzigConfig lp;
};

/// Pooled covariance of the class-centered training rows with divisor
/// n_P + n_S. Functional mode takes the Dantzig estimate of Sigma^{-1} b with
/// b = mu_P - mu_S; gnb mode divides b by the pooled variances.
RLDAModel fit_rlda(const SampleMatrix& train_P, const SampleMatrix& train_S, double lambda, RldaMode mode,
                   const RldaOptions& options = {});

/// Pooled within-class covariance used by fit_rlda.
DenseMatrix pooled_covariance(const SampleMatrix& train_P, const SampleMatrix& train_S);

struct Classification {
  Label label = Label::P;
  double score = 0.0;
};

/// score = -(z - (mu_P + mu_S) / 2)^T direction + log_prior; P iff score <= 0.
Classification classify_score(const RLDAModel& model, std::span<const double> z);

struct ClassificationReport {
  double accuracy = 0.0;
  /// confusion[truth][predicted], index 0 = P, 1 = S.
  std::array<std::array<std::size_t, 2>, 2> confusion{};
  std::size_t total = 0;
};

/// Averages consecutive blocks of `window` rows into one observation each and
/// classifies it. `labels` has one entry per row and must be constant within
/// every block; n must be a multiple of `window`.
ClassificationReport evaluate_accuracy(const RLDAModel& model, const SampleMatrix& test, std::span<const Label> labels,
                                       std::size_t window);

/// Holds out the last third (in whole windows) of each class, fits the
/// functional mode on the rest for every grid point and returns the lambda
/// with the best windowed hold-out accuracy, ties going to the larger lambda.
/// Infeasible grid points are skipped.
double select_rlda_lambda(const SampleMatrix& train_P, const SampleMatrix& train_S, const LambdaGrid& grid,
                          std::size_t window, const RldaOptions& options = {});

/// Alternating P/S blocks over a common stationary noise process.
struct BlockDesignSpec {
  std::size_t p = 100;
  std::size_t block_len = 16;
  std::size_t train_blocks = 20;
  std::size_t test_blocks = 20;
  /// Coordinates where mu_P and mu_S differ.
  std::size_t active = 5;
  /// mu_P = +signal/2 and mu_S = -signal/2 on the active coordinates.
  double signal = 0.5;
  /// Cross-sectional correlation rho^{|j-k|} of the innovations.
  double rho = 0.8;
  /// Temporal decay index of the noise process.
  double beta = 2.0;
  std::size_t truncation = 50;
};

struct BlockDesign {
  SampleMatrix train_P;
  SampleMatrix train_S;
  SampleMatrix test;
  std::vector<Label> test_labels;
  Vector mu_P;
  Vector mu_S;
};

/// Noise x_i = sum_m (1 v m)^{-beta} L xi_{i-m} with L L^T the AR(1)-type
/// correlation matrix; both classes share it and only the means differ.
BlockDesign make_block_design(const BlockDesignSpec& spec, std::uint64_t seed);

}  // namespace tsdantzig
