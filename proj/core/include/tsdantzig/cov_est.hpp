#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>

#include "tsdantzig/dense_matrix.hpp"
#include "tsdantzig/process_sim.hpp"

namespace tsdantzig {

enum class MeanMode { known_zero, known_mu, estimated };

std::string_view to_string(MeanMode mode) noexcept;
MeanMode parse_mean_mode(std::string_view name);

struct CovarianceEstimate {
  DenseMatrix matrix;
  MeanMode mean_mode = MeanMode::estimated;
  std::size_t n = 0;
};

/// n^{-1} sum_i (x_i - c)(x_i - c)^T with c = 0, the supplied mu, or the
/// sample mean depending on `mode`. The result is exactly symmetric.
CovarianceEstimate sample_covariance(const SampleMatrix& x, MeanMode mode, std::span<const double> mu = {});

/// n^{-1} sum_{t=1}^{n-|s|} X_t X_{t+|s|}: no centering, divisor n.
double sample_autocovariance(std::span<const double> x, std::ptrdiff_t lag);

/// Flat-top lag window: kappa(x) = 1 for |x| <= 1, g(|x|) on (1, c], 0 beyond c.
struct TaperSpec {
  std::size_t l = 1;
  double c = 2.0;
  /// Defaults to the trapezoid g(x) = 2 - x when empty (only valid with c = 2).
  std::function<double(double)> g;

  double kappa(double x) const;
  void validate() const;

  static TaperSpec trapezoid(std::size_t bandwidth) { return TaperSpec{bandwidth, 2.0, {}}; }
};

/// Tapered autocovariances gamma_hat_0 .. gamma_hat_{n-1}; the n x n matrix
/// (gamma_hat_{|j-k|}) is only materialized on request.
struct ToeplitzAutocov {
  Vector gamma_hat;

  std::size_t n() const noexcept { return gamma_hat.size(); }
  double at(std::ptrdiff_t lag) const noexcept;
  DenseMatrix assemble() const;
  /// (gamma_hat_1, ..., gamma_hat_n); the lag-n entry lies beyond the data and is 0.
  Vector shifted() const;
};

/// gamma_hat_s = kappa(|s| / l) * gamma_breve_s.
ToeplitzAutocov flat_top_autocov_matrix(std::span<const double> x, const TaperSpec& taper);

/// Constants of the empirical bandwidth rule.
struct BandwidthRule {
  double c_thr = 2.0;
  std::size_t min_lags = 5;
};

/// Smallest l >= 1 such that |rho(l+k)| < c_thr sqrt(log10(n)/n) for
/// k = 1..K_n, K_n = max(min_lags, ceil(sqrt(log10 n))), capped at floor(n/4).
/// Autocorrelations come from sample_autocovariance; an all-zero series has
/// all autocorrelations defined as 0.
std::size_t select_bandwidth(std::span<const double> x, const BandwidthRule& rule = {});

}  // namespace tsdantzig
