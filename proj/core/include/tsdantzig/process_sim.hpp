#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "tsdantzig/dense_matrix.hpp"
#include "tsdantzig/random.hpp"

namespace tsdantzig {

/// Innovation laws, each standardized to mean 0 and variance 1.
enum class Innovation { uniform, gaussian, double_exponential, student_t3 };

std::string_view to_string(Innovation innovation) noexcept;
/// Accepts the canonical names plus the short tags bd, gs, de, st.
Innovation parse_innovation(std::string_view name);

/// Draws one standardized innovation at a time.
class InnovationSampler {
 public:
  explicit InnovationSampler(Innovation law) : law_(law) {}
  double operator()(Rng& rng);
  Innovation law() const noexcept { return law_; }

 private:
  Innovation law_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{-1.7320508075688772, 1.7320508075688772};
  std::exponential_distribution<double> exponential_{1.0};
  std::student_t_distribution<double> student_{3.0};
};

Vector draw_innovation(Innovation law, std::size_t count, std::uint64_t seed);

/// Observations stacked row-wise: row i is x_i^T.
struct SampleMatrix {
  DenseMatrix data;

  std::size_t n() const noexcept { return data.rows(); }
  std::size_t p() const noexcept { return data.cols(); }
  /// Rows [first, first + count).
  SampleMatrix slice(std::size_t first, std::size_t count) const;
  /// One column as a series.
  Vector column(std::size_t j) const;
  Vector column_means() const;
};

/// Truncated vector linear process x_i = mu + sum_{m=0}^{M} A_m xi_{i-m}.
struct LinearProcessModel {
  std::size_t p = 0;
  /// Dependence index; +infinity encodes an i.i.d. (MA(0)) model.
  double beta = std::numeric_limits<double>::infinity();
  /// A_0 .. A_M; the truncation order M is coefficients.size() - 1.
  std::vector<DenseMatrix> coefficients;
  Vector mean;
  Innovation innovation = Innovation::gaussian;
  /// Decay constant: max_j |A_{m,j.}|_2 <= c0 (1 v m)^{-beta} for all m.
  double c0 = 1.0;
  double sparsify_frac = 0.0;
  std::uint64_t seed = 0;

  std::size_t truncation() const noexcept { return coefficients.empty() ? 0 : coefficients.size() - 1; }
  /// Largest row norm of A_m scaled by (1 v m)^beta, over all m.
  double effective_c0() const;
  /// Checks dimensions, finiteness and the decay bound.
  void validate() const;

  /// A_0 = I, A_1 = 0.
  static LinearProcessModel white_noise(std::size_t p, Innovation innovation = Innovation::gaussian,
                                        Vector mean = {});
};

struct ModelOptions {
  std::size_t truncation = 2000;
  /// Nominal decay constant; an A_m whose random draw exceeds it is rescaled.
  double c0 = 1.0;
  Innovation innovation = Innovation::gaussian;
  Vector mean;
};

/// A_m = Z_m (1 v m)^{-beta} with Z_m i.i.d. N(0, 1/p), after which
/// round(sparsify_frac * p^2) entries of each A_m are zeroed at random,
/// independently across m. Models built from the same seed share Z_m and the
/// zero patterns for every beta.
LinearProcessModel build_model(std::size_t p, double beta, double sparsify_frac, std::uint64_t seed,
                               const ModelOptions& options = {});

/// Reusable simulator holding a sparse copy of the coefficients. The model
/// must outlive the simulator.
class ProcessSimulator {
 public:
  explicit ProcessSimulator(const LinearProcessModel& model);

  /// n observations; M pre-sample innovation vectors make the output exactly
  /// stationary for the truncated model.
  SampleMatrix operator()(std::size_t n, std::uint64_t seed) const;

 private:
  struct Entry {
    std::uint32_t row;
    std::uint32_t col;
    double value;
  };
  const LinearProcessModel* model_;
  std::vector<std::vector<Entry>> nonzeros_;
};

SampleMatrix simulate(const LinearProcessModel& model, std::size_t n, std::uint64_t seed);

/// Exact Sigma_k = sum_{m=0}^{M-k} A_m A_{m+k}^T of the truncated model.
DenseMatrix true_autocovariance(const LinearProcessModel& model, std::size_t lag);

/// X_i = sum_j theta_j X_{i-j} + e_i, e_i ~ N(0, noise_sd^2).
struct ARModel {
  Vector coefficients;
  double noise_sd = 1.0;

  std::size_t order() const noexcept { return coefficients.size(); }

  static ARModel ar1(double theta, double noise_sd = 1.0);
  /// theta_1 = -0.3, theta_3 = 0.7, theta_14 = -0.2.
  static ARModel ar14();
};

/// Burn-in of max(10 * order, 200) steps is discarded. Throws NumericalError
/// when the recursion diverges.
Vector simulate_ar(const ARModel& model, std::size_t n, std::uint64_t seed);

/// Exact gamma_0 .. gamma_{max_lag} of a stationary AR model.
Vector ar_autocovariance(const ARModel& model, std::size_t max_lag);

}  // namespace tsdantzig
