#pragma once

#include <string_view>

namespace tsdantzig {

enum class TailRegime { subgaussian, exponential, polynomial };

std::string_view to_string(TailRegime regime) noexcept;
TailRegime parse_tail_regime(std::string_view name);

struct RateSpec {
  TailRegime regime = TailRegime::subgaussian;
  /// Tail index of the exponential regime; must exceed 1/2.
  double alpha = 1.0;
  /// Moment order of the polynomial regime; must exceed 4.
  double q = 8.0;
  double beta = 2.0;
  double n = 100.0;
  double p = 100.0;
  double r_b = 0.0;

  /// min(2 beta - 1, 1/2).
  double beta_prime() const noexcept;
  void validate() const;
};

/// The building blocks of the rate table, natural logarithms throughout.
struct RateTerms {
  double u1 = 0.0;  // sqrt(log p / n)
  double u2 = 0.0;  // log p / n^{2 beta - 1}
  double u5 = 0.0;  // p^{4/q} / n^{1 - 2/q}
  double u6 = 0.0;  // p^{2/q} / n^{2 beta - 1}
};

RateTerms rate_terms(const RateSpec& spec);

/// Sub-Gaussian: u1 for beta > 1, u1 v (u2 log^2 n) at beta = 1, u1 v u2 for
/// 3/4 < beta < 1, (u1 sqrt(log n)) v u2 at beta = 3/4, u2 below 3/4.
/// Exponential: (log p)^{2 alpha + 2} n^{-beta'}.
/// Polynomial: u1 v u5 when beta >= 1 - 1/q, otherwise u1 v u5 v u6.
double theoretical_rate_J(const RateSpec& spec);

/// r_b + c1 * theta_l1_bound * J. Diagnostic only: the constants are not
/// identified, so tuning picks lambda in practice.
double recommend_lambda(const RateSpec& spec, double theta_l1_bound, double c1);

}  // namespace tsdantzig
