#include "tsdantzig/rates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsdantzig/error.hpp"

namespace tsdantzig {

std::string_view to_string(TailRegime regime) noexcept {
  switch (regime) {
    case TailRegime::subgaussian: return "subgaussian";
    case TailRegime::exponential: return "exponential";
    case TailRegime::polynomial: return "polynomial";
  }
  return "unknown";
}

TailRegime parse_tail_regime(std::string_view name) {
  if (name == "subgaussian") return TailRegime::subgaussian;
  if (name == "exponential") return TailRegime::exponential;
  if (name == "polynomial") return TailRegime::polynomial;
  throw InvalidArgument("unknown tail regime '" + std::string(name) + "'");
}

double RateSpec::beta_prime() const noexcept { return std::min(2.0 * beta - 1.0, 0.5); }

void RateSpec::validate() const {
  if (!(beta > 0.5)) throw InvalidArgument("RateSpec: beta must exceed 1/2");
  if (!(n > 1.0) || !std::isfinite(n)) throw InvalidArgument("RateSpec: n must exceed 1");
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("RateSpec: p must exceed 1");
  if (!(r_b >= 0.0)) throw InvalidArgument("RateSpec: r_b must be >= 0");
  if (regime == TailRegime::exponential && !(alpha > 0.5)) throw InvalidArgument("RateSpec: alpha must exceed 1/2");
  if (regime == TailRegime::polynomial && !(q > 4.0)) throw InvalidArgument("RateSpec: q must exceed 4");
}

RateTerms rate_terms(const RateSpec& spec) {
  spec.validate();
  const double log_p = std::log(spec.p);
  const double lead = std::pow(spec.n, 2.0 * spec.beta - 1.0);
  RateTerms t;
  t.u1 = std::sqrt(log_p / spec.n);
  t.u2 = log_p / lead;
  if (spec.regime == TailRegime::polynomial) {
    t.u5 = std::pow(spec.p, 4.0 / spec.q) / std::pow(spec.n, 1.0 - 2.0 / spec.q);
    t.u6 = std::pow(spec.p, 2.0 / spec.q) / lead;
  }
  return t;
}

double theoretical_rate_J(const RateSpec& spec) {
  const RateTerms t = rate_terms(spec);
  const double beta = spec.beta;
  switch (spec.regime) {
    case TailRegime::subgaussian: {
      if (beta > 1.0) return t.u1;
      if (beta == 1.0) {
        const double log_n = std::log(spec.n);
        return std::max(t.u1, t.u2 * log_n * log_n);
      }
      if (beta > 0.75) return std::max(t.u1, t.u2);
      if (beta == 0.75) return std::max(t.u1 * std::sqrt(std::log(spec.n)), t.u2);
      return t.u2;
    }
    case TailRegime::exponential:
      return std::pow(std::log(spec.p), 2.0 * spec.alpha + 2.0) * std::pow(spec.n, -spec.beta_prime());
    case TailRegime::polynomial:
      if (beta >= 1.0 - 1.0 / spec.q) return std::max(t.u1, t.u5);
      return std::max({t.u1, t.u5, t.u6});
  }
  throw InvalidArgument("theoretical_rate_J: unknown regime");
}

double recommend_lambda(const RateSpec& spec, double theta_l1_bound, double c1) {
  if (!(c1 > 0.0)) throw InvalidArgument("recommend_lambda: c1 must be positive");
  if (!(theta_l1_bound >= 0.0)) throw InvalidArgument("recommend_lambda: theta_l1_bound must be >= 0");
  return spec.r_b + c1 * theta_l1_bound * theoretical_rate_J(spec);
}

}  // namespace tsdantzig
