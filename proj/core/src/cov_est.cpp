#include "tsdantzig/cov_est.hpp"

#include <cmath>
#include <string>

#include "tsdantzig/error.hpp"

namespace tsdantzig {

std::string_view to_string(MeanMode mode) noexcept {
  switch (mode) {
    case MeanMode::known_zero: return "known_zero";
    case MeanMode::known_mu: return "known_mu";
    case MeanMode::estimated: return "estimated";
  }
  return "unknown";
}

MeanMode parse_mean_mode(std::string_view name) {
  if (name == "known_zero") return MeanMode::known_zero;
  if (name == "known_mu") return MeanMode::known_mu;
  if (name == "estimated") return MeanMode::estimated;
  throw InvalidArgument("unknown mean mode '" + std::string(name) + "'");
}

CovarianceEstimate sample_covariance(const SampleMatrix& x, MeanMode mode, std::span<const double> mu) {
  const std::size_t n = x.n();
  const std::size_t p = x.p();
  if (mode == MeanMode::estimated && n < 2) throw InvalidArgument("sample_covariance: need n >= 2 to estimate the mean");
  if (n < 1) throw InvalidArgument("sample_covariance: empty sample");

  Vector center(p, 0.0);
  if (mode == MeanMode::known_mu) {
    if (mu.size() != p) throw InvalidArgument("sample_covariance: mu length differs from p");
    center.assign(mu.begin(), mu.end());
  } else if (mode == MeanMode::estimated) {
    center = x.column_means();
  }

  DenseMatrix s(p, p);
  Vector r(p);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = x.data.row(i);
    for (std::size_t j = 0; j < p; ++j) r[j] = row[j] - center[j];
    for (std::size_t j = 0; j < p; ++j) {
      const double rj = r[j];
      if (rj == 0.0) continue;
      auto out = s.row(j);
      for (std::size_t k = j; k < p; ++k) out[k] += rj * r[k];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = j; k < p; ++k) {
      s(j, k) *= inv_n;
      s(k, j) = s(j, k);
    }
  }
  return CovarianceEstimate{std::move(s), mode, n};
}

double sample_autocovariance(std::span<const double> x, std::ptrdiff_t lag) {
  const std::size_t n = x.size();
  const auto s = static_cast<std::size_t>(lag < 0 ? -lag : lag);
  if (n == 0 || s >= n) throw InvalidArgument("sample_autocovariance: need 0 <= |lag| < n");
  double acc = 0.0;
  for (std::size_t t = 0; t + s < n; ++t) acc += x[t] * x[t + s];
  return acc / static_cast<double>(n);
}

double TaperSpec::kappa(double x) const {
  const double ax = std::abs(x);
  if (ax <= 1.0) return 1.0;
  if (ax > c) return 0.0;
  return g ? g(ax) : 2.0 - ax;
}

void TaperSpec::validate() const {
  if (l < 1) throw InvalidArgument("TaperSpec: bandwidth l must be >= 1");
  if (!(c > 1.0)) throw InvalidArgument("TaperSpec: cutoff c must exceed 1");
  if (!g && c != 2.0) throw InvalidArgument("TaperSpec: the default trapezoid requires c = 2");
}

double ToeplitzAutocov::at(std::ptrdiff_t lag) const noexcept {
  const auto s = static_cast<std::size_t>(lag < 0 ? -lag : lag);
  return s < gamma_hat.size() ? gamma_hat[s] : 0.0;
}

DenseMatrix ToeplitzAutocov::assemble() const {
  const std::size_t size = n();
  DenseMatrix m(size, size);
  for (std::size_t j = 0; j < size; ++j)
    for (std::size_t k = 0; k < size; ++k) m(j, k) = gamma_hat[j > k ? j - k : k - j];
  return m;
}

Vector ToeplitzAutocov::shifted() const {
  Vector out(n(), 0.0);
  for (std::size_t s = 1; s < n(); ++s) out[s - 1] = gamma_hat[s];
  return out;
}

ToeplitzAutocov flat_top_autocov_matrix(std::span<const double> x, const TaperSpec& taper) {
  taper.validate();
  const std::size_t n = x.size();
  if (n < 2) throw InvalidArgument("flat_top_autocov_matrix: need n >= 2");
  ToeplitzAutocov out{Vector(n, 0.0)};
  const double l = static_cast<double>(taper.l);
  for (std::size_t s = 0; s < n; ++s) {
    const double weight = taper.kappa(static_cast<double>(s) / l);
    if (weight == 0.0) continue;
    out.gamma_hat[s] = weight * sample_autocovariance(x, static_cast<std::ptrdiff_t>(s));
  }
  return out;
}

std::size_t select_bandwidth(std::span<const double> x, const BandwidthRule& rule) {
  const std::size_t n = x.size();
  if (n < 20) throw InvalidArgument("select_bandwidth: need n >= 20");
  const double log_n = std::log10(static_cast<double>(n));
  const std::size_t lags =
      std::max(rule.min_lags, static_cast<std::size_t>(std::ceil(std::sqrt(log_n))));
  const double threshold = rule.c_thr * std::sqrt(log_n / static_cast<double>(n));
  const std::size_t cap = n / 4;

  const double gamma0 = sample_autocovariance(x, 0);
  auto rho = [&](std::size_t s) {
    if (gamma0 == 0.0 || s >= n) return 0.0;
    return sample_autocovariance(x, static_cast<std::ptrdiff_t>(s)) / gamma0;
  };

  for (std::size_t l = 1; l <= cap; ++l) {
    bool quiet = true;
    for (std::size_t k = 1; k <= lags && quiet; ++k) quiet = std::abs(rho(l + k)) < threshold;
    if (quiet) return l;
  }
  return cap;
}

}  // namespace tsdantzig
