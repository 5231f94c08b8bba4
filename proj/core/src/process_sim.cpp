#include "tsdantzig/process_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tsdantzig/error.hpp"
#include "tsdantzig/linalg.hpp"

namespace tsdantzig {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kInvSqrt2 = 0.70710678118654752;

double decay_factor(double beta, std::size_t m) {
  if (std::isinf(beta)) return m == 0 ? 1.0 : 0.0;
  return std::pow(static_cast<double>(std::max<std::size_t>(1, m)), -beta);
}

double max_row_norm(const DenseMatrix& a) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.rows(); ++j) worst = std::max(worst, norm2(a.row(j)));
  return worst;
}

// Column-compressed view of one coefficient matrix.
struct ColumnLists {
  std::vector<std::size_t> start;
  std::vector<std::size_t> rows;
  std::vector<double> values;

  explicit ColumnLists(const DenseMatrix& a) : start(a.cols() + 1, 0) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      for (std::size_t r = 0; r < a.rows(); ++r) {
        const double v = a(r, c);
        if (v == 0.0) continue;
        rows.push_back(r);
        values.push_back(v);
      }
      start[c + 1] = rows.size();
    }
  }
};

}  // namespace

std::string_view to_string(Innovation innovation) noexcept {
  switch (innovation) {
    case Innovation::uniform: return "uniform";
    case Innovation::gaussian: return "gaussian";
    case Innovation::double_exponential: return "double_exponential";
    case Innovation::student_t3: return "student_t3";
  }
  return "unknown";
}

Innovation parse_innovation(std::string_view name) {
  if (name == "uniform" || name == "bd" || name == "bounded") return Innovation::uniform;
  if (name == "gaussian" || name == "gs" || name == "normal") return Innovation::gaussian;
  if (name == "double_exponential" || name == "de" || name == "laplace") return Innovation::double_exponential;
  if (name == "student_t3" || name == "st" || name == "t3") return Innovation::student_t3;
  throw InvalidArgument("unknown innovation distribution '" + std::string(name) + "'");
}

double InnovationSampler::operator()(Rng& rng) {
  switch (law_) {
    case Innovation::uniform: return uniform_(rng);
    case Innovation::gaussian: return normal_(rng);
    case Innovation::double_exponential: {
      const double magnitude = exponential_(rng) * kInvSqrt2;
      return (rng() & 1U) ? magnitude : -magnitude;
    }
    case Innovation::student_t3: return student_(rng) / kSqrt3;
  }
  return 0.0;
}

Vector draw_innovation(Innovation law, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw InvalidArgument("draw_innovation: count must be positive");
  Rng rng(seed);
  InnovationSampler sampler(law);
  Vector out(count);
  for (double& v : out) v = sampler(rng);
  return out;
}

SampleMatrix SampleMatrix::slice(std::size_t first, std::size_t count) const {
  if (first + count > n()) throw InvalidArgument("SampleMatrix::slice: range exceeds sample");
  const auto all = data.entries();
  std::vector<double> entries(all.begin() + static_cast<std::ptrdiff_t>(first * p()),
                              all.begin() + static_cast<std::ptrdiff_t>((first + count) * p()));
  return SampleMatrix{DenseMatrix(count, p(), std::move(entries))};
}

Vector SampleMatrix::column(std::size_t j) const {
  Vector out(n());
  for (std::size_t i = 0; i < n(); ++i) out[i] = data(i, j);
  return out;
}

Vector SampleMatrix::column_means() const {
  Vector mean(p(), 0.0);
  for (std::size_t i = 0; i < n(); ++i) {
    const auto r = data.row(i);
    for (std::size_t j = 0; j < p(); ++j) mean[j] += r[j];
  }
  for (double& v : mean) v /= static_cast<double>(n());
  return mean;
}

double LinearProcessModel::effective_c0() const {
  double c = 0.0;
  for (std::size_t m = 0; m < coefficients.size(); ++m) {
    const double rn = max_row_norm(coefficients[m]);
    if (rn == 0.0) continue;
    const double d = decay_factor(beta, m);
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    c = std::max(c, rn / d);
  }
  return c;
}

void LinearProcessModel::validate() const {
  if (p == 0) throw InvalidArgument("LinearProcessModel: p must be positive");
  if (!(beta > 0.5)) throw InvalidArgument("LinearProcessModel: beta must exceed 1/2");
  if (coefficients.size() < 2) throw InvalidArgument("LinearProcessModel: truncation order must be >= 1");
  if (!mean.empty() && mean.size() != p) throw InvalidArgument("LinearProcessModel: mean length differs from p");
  for (std::size_t m = 0; m < coefficients.size(); ++m) {
    const DenseMatrix& a = coefficients[m];
    if (a.rows() != p || a.cols() != p) throw InvalidArgument("LinearProcessModel: coefficient shape mismatch");
    if (!a.all_finite()) throw InvalidArgument("LinearProcessModel: non-finite coefficient");
    const double bound = c0 * decay_factor(beta, m);
    if (max_row_norm(a) > bound * (1.0 + 1e-12)) {
      throw InvalidArgument("LinearProcessModel: decay bound violated at lag " + std::to_string(m));
    }
  }
}

LinearProcessModel LinearProcessModel::white_noise(std::size_t p, Innovation innovation, Vector mean) {
  LinearProcessModel model;
  model.p = p;
  model.coefficients = {DenseMatrix::identity(p), DenseMatrix(p, p)};
  model.mean = mean.empty() ? Vector(p, 0.0) : std::move(mean);
  model.innovation = innovation;
  model.c0 = 1.0;
  model.validate();
  return model;
}

LinearProcessModel build_model(std::size_t p, double beta, double sparsify_frac, std::uint64_t seed,
                               const ModelOptions& options) {
  if (p == 0) throw InvalidArgument("build_model: p must be positive");
  if (!(beta > 0.5)) throw InvalidArgument("build_model: beta must exceed 1/2");
  if (!(sparsify_frac >= 0.0 && sparsify_frac < 1.0))
    throw InvalidArgument("build_model: sparsify_frac must lie in [0, 1)");
  if (options.truncation < 1) throw InvalidArgument("build_model: truncation order must be >= 1");
  if (!(options.c0 > 0.0)) throw InvalidArgument("build_model: c0 must be positive");

  LinearProcessModel model;
  model.p = p;
  model.beta = beta;
  model.innovation = options.innovation;
  model.sparsify_frac = sparsify_frac;
  model.seed = seed;
  model.mean = options.mean.empty() ? Vector(p, 0.0) : options.mean;
  if (model.mean.size() != p) throw InvalidArgument("build_model: mean length differs from p");

  const std::size_t cells = p * p;
  const auto zeroed = static_cast<std::size_t>(std::llround(sparsify_frac * static_cast<double>(cells)));
  const double sd = 1.0 / std::sqrt(static_cast<double>(p));
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, sd);
  std::vector<std::size_t> order(cells);

  model.coefficients.reserve(options.truncation + 1);
  for (std::size_t m = 0; m <= options.truncation; ++m) {
    DenseMatrix a(p, p);
    const double decay = decay_factor(beta, m);
    for (double& v : a.entries()) v = normal(rng) * decay;
    // Partial Fisher-Yates: the first `zeroed` slots of `order` are the zero pattern.
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t k = 0; k < zeroed; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, cells - 1);
      std::swap(order[k], order[pick(rng)]);
      a.entries()[order[k]] = 0.0;
    }
    const double bound = options.c0 * decay;
    const double rn = max_row_norm(a);
    if (rn > bound) a *= bound / rn;
    model.coefficients.push_back(std::move(a));
  }
  model.c0 = std::max(model.effective_c0(), std::numeric_limits<double>::min());
  model.validate();
  return model;
}

ProcessSimulator::ProcessSimulator(const LinearProcessModel& model) : model_(&model) {
  model.validate();
  nonzeros_.resize(model.coefficients.size());
  for (std::size_t m = 0; m < model.coefficients.size(); ++m) {
    const DenseMatrix& a = model.coefficients[m];
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (std::size_t c = 0; c < a.cols(); ++c)
        if (a(r, c) != 0.0)
          nonzeros_[m].push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), a(r, c)});
  }
}

SampleMatrix ProcessSimulator::operator()(std::size_t n, std::uint64_t seed) const {
  if (n == 0) throw InvalidArgument("simulate: n must be positive");
  const LinearProcessModel& model = *model_;
  const std::size_t p = model.p;
  const std::size_t order = model.truncation();
  const std::size_t span = n + order;

  // Innovations are drawn time-major (all p coordinates of xi_t, then t+1)
  // but stored coordinate-major so the lag loop below runs over contiguous memory.
  Rng rng(seed);
  InnovationSampler sampler(model.innovation);
  std::vector<double> innovations(p * span);
  for (std::size_t t = 0; t < span; ++t)
    for (std::size_t k = 0; k < p; ++k) innovations[k * span + t] = sampler(rng);

  std::vector<double> out(p * n, 0.0);
  for (std::size_t m = 0; m <= order; ++m) {
    for (const Entry& e : nonzeros_[m]) {
      double* dst = out.data() + static_cast<std::size_t>(e.row) * n;
      const double* src = innovations.data() + static_cast<std::size_t>(e.col) * span + (order - m);
      const double a = e.value;
      for (std::size_t i = 0; i < n; ++i) dst[i] += a * src[i];
    }
  }

  SampleMatrix sample{DenseMatrix(n, p)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) sample.data(i, j) = model.mean[j] + out[j * n + i];
  return sample;
}

SampleMatrix simulate(const LinearProcessModel& model, std::size_t n, std::uint64_t seed) {
  return ProcessSimulator(model)(n, seed);
}

DenseMatrix true_autocovariance(const LinearProcessModel& model, std::size_t lag) {
  model.validate();
  const std::size_t p = model.p;
  DenseMatrix sigma(p, p);
  const std::size_t order = model.truncation();
  if (lag > order) return sigma;

  std::vector<ColumnLists> columns;
  columns.reserve(order + 1);
  for (const DenseMatrix& a : model.coefficients) columns.emplace_back(a);

  // (A_m A_{m+k}^T)_{jl} = sum_c A_m[j,c] A_{m+k}[l,c], accumulated column by column.
  for (std::size_t m = 0; m + lag <= order; ++m) {
    const ColumnLists& left = columns[m];
    const ColumnLists& right = columns[m + lag];
    for (std::size_t c = 0; c < p; ++c) {
      for (std::size_t u = left.start[c]; u < left.start[c + 1]; ++u) {
        auto dst = sigma.row(left.rows[u]);
        const double a = left.values[u];
        for (std::size_t v = right.start[c]; v < right.start[c + 1]; ++v) dst[right.rows[v]] += a * right.values[v];
      }
    }
  }
  return sigma;
}

ARModel ARModel::ar1(double theta, double noise_sd) { return ARModel{{theta}, noise_sd}; }

ARModel ARModel::ar14() {
  Vector theta(14, 0.0);
  theta[0] = -0.3;
  theta[2] = 0.7;
  theta[13] = -0.2;
  return ARModel{std::move(theta), 1.0};
}

Vector simulate_ar(const ARModel& model, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("simulate_ar: n must be positive");
  if (!(model.noise_sd >= 0.0)) throw InvalidArgument("simulate_ar: noise_sd must be nonnegative");
  constexpr double kOverflowBound = 1e150;
  const std::size_t q = model.order();
  const std::size_t burn_in = std::max<std::size_t>(10 * q, 200);
  const std::size_t total = burn_in + n;

  Rng rng(seed);
  std::normal_distribution<double> noise(0.0, model.noise_sd);
  Vector x(total, 0.0);
  for (std::size_t i = 0; i < total; ++i) {
    double v = noise(rng);
    for (std::size_t j = 1; j <= q && j <= i; ++j) v += model.coefficients[j - 1] * x[i - j];
    if (!(std::abs(v) < kOverflowBound)) throw NumericalError("simulate_ar: recursion diverged (unstable model)");
    x[i] = v;
  }
  return Vector(x.begin() + static_cast<std::ptrdiff_t>(burn_in), x.end());
}

Vector ar_autocovariance(const ARModel& model, std::size_t max_lag) {
  const std::size_t q = model.order();
  const double s2 = model.noise_sd * model.noise_sd;
  // gamma_k - sum_j theta_j gamma_{|k-j|} = s2 [k == 0], k = 0..q.
  DenseMatrix system(q + 1, q + 1);
  Vector rhs(q + 1, 0.0);
  rhs[0] = s2;
  for (std::size_t k = 0; k <= q; ++k) {
    system(k, k) += 1.0;
    for (std::size_t j = 1; j <= q; ++j) {
      const std::size_t lag = k >= j ? k - j : j - k;
      system(k, lag) -= model.coefficients[j - 1];
    }
  }
  Vector head;
  try {
    head = solve_linear_system(system, rhs);
  } catch (const SingularMatrixError&) {
    throw NumericalError("ar_autocovariance: model is not stationary");
  }
  Vector gamma(max_lag + 1, 0.0);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    if (k <= q) {
      gamma[k] = head[k];
    } else {
      double v = 0.0;
      for (std::size_t j = 1; j <= q; ++j) v += model.coefficients[j - 1] * gamma[k - j];
      gamma[k] = v;
    }
  }
  if (!(gamma[0] > 0.0)) throw NumericalError("ar_autocovariance: model is not stationary");
  return gamma;
}

}  // namespace tsdantzig
