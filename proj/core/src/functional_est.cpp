#include "tsdantzig/functional_est.hpp"

#include <algorithm>
#include <cmath>

#include "tsdantzig/error.hpp"

namespace tsdantzig {

namespace {

void check_inputs(const DenseMatrix& s, std::span<const double> b_hat, double lambda) {
  if (!s.square()) throw InvalidArgument("Dantzig LP: S must be square");
  if (s.rows() == 0) throw InvalidArgument("Dantzig LP: empty system");
  if (b_hat.size() != s.rows()) throw InvalidArgument("Dantzig LP: b_hat length differs from S");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("Dantzig LP: lambda must be finite and >= 0");
  if (!s.all_finite()) throw InvalidArgument("Dantzig LP: S has non-finite entries");
  for (double v : b_hat)
    if (!std::isfinite(v)) throw InvalidArgument("Dantzig LP: b_hat has non-finite entries");
}

}  // namespace

void DantzigConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("DantzigConfig: lambda must be finite and >= 0");
  if (!(lp_tol > 0.0)) throw InvalidArgument("DantzigConfig: lp_tol must be positive");
  if (lp_max_iter == 0) throw InvalidArgument("DantzigConfig: lp_max_iter must be positive");
}

std::string_view to_string(EstimateStatus status) noexcept {
  switch (status) {
    case EstimateStatus::optimal: return "optimal";
    case EstimateStatus::infeasible: return "infeasible";
    case EstimateStatus::solver_limit: return "solver_limit";
  }
  return "unknown";
}

LPProblem build_dantzig_lp(const DenseMatrix& s, std::span<const double> b_hat, double lambda) {
  check_inputs(s, b_hat, lambda);
  const std::size_t p = s.rows();
  LPProblem lp;
  lp.objective.assign(3 * p, 0.0);
  std::fill_n(lp.objective.begin(), p, 1.0);
  lp.constraint_matrix = DenseMatrix(4 * p, 3 * p);
  lp.rhs.assign(4 * p, 0.0);
  auto& a = lp.constraint_matrix;
  for (std::size_t j = 0; j < p; ++j) {
    // -u - eta <= 0 and eta - u <= 0
    a(j, j) = -1.0;
    a(j, p + j) = -1.0;
    a(j, 2 * p + j) = 1.0;
    a(p + j, j) = -1.0;
    a(p + j, p + j) = 1.0;
    a(p + j, 2 * p + j) = -1.0;
  }
  for (std::size_t k = 0; k < p; ++k) {
    const std::size_t up = 2 * p + k;
    const std::size_t down = 3 * p + k;
    for (std::size_t j = 0; j < p; ++j) {
      const double v = s(k, j);
      a(up, p + j) = v;
      a(up, 2 * p + j) = -v;
      a(down, p + j) = -v;
      a(down, 2 * p + j) = v;
    }
    lp.rhs[up] = lambda + b_hat[k];
    lp.rhs[down] = lambda - b_hat[k];
  }
  return lp;
}

FunctionalEstimate estimate_functional(const DenseMatrix& s, std::span<const double> b_hat,
                                       const DantzigConfig& config) {
  config.validate();
  check_inputs(s, b_hat, config.lambda);
  const std::size_t p = s.rows();
  const double lambda = config.lambda;

  FunctionalEstimate est;
  est.lambda = lambda;

  // Zero is feasible and has zero l1 norm, so it is the estimate whenever allowed.
  if (norm_inf(b_hat) <= lambda) {
    est.status = EstimateStatus::optimal;
    est.theta_hat.assign(p, 0.0);
    est.band_residual = norm_inf(b_hat);
    return est;
  }

  LPProblem lp;
  lp.objective.assign(2 * p, 1.0);
  lp.constraint_matrix = DenseMatrix(2 * p, 2 * p);
  lp.rhs.assign(2 * p, 0.0);
  auto& a = lp.constraint_matrix;
  for (std::size_t k = 0; k < p; ++k) {
    for (std::size_t j = 0; j < p; ++j) {
      const double v = s(k, j);
      a(k, j) = v;
      a(k, p + j) = -v;
      a(p + k, j) = -v;
      a(p + k, p + j) = v;
    }
    lp.rhs[k] = lambda + b_hat[k];
    lp.rhs[p + k] = lambda - b_hat[k];
  }

  SimplexOptions options;
  options.tol = config.lp_tol;
  options.max_iter = config.lp_max_iter;
  const LPSolution sol = solve_lp(lp, options);
  est.lp_iterations = sol.iterations;
  if (sol.status == LPStatus::infeasible) {
    est.status = EstimateStatus::infeasible;
    return est;
  }
  if (sol.status != LPStatus::optimal) {
    est.status = EstimateStatus::solver_limit;
    return est;
  }

  Vector theta(p);
  for (std::size_t j = 0; j < p; ++j) theta[j] = sol.primal[j] - sol.primal[p + j];
  const double residual = norm_inf(subtract(multiply(s, theta), b_hat));
  const double slack = config.lp_tol * std::max(1.0, lambda + norm_inf(b_hat));
  if (!(residual <= lambda + slack)) {
    est.status = EstimateStatus::solver_limit;
    return est;
  }
  est.status = EstimateStatus::optimal;
  est.l1_norm = norm1(theta);
  est.band_residual = residual;
  est.theta_hat = std::move(theta);
  return est;
}

double smallness_D(std::span<const double> theta, double u) {
  if (!(u >= 0.0)) throw InvalidArgument("smallness_D: u must be >= 0");
  double total = 0.0;
  for (double v : theta) total += std::min(std::abs(v), u);
  return total;
}

void SparsityClass::validate() const {
  if (!(r >= 0.0 && r < 1.0)) throw InvalidArgument("SparsityClass: r must lie in [0, 1)");
  if (!(nu > 0.0)) throw InvalidArgument("SparsityClass: nu must be positive");
  if (!(M_p > 0.0)) throw InvalidArgument("SparsityClass: M_p must be positive");
}

double SparsityClass::quasi_norm(std::span<const double> eta) const {
  double total = 0.0;
  for (double v : eta) {
    if (v == 0.0) continue;
    total += r == 0.0 ? 1.0 : std::pow(std::abs(v), r);
  }
  return total;
}

bool SparsityClass::contains(std::span<const double> eta) const {
  validate();
  return norm_inf(eta) <= nu && quasi_norm(eta) <= M_p;
}

double lp_norm(std::span<const double> v, double w) {
  if (!(w >= 1.0)) throw InvalidArgument("lp_norm: w must lie in [1, inf]");
  if (std::isinf(w)) return norm_inf(v);
  if (w == 1.0) return norm1(v);
  if (w == 2.0) return norm2(v);
  // Scale by the max entry to avoid overflow in |v_j|^w.
  const double scale = norm_inf(v);
  if (scale == 0.0) return 0.0;
  double total = 0.0;
  for (double x : v) total += std::pow(std::abs(x) / scale, w);
  return scale * std::pow(total, 1.0 / w);
}

Vector error_norms(std::span<const double> theta_hat, std::span<const double> theta, std::span<const double> w_list) {
  if (theta_hat.size() != theta.size()) throw InvalidArgument("error_norms: length mismatch");
  const Vector delta = subtract(theta_hat, theta);
  Vector out;
  out.reserve(w_list.size());
  for (double w : w_list) out.push_back(lp_norm(delta, w));
  return out;
}

}  // namespace tsdantzig
