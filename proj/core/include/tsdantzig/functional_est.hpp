#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>

#include "tsdantzig/cov_est.hpp"
#include "tsdantzig/dense_matrix.hpp"
#include "tsdantzig/simplex.hpp"

namespace tsdantzig {

struct DantzigConfig {
  double lambda = 0.0;
  double lp_tol = 1e-9;
  std::size_t lp_max_iter = 200000;

  void validate() const;
};

enum class EstimateStatus { optimal, infeasible, solver_limit };

std::string_view to_string(EstimateStatus status) noexcept;

struct FunctionalEstimate {
  /// Empty unless status == optimal.
  Vector theta_hat;
  double lambda = 0.0;
  EstimateStatus status = EstimateStatus::infeasible;
  double l1_norm = 0.0;
  std::size_t lp_iterations = 0;
  /// |S theta_hat - b_hat|_inf; NaN when there is no estimate.
  double band_residual = std::numeric_limits<double>::quiet_NaN();

  bool ok() const noexcept { return status == EstimateStatus::optimal; }
};

/// Variables (u, eta+, eta-), each block of length p. Rows: the 2p
/// absolute-value constraints followed by the 2p band constraints.
LPProblem build_dantzig_lp(const DenseMatrix& s, std::span<const double> b_hat, double lambda);
inline LPProblem build_dantzig_lp(const CovarianceEstimate& s, std::span<const double> b_hat, double lambda) {
  return build_dantzig_lp(s.matrix, b_hat, lambda);
}

/// argmin |eta|_1 subject to |S eta - b_hat|_inf <= lambda.
///
/// Solves the reduced program over (eta+, eta-) with objective
/// sum(eta+ + eta-); at an optimum u_j = eta+_j + eta-_j, so it has the same
/// minimizers as build_dantzig_lp with p fewer columns and 2p fewer rows.
/// An optimal status guarantees band_residual <= lambda + lp_tol * max(1, lambda + |b_hat|_inf).
FunctionalEstimate estimate_functional(const DenseMatrix& s, std::span<const double> b_hat,
                                       const DantzigConfig& config);
inline FunctionalEstimate estimate_functional(const CovarianceEstimate& s, std::span<const double> b_hat,
                                              const DantzigConfig& config) {
  return estimate_functional(s.matrix, b_hat, config);
}

/// D(u) = sum_j min(|theta_j|, u).
double smallness_D(std::span<const double> theta, double u);

/// Strong l^r ball: max_j |eta_j| <= nu and sum_j |eta_j|^r <= M_p, where
/// r = 0 counts nonzeros.
struct SparsityClass {
  double r = 0.0;
  double nu = 1.0;
  double M_p = 1.0;

  void validate() const;
  double quasi_norm(std::span<const double> eta) const;
  bool contains(std::span<const double> eta) const;
};

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// |v|_w for w in [1, inf]; w = kInfNorm gives the max norm.
double lp_norm(std::span<const double> v, double w);

/// |theta_hat - theta|_w for each requested w.
Vector error_norms(std::span<const double> theta_hat, std::span<const double> theta, std::span<const double> w_list);

}  // namespace tsdantzig
