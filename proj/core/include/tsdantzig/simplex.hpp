#pragma once

#include <cstddef>
#include <string_view>

#include "tsdantzig/dense_matrix.hpp"

namespace tsdantzig {

/// minimize c^T x  subject to  A x <= b,  x >= 0.
struct LPProblem {
  Vector objective;
  DenseMatrix constraint_matrix;
  Vector rhs;

  std::size_t variables() const noexcept { return objective.size(); }
  std::size_t constraints() const noexcept { return rhs.size(); }
  /// Throws InvalidArgument on inconsistent dimensions or non-finite data.
  void validate() const;
};

enum class LPStatus { optimal, infeasible, unbounded, iteration_limit };

std::string_view to_string(LPStatus status) noexcept;

struct LPSolution {
  LPStatus status = LPStatus::iteration_limit;
  Vector primal;
  double objective_value = 0.0;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  /// Feasibility and optimality tolerance.
  double tol = 1e-9;
  /// Candidate pivots with magnitude at or below this are rejected.
  double pivot_tol = 1e-11;
  std::size_t max_iter = 100000;
  /// Consecutive degenerate pivots tolerated under the largest-coefficient
  /// rule before falling back to Bland's rule.
  std::size_t degenerate_limit = 50;
};

/// Dense two-phase tableau simplex.
///
/// Entering variables are chosen by the largest reduced cost; after
/// `degenerate_limit` consecutive degenerate pivots the solver switches to
/// Bland's smallest-index rule until the objective moves again, which rules
/// out cycling. All tie-breaks are index based, so the returned vertex is a
/// deterministic function of the instance.
LPSolution solve_lp(const LPProblem& problem, const SimplexOptions& options);

inline LPSolution solve_lp(const LPProblem& problem, double tol = 1e-9, std::size_t max_iter = 100000) {
  SimplexOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  return solve_lp(problem, options);
}

/// Largest violation max_i (A x - b)_i^+ together with max_j (-x_j)^+.
double constraint_violation(const LPProblem& problem, std::span<const double> x);

}  // namespace tsdantzig
