#include "tsdantzig/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "tsdantzig/error.hpp"
#include "tsdantzig/linalg.hpp"

namespace tsdantzig {

void LPProblem::validate() const {
  if (constraint_matrix.rows() != rhs.size())
    throw InvalidArgument("LPProblem: constraint rows differ from rhs length");
  if (constraint_matrix.cols() != objective.size())
    throw InvalidArgument("LPProblem: constraint columns differ from objective length");
  if (!constraint_matrix.all_finite()) throw InvalidArgument("LPProblem: non-finite constraint entry");
  for (double v : objective)
    if (!std::isfinite(v)) throw InvalidArgument("LPProblem: non-finite objective entry");
  for (double v : rhs)
    if (!std::isfinite(v)) throw InvalidArgument("LPProblem: non-finite rhs entry");
}

std::string_view to_string(LPStatus status) noexcept {
  switch (status) {
    case LPStatus::optimal: return "optimal";
    case LPStatus::infeasible: return "infeasible";
    case LPStatus::unbounded: return "unbounded";
    case LPStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

double constraint_violation(const LPProblem& problem, std::span<const double> x) {
  double worst = 0.0;
  for (double v : x) worst = std::max(worst, -v);
  const Vector ax = multiply(problem.constraint_matrix, x);
  for (std::size_t i = 0; i < ax.size(); ++i) worst = std::max(worst, ax[i] - problem.rhs[i]);
  return worst;
}

namespace {

// Columns: [0, n) structural, [n, n+m) slacks, [n+m, n+m+k) artificials,
// followed by the rhs. Rows: m constraints, then the phase-two and phase-one
// reduced-cost rows; the rhs entry of a cost row holds -objective.
class Tableau {
 public:
  Tableau(const LPProblem& lp, const SimplexOptions& options)
      : m_(lp.constraints()), n_(lp.variables()), options_(options) {
    for (double b : lp.rhs)
      if (b < 0.0) ++artificials_;
    width_ = n_ + m_ + artificials_ + 1;
    cells_.assign((m_ + 2) * width_, 0.0);
    basis_.resize(m_);

    std::size_t next_art = n_ + m_;
    for (std::size_t i = 0; i < m_; ++i) {
      double* r = row(i);
      const auto a = lp.constraint_matrix.row(i);
      const bool flip = lp.rhs[i] < 0.0;
      const double sign = flip ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) r[j] = sign * a[j];
      r[n_ + i] = sign;
      r[rhs_col()] = sign * lp.rhs[i];
      if (flip) {
        r[next_art] = 1.0;
        artificial_rows_.push_back(i);
        basis_[i] = next_art++;
      } else {
        basis_[i] = n_ + i;
      }
    }
    double* phase2 = row(m_);
    for (std::size_t j = 0; j < n_; ++j) phase2[j] = lp.objective[j];
    double* phase1 = row(m_ + 1);
    for (std::size_t i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      const double* r = row(i);
      for (std::size_t j = 0; j < n_ + m_; ++j) phase1[j] -= r[j];
      phase1[rhs_col()] -= r[rhs_col()];
    }
  }

  std::size_t artificials() const noexcept { return artificials_; }
  std::size_t iterations() const noexcept { return iterations_; }

  enum class Outcome { optimal, unbounded, iteration_limit };

  // Runs the simplex on the given cost row over columns [0, n+m).
  Outcome run(std::size_t cost_row) {
    const std::size_t limit = n_ + m_;
    std::size_t degenerate_run = 0;
    bool bland = false;
    std::vector<char> rejected(limit, 0);
    while (true) {
      if (iterations_ >= options_.max_iter) return Outcome::iteration_limit;
      const double* cost = row(cost_row);
      std::optional<std::size_t> entering;
      double best = -options_.tol;
      for (std::size_t j = 0; j < limit; ++j) {
        if (rejected[j] || cost[j] >= best) continue;
        entering = j;
        if (bland) break;
        best = cost[j];
      }
      if (!entering) return Outcome::optimal;

      const std::size_t q = *entering;
      std::optional<std::size_t> leaving;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double* r = row(i);
        const double a = r[q];
        if (a <= options_.pivot_tol) continue;
        const double ratio = std::max(r[rhs_col()], 0.0) / a;
        if (!leaving || ratio < best_ratio - 1e-12 * (1.0 + best_ratio)) {
          leaving = i;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + 1e-12 * (1.0 + best_ratio)) {
          const bool take = bland ? basis_[i] < basis_[*leaving] : a > row(*leaving)[q];
          if (take) {
            leaving = i;
            best_ratio = std::min(best_ratio, ratio);
          }
        }
      }
      if (!leaving) {
        if (cost_row == m_) return Outcome::unbounded;
        // A phase-one ray cannot exist in exact arithmetic; drop the column.
        rejected[q] = 1;
        continue;
      }

      if (best_ratio <= options_.tol) {
        if (++degenerate_run >= options_.degenerate_limit) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      pivot(*leaving, q);
      ++iterations_;
    }
  }

  double objective_value(std::size_t cost_row) const { return -row(cost_row)[rhs_col()]; }
  std::size_t phase_two_row() const noexcept { return m_; }
  std::size_t phase_one_row() const noexcept { return m_ + 1; }

  // Pivots basic artificials (at zero level) out on any usable column.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      const double* r = row(i);
      std::optional<std::size_t> best;
      double best_mag = options_.pivot_tol;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (std::abs(r[j]) > best_mag) {
          best_mag = std::abs(r[j]);
          best = j;
        }
      }
      if (best) pivot(i, *best);
    }
  }

  Vector primal() const {
    Vector x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = row(i)[rhs_col()];
    return x;
  }

  // Recomputes basic values from a fresh factorization of the basis.
  Vector refined_primal(const LPProblem& lp) const {
    DenseMatrix b(m_, m_);
    for (std::size_t k = 0; k < m_; ++k) {
      const std::size_t col = basis_[k];
      for (std::size_t i = 0; i < m_; ++i) {
        double v = 0.0;
        if (col < n_) {
          v = lp.constraint_matrix(i, col);
        } else if (col < n_ + m_) {
          v = (col - n_ == i) ? 1.0 : 0.0;
        } else if (artificial_rows_[col - n_ - m_] == i) {
          v = -1.0;  // artificial of a sign-flipped row, in original orientation
        }
        b(i, k) = v;
      }
    }
    const Vector xb = solve_linear_system(b, lp.rhs);
    Vector x(n_, 0.0);
    for (std::size_t k = 0; k < m_; ++k)
      if (basis_[k] < n_) x[basis_[k]] = xb[k];
    return x;
  }

 private:
  double* row(std::size_t i) noexcept { return cells_.data() + i * width_; }
  const double* row(std::size_t i) const noexcept { return cells_.data() + i * width_; }
  std::size_t rhs_col() const noexcept { return width_ - 1; }
  bool is_artificial(std::size_t col) const noexcept { return col >= n_ + m_; }

  void pivot(std::size_t r, std::size_t q) {
    double* pr = row(r);
    const double inv = 1.0 / pr[q];
    nonzeros_.clear();
    for (std::size_t j = 0; j < width_; ++j) {
      if (pr[j] == 0.0) continue;
      pr[j] *= inv;
      nonzeros_.push_back(j);
    }
    pr[q] = 1.0;
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      double* ri = row(i);
      const double f = ri[q];
      if (f == 0.0) continue;
      for (std::size_t j : nonzeros_) ri[j] -= f * pr[j];
      ri[q] = 0.0;
    }
    basis_[r] = q;
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t artificials_ = 0;
  std::size_t width_ = 0;
  SimplexOptions options_;
  std::vector<double> cells_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nonzeros_;
  std::vector<std::size_t> artificial_rows_;
  std::size_t iterations_ = 0;
};

}  // namespace

LPSolution solve_lp(const LPProblem& problem, const SimplexOptions& options) {
  problem.validate();
  if (!(options.tol > 0.0)) throw InvalidArgument("solve_lp: tolerance must be positive");

  Tableau tableau(problem, options);

  LPSolution solution;
  const double rhs_scale = std::max(1.0, norm_inf(problem.rhs));

  if (tableau.artificials() > 0) {
    const auto outcome = tableau.run(tableau.phase_one_row());
    solution.iterations = tableau.iterations();
    if (outcome == Tableau::Outcome::iteration_limit) {
      solution.status = LPStatus::iteration_limit;
      return solution;
    }
    if (tableau.objective_value(tableau.phase_one_row()) > options.tol * rhs_scale) {
      solution.status = LPStatus::infeasible;
      return solution;
    }
    tableau.expel_artificials();
  }

  const auto outcome = tableau.run(tableau.phase_two_row());
  solution.iterations = tableau.iterations();
  if (outcome == Tableau::Outcome::iteration_limit) {
    solution.status = LPStatus::iteration_limit;
    return solution;
  }
  if (outcome == Tableau::Outcome::unbounded) {
    solution.status = LPStatus::unbounded;
    return solution;
  }

  solution.status = LPStatus::optimal;
  solution.primal = tableau.primal();
  const double feas_tol = options.tol * rhs_scale;
  if (constraint_violation(problem, solution.primal) > feas_tol) {
    try {
      Vector refined = tableau.refined_primal(problem);
      if (constraint_violation(problem, refined) < constraint_violation(problem, solution.primal))
        solution.primal = std::move(refined);
    } catch (const SingularMatrixError&) {
      // keep the tableau values
    }
  }
  for (double& v : solution.primal)
    if (v < 0.0 && v > -feas_tol) v = 0.0;
  solution.objective_value = dot(problem.objective, solution.primal);
  return solution;
}

}  // namespace tsdantzig
