#pragma once

#include <span>

#include "tsdantzig/dense_matrix.hpp"

namespace tsdantzig {

/// Pivots smaller than this fraction of max|a_ij| are treated as singular.
inline constexpr double kDefaultPivotThreshold = 1e-11;

/// LU factorization with partial (row) pivoting, P A = L U.
class LuDecomposition {
 public:
  /// Throws SingularMatrixError when a pivot falls below
  /// pivot_threshold * max|a_ij|.
  explicit LuDecomposition(DenseMatrix a, double pivot_threshold = kDefaultPivotThreshold);

  std::size_t size() const noexcept { return lu_.rows(); }
  Vector solve(std::span<const double> b) const;
  DenseMatrix inverse() const;

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
};

/// Solves A x = b by Gaussian elimination with partial pivoting.
Vector solve_linear_system(const DenseMatrix& a, std::span<const double> b,
                           double pivot_threshold = kDefaultPivotThreshold);

DenseMatrix invert_matrix(const DenseMatrix& a, double pivot_threshold = kDefaultPivotThreshold);

/// Lower-triangular L with L L^T = A for symmetric positive definite A.
/// Throws SingularMatrixError when A is not numerically positive definite.
DenseMatrix cholesky_lower(const DenseMatrix& a);

}  // namespace tsdantzig
