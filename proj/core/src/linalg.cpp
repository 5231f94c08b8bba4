#include "tsdantzig/linalg.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "tsdantzig/error.hpp"

namespace tsdantzig {

LuDecomposition::LuDecomposition(DenseMatrix a, double pivot_threshold) : lu_(std::move(a)) {
  if (!lu_.square()) throw InvalidArgument("LU: matrix must be square");
  if (!lu_.all_finite()) throw InvalidArgument("LU: matrix has non-finite entries");
  const std::size_t n = lu_.rows();
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});

  const double scale = max_abs(lu_);
  const double threshold = pivot_threshold * scale;
  if (n > 0 && scale == 0.0) throw SingularMatrixError("LU: zero matrix");

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot_row = k;
    double pivot_mag = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double mag = std::abs(lu_(i, k));
      if (mag > pivot_mag) {
        pivot_mag = mag;
        pivot_row = i;
      }
    }
    if (pivot_mag < threshold) {
      throw SingularMatrixError("LU: pivot " + std::to_string(pivot_mag) + " below threshold at column " +
                                std::to_string(k));
    }
    if (pivot_row != k) {
      auto rk = lu_.row(k);
      auto rp = lu_.row(pivot_row);
      std::swap_ranges(rk.begin(), rk.end(), rp.begin());
      std::swap(perm_[k], perm_[pivot_row]);
    }
    const double pivot = lu_(k, k);
    const auto pivot_tail = lu_.row(k).subspan(k + 1);
    for (std::size_t i = k + 1; i < n; ++i) {
      double& factor = lu_(i, k);
      if (factor == 0.0) continue;
      factor /= pivot;
      auto tail = lu_.row(i).subspan(k + 1);
      for (std::size_t j = 0; j < tail.size(); ++j) tail[j] -= factor * pivot_tail[j];
    }
  }
}

Vector LuDecomposition::solve(std::span<const double> b) const {
  const std::size_t n = size();
  if (b.size() != n) throw InvalidArgument("LU solve: rhs length mismatch");
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = lu_.row(i);
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= r[j] * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    const auto r = lu_.row(i);
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= r[j] * x[j];
    x[i] = s / r[i];
  }
  return x;
}

DenseMatrix LuDecomposition::inverse() const {
  const std::size_t n = size();
  DenseMatrix inv(n, n);
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vector col = solve(e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    e[j] = 0.0;
  }
  return inv;
}

Vector solve_linear_system(const DenseMatrix& a, std::span<const double> b, double pivot_threshold) {
  if (a.rows() != b.size()) throw InvalidArgument("solve_linear_system: rhs length mismatch");
  return LuDecomposition(a, pivot_threshold).solve(b);
}

DenseMatrix invert_matrix(const DenseMatrix& a, double pivot_threshold) {
  return LuDecomposition(a, pivot_threshold).inverse();
}

DenseMatrix cholesky_lower(const DenseMatrix& a) {
  if (!a.square()) throw InvalidArgument("cholesky_lower: matrix must be square");
  const std::size_t n = a.rows();
  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) throw SingularMatrixError("cholesky_lower: matrix is not positive definite");
    const double root = std::sqrt(diag);
    l(j, j) = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / root;
    }
  }
  return l;
}

}  // namespace tsdantzig
