#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace tsdantzig {

using Vector = std::vector<double>;

/// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double value = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return entries_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return entries_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {entries_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {entries_.data() + r * cols_, cols_};
  }

  std::span<const double> entries() const noexcept { return entries_; }
  std::span<double> entries() noexcept { return entries_; }

  DenseMatrix transposed() const;
  bool all_finite() const noexcept;
  /// Largest |a_ij - a_ji|; zero for exactly symmetric matrices.
  double asymmetry() const noexcept;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double scale) noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator*(DenseMatrix lhs, double scale);
DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs);

/// y = A x
Vector multiply(const DenseMatrix& a, std::span<const double> x);
/// y = A^T x
Vector multiply_transposed(const DenseMatrix& a, std::span<const double> x);
/// x^T A x
double quadratic_form(const DenseMatrix& a, std::span<const double> x);

/// Entrywise max norm |A|_inf = max |a_ij|.
double max_abs(const DenseMatrix& a) noexcept;
/// |A|_{L^1}: maximum absolute column sum.
double matrix_l1_operator_norm(const DenseMatrix& a) noexcept;

double dot(std::span<const double> a, std::span<const double> b);
double norm1(std::span<const double> v) noexcept;
double norm2(std::span<const double> v) noexcept;
double norm_inf(std::span<const double> v) noexcept;
Vector subtract(std::span<const double> a, std::span<const double> b);

}  // namespace tsdantzig
