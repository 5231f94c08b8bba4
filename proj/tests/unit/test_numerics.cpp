#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tsdantzig/error.hpp"
#include "tsdantzig/linalg.hpp"
#include "tsdantzig/simplex.hpp"

using namespace tsdantzig;

namespace {

DenseMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::normal_distribution<double> z(0.0, 1.0);
  DenseMatrix a(r, c);
  for (double& v : a.entries()) v = z(rng);
  return a;
}

DenseMatrix random_spd(std::mt19937_64& rng, std::size_t n) {
  const DenseMatrix g = random_matrix(rng, n, n);
  DenseMatrix a = g * g.transposed();
  for (std::size_t i = 0; i < n; ++i) a(i, i) += static_cast<double>(n);
  return a;
}

}  // namespace

TEST_SUITE("numerics") {
  TEST_CASE("dense matrix construction and shape checks") {
    CHECK_THROWS_AS(DenseMatrix(2, 2, std::vector<double>{1.0, 2.0, 3.0}), InvalidArgument);
    CHECK_THROWS_AS(DenseMatrix::from_rows({{1.0, 2.0}, {3.0}}), InvalidArgument);
    const DenseMatrix a = DenseMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    CHECK(a.transposed()(0, 1) == 3.0);
    CHECK(a.all_finite());
    CHECK(a.asymmetry() == 1.0);
    CHECK_THROWS_AS(a * DenseMatrix(3, 3), InvalidArgument);
    DenseMatrix b = a;
    b(0, 0) = std::nan("");
    CHECK_FALSE(b.all_finite());
  }

  TEST_CASE("solve_linear_system examples") {
    const Vector x = solve_linear_system(DenseMatrix::identity(3), Vector{1.0, 2.0, 3.0});
    CHECK(x == Vector{1.0, 2.0, 3.0});
    const Vector y = solve_linear_system(DenseMatrix::from_rows({{2.0, 0.0}, {0.0, 4.0}}), Vector{2.0, 8.0});
    CHECK(y == Vector{1.0, 2.0});
    CHECK_THROWS_AS(solve_linear_system(DenseMatrix::from_rows({{1.0, 2.0}, {2.0, 4.0}}), Vector{1.0, 1.0}),
                    SingularMatrixError);
    CHECK_THROWS_AS(solve_linear_system(DenseMatrix(2, 3), Vector{1.0, 1.0}), InvalidArgument);
  }

  TEST_CASE("random well-conditioned systems satisfy the residual bound") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 20; ++rep) {
      DenseMatrix a = random_matrix(rng, 10, 10);
      for (std::size_t i = 0; i < 10; ++i) a(i, i) += 10.0;
      const DenseMatrix bm = random_matrix(rng, 10, 1);
      const Vector b(bm.entries().begin(), bm.entries().end());
      const Vector x = solve_linear_system(a, b);
      const Vector r = subtract(multiply(a, x), b);
      CHECK(norm_inf(r) <= 1e-12 * (1.0 + norm_inf(b)));
    }
  }

  TEST_CASE("matrix_l1_operator_norm") {
    CHECK(matrix_l1_operator_norm(DenseMatrix::identity(7)) == 1.0);
    CHECK(matrix_l1_operator_norm(DenseMatrix::from_rows({{1.0, -2.0}, {3.0, 4.0}})) == 6.0);
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 10; ++rep) {
      const DenseMatrix a = random_matrix(rng, 6, 9);
      double naive = 0.0;
      for (std::size_t j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
        naive = std::max(naive, s);
      }
      CHECK(matrix_l1_operator_norm(a) == doctest::Approx(naive).epsilon(1e-15));
    }
  }

  TEST_CASE("invert_matrix") {
    CHECK(invert_matrix(DenseMatrix::identity(4)) == DenseMatrix::identity(4));
    const DenseMatrix d = invert_matrix(DenseMatrix::from_rows({{2.0, 0.0}, {0.0, 4.0}}));
    CHECK(d == DenseMatrix::from_rows({{0.5, 0.0}, {0.0, 0.25}}));
    std::mt19937_64 rng(3);
    const DenseMatrix a = random_spd(rng, 20);
    const DenseMatrix prod = a * invert_matrix(a);
    CHECK(max_abs(prod - DenseMatrix::identity(20)) <= 1e-8);
  }

  TEST_CASE("cholesky_lower reproduces the matrix") {
    std::mt19937_64 rng(8);
    const DenseMatrix a = random_spd(rng, 12);
    const DenseMatrix l = cholesky_lower(a);
    for (std::size_t i = 0; i < 12; ++i)
      for (std::size_t j = i + 1; j < 12; ++j) CHECK(l(i, j) == 0.0);
    CHECK(max_abs(l * l.transposed() - a) <= 1e-10 * max_abs(a));
    CHECK_THROWS_AS(cholesky_lower(DenseMatrix::from_rows({{1.0, 2.0}, {2.0, 1.0}})), SingularMatrixError);
  }

  TEST_CASE("solve_lp small examples") {
    LPProblem one{{1.0}, DenseMatrix::from_rows({{1.0}}), {3.0}};
    LPSolution s = solve_lp(one);
    REQUIRE(s.status == LPStatus::optimal);
    CHECK(s.primal[0] == 0.0);
    CHECK(s.objective_value == 0.0);

    LPProblem face{{-1.0, -1.0}, DenseMatrix::from_rows({{1.0, 1.0}}), {1.0}};
    s = solve_lp(face);
    REQUIRE(s.status == LPStatus::optimal);
    CHECK(s.objective_value == doctest::Approx(-1.0));
    CHECK(s.primal[0] + s.primal[1] == doctest::Approx(1.0));
  }

  TEST_CASE("solve_lp detects infeasible and unbounded programs") {
    LPProblem infeasible{{1.0}, DenseMatrix::from_rows({{-1.0}}), {-2.0}};
    infeasible.constraint_matrix = DenseMatrix::from_rows({{1.0}, {-1.0}});
    infeasible.rhs = {1.0, -2.0};
    CHECK(solve_lp(infeasible).status == LPStatus::infeasible);

    LPProblem unbounded{{-1.0, 0.0}, DenseMatrix::from_rows({{-1.0, 1.0}}), {1.0}};
    CHECK(solve_lp(unbounded).status == LPStatus::unbounded);
  }

  TEST_CASE("solve_lp reports iteration_limit instead of a wrong answer") {
    LPProblem face{{-1.0, -1.0}, DenseMatrix::from_rows({{1.0, 1.0}}), {1.0}};
    SimplexOptions options;
    options.max_iter = 0;
    CHECK(solve_lp(face, options).status == LPStatus::iteration_limit);
  }

  TEST_CASE("solve_lp terminates on a classic cycling instance") {
    // Beale's example cycles under the textbook largest-coefficient rule.
    LPProblem beale{{-0.75, 150.0, -0.02, 6.0},
                    DenseMatrix::from_rows({{0.25, -60.0, -0.04, 9.0}, {0.5, -90.0, -0.02, 3.0}, {0.0, 0.0, 1.0, 0.0}}),
                    {0.0, 0.0, 1.0}};
    SimplexOptions options;
    options.degenerate_limit = 3;
    const LPSolution s = solve_lp(beale, options);
    REQUIRE(s.status == LPStatus::optimal);
    CHECK(s.objective_value == doctest::Approx(-0.05));
  }

  TEST_CASE("solve_lp matches vertex enumeration on random programs") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> dim(1, 5);
    for (int rep = 0; rep < 20; ++rep) {
      const std::size_t d = dim(rng);
      const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
      const LPProblem lp = oracle::random_bounded_lp(rng, d, k);
      const auto ref = oracle::enumerate_vertices(lp);
      const LPSolution s = solve_lp(lp);
      CAPTURE(rep);
      if (!ref.feasible) {
        CHECK(s.status == LPStatus::infeasible);
        continue;
      }
      REQUIRE(s.status == LPStatus::optimal);
      CHECK(std::abs(s.objective_value - static_cast<double>(ref.objective)) <= 1e-8);
      CHECK(constraint_violation(lp, s.primal) <= 1e-9);
    }
  }

  TEST_CASE("optimal primal respects the feasibility tolerance") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 30; ++rep) {
      const LPProblem lp = oracle::random_bounded_lp(rng, 6, 10);
      const LPSolution s = solve_lp(lp, 1e-9);
      if (s.status != LPStatus::optimal) continue;
      CHECK(constraint_violation(lp, s.primal) <= 1e-9);
      for (double v : s.primal) CHECK(v >= -1e-9);
    }
  }
}
