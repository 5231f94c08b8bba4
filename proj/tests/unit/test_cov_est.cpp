#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "tsdantzig/cov_est.hpp"
#include "tsdantzig/error.hpp"
#include "tsdantzig/process_sim.hpp"
#include "tsdantzig/random.hpp"

using namespace tsdantzig;

namespace {

double median(Vector v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

Vector series(std::initializer_list<double> v) { return Vector(v); }

}  // namespace

TEST_SUITE("cov_est") {
  TEST_CASE("sample_covariance examples") {
    SampleMatrix x{DenseMatrix::from_rows({{1.0, 0.0}, {-1.0, 0.0}})};
    const CovarianceEstimate s = sample_covariance(x, MeanMode::known_zero);
    CHECK(s.matrix == DenseMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}}));
    CHECK(s.n == 2);
    CHECK(s.mean_mode == MeanMode::known_zero);

    SampleMatrix c{DenseMatrix(5, 3, 2.5)};
    CHECK(max_abs(sample_covariance(c, MeanMode::estimated).matrix) == 0.0);

    const Vector mu{2.5, 2.5, 2.5};
    CHECK(max_abs(sample_covariance(c, MeanMode::known_mu, mu).matrix) == 0.0);
    CHECK_THROWS_AS(sample_covariance(c, MeanMode::known_mu), InvalidArgument);
  }

  TEST_CASE("sample_covariance of Gaussian noise is near the identity") {
    const std::size_t n = 10000;
    const SampleMatrix x = simulate(LinearProcessModel::white_noise(3), n, 31);
    const DenseMatrix s = sample_covariance(x, MeanMode::estimated).matrix;
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        const double se = (j == k ? std::sqrt(2.0) : 1.0) / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(s(j, k) - (j == k ? 1.0 : 0.0)) <= 5.0 * se);
      }
  }

  TEST_CASE("known-zero covariance equals a naive triple loop and is exactly symmetric") {
    const SampleMatrix x = simulate(build_model(7, 1.2, 0.3, 4, ModelOptions{.truncation = 10}), 13, 8);
    const DenseMatrix s = sample_covariance(x, MeanMode::known_zero).matrix;
    CHECK(s.asymmetry() == 0.0);
    for (std::size_t j = 0; j < 7; ++j)
      for (std::size_t k = 0; k < 7; ++k) {
        double v = 0.0;
        for (std::size_t i = 0; i < 13; ++i) v += x.data(i, j) * x.data(i, k);
        CHECK(s(j, k) == doctest::Approx(v / 13.0).epsilon(1e-13));
      }
    const DenseMatrix e = sample_covariance(x, MeanMode::estimated).matrix;
    CHECK(e.asymmetry() == 0.0);
  }

  TEST_CASE("sample covariance error shrinks with n for white noise") {
    const LinearProcessModel m = LinearProcessModel::white_noise(20);
    Vector med;
    for (std::size_t n : {100, 400, 1600}) {
      Vector err;
      for (std::uint64_t s = 0; s < 100; ++s)
        err.push_back(max_abs(sample_covariance(simulate(m, n, derive_seed(s, n)), MeanMode::known_zero).matrix -
                              DenseMatrix::identity(20)));
      med.push_back(median(err));
    }
    CHECK(med[1] < med[0]);
    CHECK(med[2] < med[1]);
  }

  TEST_CASE("sample_autocovariance examples") {
    CHECK(sample_autocovariance(series({1, 1, 1, 1}), 0) == 1.0);
    CHECK(sample_autocovariance(series({1, -1, 1, -1}), 1) == -0.75);
    CHECK(sample_autocovariance(series({1, -1, 1, -1}), -1) == -0.75);
    CHECK_THROWS_AS(sample_autocovariance(series({1, 2}), 2), InvalidArgument);
    const std::size_t n = 100000;
    const Vector w = draw_innovation(Innovation::gaussian, n, 12);
    CHECK(std::abs(sample_autocovariance(w, 3)) <= 5.0 / std::sqrt(static_cast<double>(n)));
  }

  TEST_CASE("flat-top kernel values") {
    const TaperSpec t = TaperSpec::trapezoid(4);
    CHECK(t.kappa(0.0) == 1.0);
    CHECK(t.kappa(1.0) == 1.0);
    CHECK(t.kappa(-1.0) == 1.0);
    CHECK(t.kappa(1.5) == 0.5);
    CHECK(t.kappa(-1.5) == 0.5);
    CHECK(t.kappa(2.0) == 0.0);
    CHECK(t.kappa(2.0001) == 0.0);
    for (int i = 0; i <= 10000; ++i) {
      const double x = -3.0 + 6.0 * i / 10000.0;
      const double k = t.kappa(x);
      if (std::abs(x) <= 1.0) {
        CHECK(k == 1.0);
      } else if (std::abs(x) <= 2.0) {
        CHECK(k == 2.0 - std::abs(x));
        if (std::abs(x) > 1.0) CHECK(std::abs(k) < 1.0);
      } else {
        CHECK(k == 0.0);
      }
    }
    TaperSpec custom{3, 3.0, [](double x) { return (3.0 - x) / 2.0; }};
    CHECK_NOTHROW(custom.validate());
    CHECK(custom.kappa(2.0) == 0.5);
    CHECK(custom.kappa(3.5) == 0.0);
    CHECK_THROWS_AS((TaperSpec{0, 2.0, {}}.validate()), InvalidArgument);
    CHECK_THROWS_AS((TaperSpec{1, 1.0, {}}.validate()), InvalidArgument);
  }

  TEST_CASE("flat-top autocovariances") {
    const Vector x = draw_innovation(Innovation::gaussian, 200, 44);
    const std::size_t l = 5;
    const ToeplitzAutocov g = flat_top_autocov_matrix(x, TaperSpec::trapezoid(l));
    REQUIRE(g.n() == 200);
    for (std::size_t s = 0; s < 200; ++s) {
      const double raw = sample_autocovariance(x, static_cast<std::ptrdiff_t>(s));
      if (s <= l) {
        CHECK(g.gamma_hat[s] == raw);
      } else if (s > 2 * l) {
        CHECK(g.gamma_hat[s] == 0.0);
      }
    }
    const ToeplitzAutocov even = flat_top_autocov_matrix(x, TaperSpec::trapezoid(4));
    CHECK(even.gamma_hat[6] == doctest::Approx(0.5 * sample_autocovariance(x, 6)).epsilon(1e-15));
    CHECK(g.at(-3) == g.at(3));
    CHECK(g.at(200) == 0.0);

    const DenseMatrix m = g.assemble();
    CHECK(m.asymmetry() == 0.0);
    for (std::size_t j = 0; j < 200; ++j)
      for (std::size_t k = 0; k < 200; ++k) CHECK(m(j, k) == g.gamma_hat[j > k ? j - k : k - j]);

    const Vector sh = g.shifted();
    REQUIRE(sh.size() == 200);
    for (std::size_t s = 0; s + 1 < 200; ++s) CHECK(sh[s] == g.gamma_hat[s + 1]);
    CHECK(sh[199] == 0.0);
  }

  TEST_CASE("bandwidth selection") {
    CHECK(select_bandwidth(Vector(100, 0.0)) == 1);
    CHECK_THROWS_AS(select_bandwidth(Vector(10, 1.0)), InvalidArgument);

    int small = 0;
    for (std::uint64_t s = 0; s < 100; ++s) small += select_bandwidth(draw_innovation(Innovation::gaussian, 2000, s)) <= 3;
    CHECK(small > 90);

    Vector wn, ar;
    for (std::uint64_t s = 0; s < 200; ++s) {
      const std::uint64_t seed = derive_seed(s, 77);
      wn.push_back(static_cast<double>(select_bandwidth(simulate_ar(ARModel::ar1(0.0), 500, seed))));
      ar.push_back(static_cast<double>(select_bandwidth(simulate_ar(ARModel::ar1(-0.5), 500, seed))));
    }
    CHECK(median(ar) > median(wn));

    const Vector trending = [] {
      Vector v(400);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 + 1e-3 * static_cast<double>(i);
      return v;
    }();
    CHECK(select_bandwidth(trending) <= 100);
  }

  TEST_CASE("mean mode names") {
    for (auto m : {MeanMode::known_zero, MeanMode::known_mu, MeanMode::estimated})
      CHECK(parse_mean_mode(to_string(m)) == m);
    CHECK_THROWS_AS(parse_mean_mode("median"), InvalidArgument);
  }
}
