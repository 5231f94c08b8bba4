#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "tsdantzig/cov_est.hpp"
#include "tsdantzig/error.hpp"
#include "tsdantzig/model_io.hpp"
#include "tsdantzig/process_sim.hpp"
#include "tsdantzig/random.hpp"

using namespace tsdantzig;

namespace {

double mean(const Vector& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double variance(const Vector& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

double kurtosis(const Vector& v) {
  const double m = mean(v);
  double s2 = 0.0, s4 = 0.0;
  for (double x : v) {
    const double d = (x - m) * (x - m);
    s2 += d;
    s4 += d * d;
  }
  const double n = static_cast<double>(v.size());
  return (s4 / n) / ((s2 / n) * (s2 / n));
}

double median(Vector v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double row_norm(const DenseMatrix& a, std::size_t r) {
  double s = 0.0;
  for (double v : a.row(r)) s += v * v;
  return std::sqrt(s);
}

}  // namespace

TEST_SUITE("process_sim") {
  TEST_CASE("innovation laws are standardized") {
    const Vector g = draw_innovation(Innovation::gaussian, 1000000, 1);
    CHECK(std::abs(variance(g) - 1.0) <= 0.005);
    CHECK(std::abs(mean(g)) <= 0.005);

    const Vector u = draw_innovation(Innovation::uniform, 200000, 2);
    const double bound = std::sqrt(3.0);
    CHECK(std::all_of(u.begin(), u.end(), [&](double x) { return x >= -bound && x <= bound; }));
    CHECK(std::abs(variance(u) - 1.0) <= 0.01);

    const Vector e = draw_innovation(Innovation::double_exponential, 1000000, 3);
    CHECK(std::abs(variance(e) - 1.0) <= 0.01);
    CHECK(kurtosis(e) == doctest::Approx(6.0).epsilon(0.1));

    const Vector t = draw_innovation(Innovation::student_t3, 1000000, 4);
    CHECK(std::abs(variance(t) - 1.0) <= 0.1);
    const Vector t_small(t.begin(), t.begin() + 1000);
    CHECK(kurtosis(t) > kurtosis(t_small));
    CHECK(kurtosis(t) > 10.0);
  }

  TEST_CASE("parse_innovation round-trips and rejects unknown names") {
    for (auto law : {Innovation::uniform, Innovation::gaussian, Innovation::double_exponential, Innovation::student_t3})
      CHECK(parse_innovation(to_string(law)) == law);
    CHECK_THROWS_AS(parse_innovation("cauchy"), InvalidArgument);
  }

  TEST_CASE("build_model honours the decay bound and sparsity") {
    const LinearProcessModel m = build_model(100, 2.0, 0.8, 7, ModelOptions{.truncation = 60});
    REQUIRE(m.truncation() == 60);
    for (std::size_t k = 0; k <= m.truncation(); ++k) {
      const DenseMatrix& a = m.coefficients[k];
      std::size_t zeros = 0;
      for (double v : a.entries()) zeros += v == 0.0;
      CHECK(zeros == 8000);
      const double cap = m.c0 * std::pow(std::max<double>(1.0, static_cast<double>(k)), -2.0);
      for (std::size_t r = 0; r < 100; ++r) CHECK(row_norm(a, r) <= cap * (1.0 + 1e-12));
    }
    CHECK_NOTHROW(m.validate());
  }

  TEST_CASE("build_model is deterministic and shares draws across beta") {
    const ModelOptions o{.truncation = 20};
    const LinearProcessModel a = build_model(10, 2.0, 0.8, 99, o);
    const LinearProcessModel b = build_model(10, 2.0, 0.8, 99, o);
    for (std::size_t k = 0; k <= 20; ++k) CHECK(a.coefficients[k] == b.coefficients[k]);
    const LinearProcessModel c = build_model(10, 0.8, 0.8, 99, o);
    for (std::size_t k = 0; k <= 20; ++k)
      for (std::size_t i = 0; i < 100; ++i)
        CHECK((a.coefficients[k].entries()[i] == 0.0) == (c.coefficients[k].entries()[i] == 0.0));
  }

  TEST_CASE("an infinite beta gives an i.i.d. model") {
    const LinearProcessModel m = build_model(5, std::numeric_limits<double>::infinity(), 0.0, 1);
    for (std::size_t k = 1; k <= m.truncation(); ++k) CHECK(max_abs(m.coefficients[k]) == 0.0);
    CHECK(max_abs(true_autocovariance(m, 1)) == 0.0);
  }

  TEST_CASE("white noise simulation") {
    const LinearProcessModel m = LinearProcessModel::white_noise(3);
    const std::size_t n = 20000;
    const SampleMatrix x = simulate(m, n, 5);
    const Vector c0 = x.column(0);
    CHECK(std::abs(variance(c0) - 1.0) <= 3.0 / std::sqrt(static_cast<double>(n)) * std::sqrt(2.0));
    CHECK(max_abs(true_autocovariance(m, 0) - DenseMatrix::identity(3)) == 0.0);
    CHECK(max_abs(true_autocovariance(m, 2)) == 0.0);
  }

  TEST_CASE("a mean vector shifts the columns") {
    const LinearProcessModel base = LinearProcessModel::white_noise(4);
    const LinearProcessModel shifted = LinearProcessModel::white_noise(4, Innovation::gaussian, Vector(4, 5.0));
    const SampleMatrix a = simulate(base, 500, 3);
    const SampleMatrix b = simulate(shifted, 500, 3);
    for (std::size_t i = 0; i < 500; ++i)
      for (std::size_t j = 0; j < 4; ++j) CHECK(b.data(i, j) - a.data(i, j) == doctest::Approx(5.0));
  }

  TEST_CASE("true_autocovariance matches a long Monte Carlo run") {
    const LinearProcessModel m = build_model(3, 1.0, 0.0, 17, ModelOptions{.truncation = 2});
    const std::size_t n = 1000000;
    const SampleMatrix x = simulate(m, n, 23);
    for (std::size_t lag = 0; lag <= 3; ++lag) {
      const DenseMatrix sigma = true_autocovariance(m, lag);
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) {
          double s = 0.0, s2 = 0.0;
          const std::size_t count = n - lag;
          for (std::size_t i = 0; i < count; ++i) {
            const double v = x.data(i, j) * x.data(i + lag, k);
            s += v;
            s2 += v * v;
          }
          const double mean_v = s / static_cast<double>(count);
          // Products at nearby times are correlated (M = 2); widen the i.i.d.
          // standard error by the number of overlapping lags.
          const double se = std::sqrt((s2 / static_cast<double>(count) - mean_v * mean_v) / count) * std::sqrt(5.0);
          CAPTURE(lag);
          CHECK(std::abs(mean_v - sigma(j, k)) <= 3.0 * se + 1e-12);
        }
    }
  }

  TEST_CASE("ProcessSimulator agrees with simulate") {
    const LinearProcessModel m = build_model(6, 1.5, 0.5, 3, ModelOptions{.truncation = 30});
    const ProcessSimulator sim(m);
    CHECK(sim(50, 9).data == simulate(m, 50, 9).data);
  }

  TEST_CASE("sample covariance error shrinks from n = 100 to n = 200") {
    const LinearProcessModel m = build_model(100, 2.0, 0.8, 5, ModelOptions{.truncation = 200});
    const ProcessSimulator sim(m);
    const DenseMatrix sigma = true_autocovariance(m, 0);
    Vector e100, e200;
    for (std::uint64_t s = 0; s < 100; ++s) {
      e100.push_back(max_abs(sample_covariance(sim(100, derive_seed(s, 1)), MeanMode::known_zero).matrix - sigma));
      e200.push_back(max_abs(sample_covariance(sim(200, derive_seed(s, 2)), MeanMode::known_zero).matrix - sigma));
    }
    CHECK(median(e200) < median(e100));
  }

  TEST_CASE("AR simulation") {
    const std::size_t n = 5000;
    const Vector x = simulate_ar(ARModel::ar1(-0.5), n, 1);
    const double r1 = sample_autocovariance(x, 1) / sample_autocovariance(x, 0);
    CHECK(std::abs(r1 + 0.5) <= 3.0 / std::sqrt(static_cast<double>(n)));

    const Vector w = simulate_ar(ARModel::ar1(0.0), n, 2);
    CHECK(std::abs(sample_autocovariance(w, 1)) <= 4.0 / std::sqrt(static_cast<double>(n)));

    CHECK_THROWS_AS(simulate_ar(ARModel::ar1(1.5), 1000, 1), NumericalError);
  }

  TEST_CASE("AR(14) variance matches the exact Yule-Walker solution") {
    const ARModel ar = ARModel::ar14();
    REQUIRE(ar.order() == 14);
    // gamma_k - sum_j theta_j gamma_{|k-j|} = sigma^2 [k == 0], k = 0..14.
    const std::size_t p = 14;
    std::vector<std::vector<long double>> a(p + 1, std::vector<long double>(p + 1, 0.0L));
    std::vector<long double> rhs(p + 1, 0.0L);
    for (std::size_t k = 0; k <= p; ++k) {
      a[k][k] += 1.0L;
      for (std::size_t j = 1; j <= p; ++j) {
        const std::size_t lag = k > j ? k - j : j - k;
        a[k][lag] -= ar.coefficients[j - 1];
      }
    }
    rhs[0] = ar.noise_sd * ar.noise_sd;
    const auto gamma = oracle::solve_dense(a, rhs);
    const Vector lib = ar_autocovariance(ar, 14);
    for (std::size_t k = 0; k <= 14; ++k) CHECK(lib[k] == doctest::Approx(static_cast<double>(gamma[k])).epsilon(1e-9));

    Vector vars;
    for (std::uint64_t s = 0; s < 200; ++s) {
      const Vector x = simulate_ar(ar, 2000, derive_seed(s, 14));
      vars.push_back(sample_autocovariance(x, 0));
    }
    const double m = mean(vars);
    const double se = std::sqrt(variance(vars) / static_cast<double>(vars.size()));
    CHECK(std::abs(m - static_cast<double>(gamma[0])) <= 3.0 * se);
  }

  TEST_CASE("model JSON round-trip") {
    const LinearProcessModel m = build_model(4, 0.8, 0.5, 12, ModelOptions{.truncation = 5});
    const LinearProcessModel back = model_from_json(model_to_json(m));
    CHECK(back.p == m.p);
    CHECK(back.beta == m.beta);
    CHECK(back.seed == m.seed);
    CHECK(back.innovation == m.innovation);
    REQUIRE(back.coefficients.size() == m.coefficients.size());
    for (std::size_t k = 0; k < m.coefficients.size(); ++k) CHECK(back.coefficients[k] == m.coefficients[k]);
    const LinearProcessModel iid = build_model(2, std::numeric_limits<double>::infinity(), 0.0, 1,
                                               ModelOptions{.truncation = 1});
    CHECK(std::isinf(model_from_json(model_to_json(iid)).beta));
    CHECK_THROWS(model_from_json("{\"p\": 2}"));
  }
}
