#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "tsdantzig/classify.hpp"
#include "tsdantzig/error.hpp"
#include "tsdantzig/random.hpp"

using namespace tsdantzig;

namespace {

// Class means (+-1, 0) with centered rows (+-1, +-1): pooled covariance is exactly I.
SampleMatrix square_class(double shift) {
  SampleMatrix m{DenseMatrix(4, 2)};
  const double d[4][2] = {{1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
  for (std::size_t i = 0; i < 4; ++i) {
    m.data(i, 0) = shift + d[i][0];
    m.data(i, 1) = d[i][1];
  }
  return m;
}

SampleMatrix gaussian(std::size_t n, const Vector& mean, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  SampleMatrix m{DenseMatrix(n, mean.size())};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < mean.size(); ++j) m.data(i, j) = mean[j] + z(rng);
  return m;
}

std::vector<Label> predict_rows(const RLDAModel& model, const SampleMatrix& x) {
  std::vector<Label> out;
  for (std::size_t i = 0; i < x.n(); ++i) out.push_back(classify_score(model, x.data.row(i)).label);
  return out;
}

}  // namespace

TEST_SUITE("classify") {
  TEST_CASE("identity covariance gives direction 2 e1") {
    const SampleMatrix P = square_class(1.0), S = square_class(-1.0);
    const DenseMatrix pooled = pooled_covariance(P, S);
    CHECK(pooled == DenseMatrix::identity(2));
    const RLDAModel f = fit_rlda(P, S, 0.0, RldaMode::functional);
    CHECK(f.direction[0] == doctest::Approx(2.0));
    CHECK(f.direction[1] == doctest::Approx(0.0));
    CHECK(f.log_prior == 0.0);
    const RLDAModel g = fit_rlda(P, S, 0.0, RldaMode::gnb);
    CHECK(g.direction == Vector{2.0, 0.0});

    CHECK(classify_score(f, Vector{1.0, 0.0}).score == doctest::Approx(-2.0));
    CHECK(classify_score(f, Vector{1.0, 0.0}).label == Label::P);
    CHECK(classify_score(f, Vector{-1.0, 0.0}).label == Label::S);
    CHECK(classify_score(f, Vector{0.0, 5.0}).label == Label::P);
    CHECK_THROWS_AS(classify_score(f, Vector{1.0}), InvalidArgument);

    // lambda >= |b|_inf shrinks the functional direction to zero.
    CHECK(fit_rlda(P, S, 2.0, RldaMode::functional).direction == Vector{0.0, 0.0});
  }

  TEST_CASE("identical class means give a zero direction") {
    const SampleMatrix a = square_class(0.0);
    const RLDAModel m = fit_rlda(a, a, 0.1, RldaMode::functional);
    CHECK(m.direction == Vector{0.0, 0.0});
    CHECK(classify_score(m, Vector{3.0, -2.0}).score == 0.0);
    CHECK(classify_score(m, Vector{3.0, -2.0}).label == Label::P);
  }

  TEST_CASE("unequal class sizes enter through the prior") {
    const SampleMatrix P = square_class(1.0);
    SampleMatrix S{DenseMatrix(8, 2)};
    for (std::size_t i = 0; i < 8; ++i) std::ranges::copy(square_class(-1.0).data.row(i % 4), S.data.row(i).begin());
    const RLDAModel m = fit_rlda(P, S, 0.0, RldaMode::gnb);
    CHECK(m.log_prior == doctest::Approx(std::log(2.0)));
    CHECK(classify_score(m, Vector{0.0, 0.0}).label == Label::S);
  }

  TEST_CASE("swapping the class roles flips every non-tied decision") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const SampleMatrix P = gaussian(60, Vector{0.5, 0.0, 0.2, 0.0}, derive_seed(s, 1));
      const SampleMatrix S = gaussian(60, Vector{-0.5, 0.0, 0.0, 0.1}, derive_seed(s, 2));
      const SampleMatrix test = gaussian(40, Vector(4, 0.0), derive_seed(s, 3));
      for (RldaMode mode : {RldaMode::functional, RldaMode::gnb}) {
        const RLDAModel ps = fit_rlda(P, S, 0.05, mode);
        const RLDAModel sp = fit_rlda(S, P, 0.05, mode);
        for (std::size_t i = 0; i < test.n(); ++i) {
          const double a = classify_score(ps, test.data.row(i)).score;
          const double b = classify_score(sp, test.data.row(i)).score;
          CHECK(a == doctest::Approx(-b).epsilon(1e-9));
        }
      }
    }
  }

  TEST_CASE("accuracy bookkeeping") {
    const RLDAModel m = fit_rlda(square_class(1.0), square_class(-1.0), 0.0, RldaMode::gnb);
    SampleMatrix test{DenseMatrix::from_rows({{2.0, 0.0}, {0.5, 0.0}, {-1.0, 0.0}, {-3.0, 0.0}})};
    const std::vector<Label> labels{Label::P, Label::P, Label::S, Label::P};
    const ClassificationReport r = evaluate_accuracy(m, test, labels, 1);
    CHECK(r.accuracy == 0.75);
    CHECK(r.total == 4);
    CHECK(r.confusion[0][0] == 2);
    CHECK(r.confusion[0][1] == 1);
    CHECK(r.confusion[1][1] == 1);
    CHECK(r.confusion[1][0] == 0);

    const std::vector<Label> blocks{Label::P, Label::P, Label::S, Label::S};
    const ClassificationReport w = evaluate_accuracy(m, test, blocks, 2);
    CHECK(w.total == 2);
    CHECK(w.accuracy == 1.0);
    CHECK_THROWS_AS(evaluate_accuracy(m, test, blocks, 3), InvalidArgument);
    CHECK_THROWS_AS(evaluate_accuracy(m, test, blocks, 0), InvalidArgument);
    CHECK_THROWS_AS(evaluate_accuracy(m, test, labels, 2), InvalidArgument);
  }

  TEST_CASE("window 1 equals row-wise classification and counts add up") {
    const BlockDesign d = make_block_design(BlockDesignSpec{.p = 20}, 7);
    const RLDAModel m = fit_rlda(d.train_P, d.train_S, 0.05, RldaMode::functional, RldaOptions{.standardize = true});
    const std::vector<Label> rows = predict_rows(m, d.test);
    const ClassificationReport r = evaluate_accuracy(m, d.test, d.test_labels, 1);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) correct += rows[i] == d.test_labels[i];
    CHECK(r.accuracy == doctest::Approx(static_cast<double>(correct) / static_cast<double>(rows.size())));
    for (std::size_t window : {1, 2, 4, 8, 16}) {
      const ClassificationReport w = evaluate_accuracy(m, d.test, d.test_labels, window);
      CHECK(w.confusion[0][0] + w.confusion[0][1] + w.confusion[1][0] + w.confusion[1][1] == d.test.n() / window);
    }
  }

  TEST_CASE("random labels give chance accuracy") {
    double total = 0.0;
    const int reps = 60;
    for (int s = 0; s < reps; ++s) {
      const SampleMatrix P = gaussian(50, Vector(5, 0.0), derive_seed(s, 4));
      const SampleMatrix S = gaussian(50, Vector(5, 0.0), derive_seed(s, 5));
      const SampleMatrix test = gaussian(100, Vector(5, 0.0), derive_seed(s, 6));
      std::vector<Label> labels(100);
      std::mt19937_64 rng(derive_seed(s, 7));
      for (Label& l : labels) l = rng() % 2 ? Label::P : Label::S;
      total += evaluate_accuracy(fit_rlda(P, S, 0.0, RldaMode::gnb), test, labels, 1).accuracy;
    }
    CHECK(std::abs(total / reps - 0.5) < 0.05);
  }

  TEST_CASE("decisions are invariant to a common shift, and gnb to feature scaling") {
    const BlockDesign d = make_block_design(BlockDesignSpec{.p = 10}, 11);
    const Vector shift{3, -1, 0.5, 2, 0, 0, -4, 1, 1, 7};
    const Vector scale{1, 2, 0.5, 3, 10, 0.1, 1, 1, 4, 0.25};
    auto transform = [](SampleMatrix m, auto fn) {
      for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.p(); ++j) m.data(i, j) = fn(j, m.data(i, j));
      return m;
    };
    auto shifted = [&](const SampleMatrix& m) {
      return transform(m, [&](std::size_t j, double v) { return v + shift[j]; });
    };
    auto scaled = [&](const SampleMatrix& m) {
      return transform(m, [&](std::size_t j, double v) { return v * scale[j]; });
    };
    for (RldaMode mode : {RldaMode::functional, RldaMode::gnb}) {
      const RLDAModel base = fit_rlda(d.train_P, d.train_S, 0.05, mode);
      const RLDAModel moved = fit_rlda(shifted(d.train_P), shifted(d.train_S), 0.05, mode);
      CHECK(predict_rows(base, d.test) == predict_rows(moved, shifted(d.test)));
    }
    const RLDAModel g = fit_rlda(d.train_P, d.train_S, 0.0, RldaMode::gnb);
    const RLDAModel gs = fit_rlda(scaled(d.train_P), scaled(d.train_S), 0.0, RldaMode::gnb);
    CHECK(predict_rows(g, d.test) == predict_rows(gs, scaled(d.test)));
    const RldaOptions std_opts{.standardize = true};
    const RLDAModel f = fit_rlda(d.train_P, d.train_S, 0.05, RldaMode::functional, std_opts);
    const RLDAModel fs = fit_rlda(scaled(d.train_P), scaled(d.train_S), 0.05, RldaMode::functional, std_opts);
    CHECK(predict_rows(f, d.test) == predict_rows(fs, scaled(d.test)));
  }

  TEST_CASE("block design layout") {
    const BlockDesignSpec spec{.p = 12, .block_len = 4, .train_blocks = 6, .test_blocks = 8, .active = 3};
    const BlockDesign d = make_block_design(spec, 2);
    CHECK(d.train_P.n() + d.train_S.n() == 24);
    CHECK(d.train_P.n() == d.train_S.n());
    CHECK(d.test.n() == 32);
    CHECK(d.test.p() == 12);
    REQUIRE(d.test_labels.size() == 32);
    for (std::size_t b = 0; b < 8; ++b)
      for (std::size_t i = 1; i < 4; ++i) CHECK(d.test_labels[4 * b + i] == d.test_labels[4 * b]);
    CHECK(std::count(d.test_labels.begin(), d.test_labels.end(), Label::P) == 16);
    CHECK(std::count_if(d.mu_P.begin(), d.mu_P.end(), [](double v) { return v != 0.0; }) == 3);
    for (std::size_t j = 0; j < 12; ++j) CHECK(d.mu_S[j] == -d.mu_P[j]);
    CHECK(make_block_design(spec, 2).test.data == d.test.data);
  }

  TEST_CASE("select_rlda_lambda returns a grid point") {
    const BlockDesign d = make_block_design(BlockDesignSpec{.p = 15}, 3);
    const LambdaGrid grid = LambdaGrid::log_spaced(0.01, 0.5, 6);
    const double lambda = select_rlda_lambda(d.train_P, d.train_S, grid, 4);
    CHECK(std::find(grid.values.begin(), grid.values.end(), lambda) != grid.values.end());
    CHECK_THROWS_AS(select_rlda_lambda(d.train_P, d.train_S, grid, 1000), InvalidArgument);
  }

  TEST_CASE("labels and modes parse") {
    CHECK(parse_label("S") == Label::S);
    CHECK(parse_label("0") == Label::P);
    CHECK_THROWS_AS(parse_label("Q"), InvalidArgument);
    CHECK(parse_rlda_mode("gnb") == RldaMode::gnb);
    CHECK_THROWS_AS(parse_rlda_mode("qda"), InvalidArgument);
    CHECK(to_string(RldaMode::functional) == "functional");
  }
}
