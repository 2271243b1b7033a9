#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "schirn/error.hpp"
#include "schirn/metrics.hpp"

using namespace schirn;

namespace {

Matrix row(std::initializer_list<double> values) {
  Matrix M(1, static_cast<Eigen::Index>(values.size()));
  Eigen::Index j = 0;
  for (double v : values) M(0, j++) = v;
  return M;
}

// Random truth with at least one degenerate row now and then.
Matrix random_truth(Rng& rng, int n, int l) {
  Matrix t = oracle::bernoulli(rng, n, l);
  if (rng.uniform_index(5) == 0) t.row(rng.uniform_index(n)).setOnes();
  if (rng.uniform_index(5) == 0) t.row(rng.uniform_index(n)).setZero();
  return t;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("label ranks break ties by label index") {
    Vector s(4);
    s << 0.5, 0.9, 0.5, 0.1;
    CHECK(label_ranks(s) == std::vector<int>{2, 1, 3, 4});
  }

  TEST_CASE("average precision examples") {
    CHECK(average_precision(row({0.9, 0.8, 0.1}), row({1, 1, 0})) == 1.0);
    CHECK(average_precision(row({0.1, 0.9, 0.5}), row({1, 0, 0})) == doctest::Approx(1.0 / 3.0));
    const MetricReport r = evaluate_all(row({0.1, 0.2}), row({1, 1}), row({1, 1}));
    CHECK(r.average_precision == 0.0);
    CHECK(r.no_scorable_rows);
    CHECK(r.rows_scored == 0);
  }

  TEST_CASE("ranking loss examples") {
    CHECK(ranking_loss(row({0.9, 0.8, 0.1}), row({1, 1, 0})) == 0.0);
    CHECK(ranking_loss(row({0.2, 0.8}), row({1, 0})) == 1.0);
    CHECK(ranking_loss(row({0.5, 0.5}), row({1, 0})) == 1.0);
  }

  TEST_CASE("coverage examples") {
    CHECK(coverage(row({0.9, 0.8, 0.1, 0.0}), row({1, 1, 0, 0})) == doctest::Approx(0.25));
    CHECK(coverage(row({0.1, 0.5, 0.6, 0.7}), row({1, 0, 0, 0})) == doctest::Approx(0.75));
  }

  TEST_CASE("hamming loss examples") {
    const Matrix t = row({1, 0, 1, 0});
    CHECK(hamming_loss(t, t) == 0.0);
    CHECK(hamming_loss(Matrix::Ones(1, 4) - t, t) == 1.0);
    Matrix p(2, 2), q(2, 2);
    p << 1, 0, 0, 1;
    q << 1, 0, 1, 1;
    CHECK(hamming_loss(p, q) == 0.25);
  }

  TEST_CASE("one-error examples") {
    CHECK(one_error(row({0.9, 0.1}), row({1, 0})) == 0.0);
    CHECK(one_error(row({0.1, 0.9}), row({1, 0})) == 1.0);
    Matrix s(4, 3), t(4, 3);
    s << 0.9, 0.1, 0.2,  //
        0.1, 0.9, 0.2,   //
        0.3, 0.3, 0.1,   //
        0.2, 0.1, 0.7;
    t << 1, 0, 0,  //
        1, 0, 1,   //
        0, 1, 0,   //
        0, 1, 1;
    // argmax per row: 0 (relevant), 1 (not), 0 by tie rule (not), 2 (relevant)
    CHECK(one_error(s, t) == doctest::Approx(0.5));
  }

  TEST_CASE("degenerate rows are excluded and counted") {
    Matrix s(3, 2), t(3, 2);
    s << 0.9, 0.1, 0.2, 0.8, 0.5, 0.4;
    t << 1, 0, 1, 1, 0, 0;
    const MetricReport r = evaluate_all(s, t, t);
    CHECK(r.rows_total == 3);
    CHECK(r.rows_scored == 1);
    CHECK_FALSE(r.no_scorable_rows);
    CHECK(r.average_precision == 1.0);
    CHECK(r.hamming_loss == 0.0);
  }

  TEST_CASE("shape mismatches are input errors") {
    CHECK_THROWS_AS(average_precision(Matrix::Zero(2, 3), Matrix::Zero(2, 2)), InputError);
    CHECK_THROWS_AS(hamming_loss(Matrix::Zero(1, 3), Matrix::Zero(2, 3)), InputError);
    CHECK_THROWS_AS(evaluate_all(Matrix::Zero(2, 2), Matrix::Zero(2, 3), Matrix::Zero(2, 2)), InputError);
  }

  TEST_CASE("all metrics agree with brute-force enumeration on 1000 instances") {
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
      const int n = oracle::dim(rng, 1, 6);
      const int l = oracle::dim(rng, 1, 7);
      const Matrix t = random_truth(rng, n, l);
      const Matrix s = trial % 2 ? oracle::tied_scores(rng, n, l) : oracle::gaussian(rng, n, l);
      const Matrix p = oracle::bernoulli(rng, n, l);
      CHECK(std::abs(average_precision(s, t) - oracle::average_precision(s, t)) <= 1e-12);
      CHECK(std::abs(ranking_loss(s, t) - oracle::ranking_loss(s, t)) <= 1e-12);
      CHECK(std::abs(coverage(s, t) - oracle::coverage(s, t)) <= 1e-12);
      CHECK(std::abs(one_error(s, t) - oracle::one_error(s, t)) <= 1e-12);
      CHECK(hamming_loss(p, t) == oracle::hamming_loss(p, t));
    }
  }

  TEST_CASE("ranking metrics are invariant under strictly increasing maps") {
    Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
      const int n = oracle::dim(rng, 1, 8);
      const int l = oracle::dim(rng, 2, 9);
      const Matrix t = random_truth(rng, n, l);
      const Matrix s = trial % 2 ? oracle::tied_scores(rng, n, l) : oracle::gaussian(rng, n, l);
      const Matrix m = s.unaryExpr([](double x) { return std::exp(3.0 * x) + x * x * x - 7.0; });
      CHECK(average_precision(m, t) == average_precision(s, t));
      CHECK(ranking_loss(m, t) == ranking_loss(s, t));
      CHECK(coverage(m, t) == coverage(s, t));
      CHECK(one_error(m, t) == one_error(s, t));
    }
  }

  TEST_CASE("range, perfect-ranking equivalence and hamming symmetry") {
    Rng rng(6);
    for (int trial = 0; trial < 500; ++trial) {
      const int n = oracle::dim(rng, 1, 8);
      const int l = oracle::dim(rng, 2, 9);
      const Matrix t = random_truth(rng, n, l);
      const Matrix s = oracle::gaussian(rng, n, l);
      const Matrix p = oracle::bernoulli(rng, n, l);
      const MetricReport r = evaluate_all(s, p, t);
      for (double v : {r.average_precision, r.ranking_loss, r.coverage, r.hamming_loss, r.one_error}) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK_FALSE(std::isnan(v));
      }
      if (!r.no_scorable_rows) CHECK((r.average_precision == 1.0) == (r.ranking_loss == 0.0));
      CHECK(hamming_loss(p, t) == hamming_loss(t, p));
    }
  }
}
