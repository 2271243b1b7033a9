#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "schirn/data.hpp"
#include "schirn/error.hpp"

using namespace schirn;
namespace fs = std::filesystem;

namespace {

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("schirn_test_data_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_SUITE("pml_data") {
  TEST_CASE("parse a binary label matrix") {
    const Matrix M = parse_matrix("2 3\n1 0 1\n0 1 0\n", MatrixKind::Labels);
    REQUIRE(M.rows() == 2);
    REQUIRE(M.cols() == 3);
    CHECK(M(0, 0) == 1);
    CHECK(M(0, 1) == 0);
    CHECK(M(1, 1) == 1);
    CHECK(is_binary(M));
  }

  TEST_CASE("label files reject non-binary entries with the line number") {
    const std::string msg = error_of([] { parse_matrix("1 1\n0.5\n", MatrixKind::Labels, "y.txt"); });
    CHECK(msg.find("y.txt:2:") != std::string::npos);
    CHECK(parse_matrix("1 1\n0.5\n", MatrixKind::Features)(0, 0) == 0.5);
  }

  TEST_CASE("row count mismatch is an error") {
    const std::string msg = error_of([] { parse_matrix("2 2\n1 0\n", MatrixKind::Labels, "m"); });
    CHECK(msg.find("m:") == 0);
    CHECK_THROWS_AS(parse_matrix("1 2\n1 0\n0 1\n", MatrixKind::Labels), InputError);
  }

  TEST_CASE("other malformed inputs") {
    CHECK_THROWS_AS(parse_matrix("", MatrixKind::Features), InputError);
    CHECK_THROWS_AS(parse_matrix("2\n1\n1\n", MatrixKind::Features), InputError);
    CHECK_THROWS_AS(parse_matrix("1 2\n1\n", MatrixKind::Features), InputError);
    CHECK_THROWS_AS(parse_matrix("1 2\n1 2 3\n", MatrixKind::Features), InputError);
    CHECK_THROWS_AS(parse_matrix("1 1\nabc\n", MatrixKind::Features), InputError);
    CHECK_THROWS_AS(parse_matrix("1 1\nnan\n", MatrixKind::Features), InputError);
    CHECK_THROWS_AS(parse_matrix("0 1\n", MatrixKind::Features), InputError);
  }

  TEST_CASE("accepted variants of the text format") {
    Matrix M = parse_matrix("2 2\r\n1 0\r\n0 1\r\n", MatrixKind::Labels);
    CHECK(M == Matrix::Identity(2, 2));
    M = parse_matrix("1 3\n1e-3 -2.5 4", MatrixKind::Features);
    CHECK(M(0, 0) == 1e-3);
    CHECK(M(0, 1) == -2.5);
    CHECK(M(0, 2) == 4);
    M = parse_matrix("1 2\n1\t 2\n\n", MatrixKind::Features);
    CHECK(M(0, 1) == 2);
  }

  TEST_CASE("missing file") {
    const std::string msg = error_of([] { load_matrix("/nonexistent/schirn/x.txt"); });
    CHECK(msg.find("file not found") != std::string::npos);
  }

  TEST_CASE("save and load round-trip") {
    const fs::path dir = scratch_dir("roundtrip");
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
      Matrix A = oracle::gaussian(rng, oracle::dim(rng, 1, 9), oracle::dim(rng, 1, 9));
      A *= std::pow(10.0, static_cast<double>(oracle::dim(rng, 0, 40)) - 20.0);
      save_matrix(dir / "a.txt", A);
      CHECK(load_matrix(dir / "a.txt") == A);
      const Matrix B = oracle::bernoulli(rng, A.rows(), A.cols());
      save_matrix(dir / "b.txt", B);
      CHECK(load_matrix(dir / "b.txt", MatrixKind::Labels) == B);
    }
  }

  TEST_CASE("format_matrix layout") {
    Matrix A(2, 2);
    A << 1, 0.1, -0.0, 2.5e-30;
    CHECK(format_matrix(A) == "2 2\n1 0.1\n0 2.5e-30\n");
  }

  TEST_CASE("inject_noise examples") {
    Matrix truth(1, 3);
    truth << 1, 1, 1;
    CHECK(inject_noise(truth, {2, 5}) == truth);

    truth.resize(1, 4);
    truth << 1, 0, 0, 0;
    CHECK(inject_noise(truth, {4, 5}) == Matrix::Ones(1, 4));

    Matrix t(3, 4);
    t << 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1;
    const Matrix y1 = inject_noise(t, {1, 42});
    const Matrix y2 = inject_noise(t, {1, 42});
    CHECK(y1 == y2);
    for (int i = 0; i < 3; ++i) CHECK((y1 - t).row(i).sum() == 1);
    CHECK_THROWS_AS(inject_noise(t, {-1, 0}), InputError);
  }

  TEST_CASE("inject_noise invariants over random truths, seeds and r") {
    Rng rng(123);
    for (int trial = 0; trial < 500; ++trial) {
      const Matrix t = oracle::bernoulli(rng, oracle::dim(rng, 1, 10), oracle::dim(rng, 1, 10), 0.3);
      const int r = oracle::dim(rng, 0, 12);
      const Matrix y = inject_noise(t, {r, rng.next()});
      const Matrix noise = y - t;
      CHECK(is_binary(y));
      CHECK(is_binary(noise));
      CHECK((noise.array() <= y.array()).all());
      for (Eigen::Index i = 0; i < t.rows(); ++i) {
        const double negatives = static_cast<double>(t.cols()) - t.row(i).sum();
        CHECK(noise.row(i).sum() == std::min<double>(r, negatives));
      }
    }
  }

  TEST_CASE("inject_noise picks every negative with equal frequency") {
    Matrix t = Matrix::Zero(1, 5);
    t(0, 0) = 1;
    std::vector<int> hits(5, 0);
    for (std::uint64_t seed = 0; seed < 4000; ++seed) {
      const Matrix y = inject_noise(t, {1, seed});
      for (int j = 0; j < 5; ++j) hits[j] += static_cast<int>(y(0, j) - t(0, j));
    }
    CHECK(hits[0] == 0);
    for (int j = 1; j < 5; ++j) {
      CHECK(hits[j] > 900);
      CHECK(hits[j] < 1100);
    }
  }

  TEST_CASE("kfold_split examples") {
    auto sizes = [](const FoldSplit& s) {
      std::vector<int> c(s.k, 0);
      for (int a : s.assignments) ++c.at(a);
      std::sort(c.begin(), c.end());
      return c;
    };
    CHECK(sizes(kfold_split(10, 5, 9)) == std::vector<int>{2, 2, 2, 2, 2});
    CHECK(sizes(kfold_split(11, 5, 9)) == std::vector<int>{2, 2, 2, 2, 3});
    CHECK(kfold_split(10, 5, 3).assignments == kfold_split(10, 5, 3).assignments);
    CHECK_THROWS_AS(kfold_split(4, 5, 0), InputError);
    CHECK_THROWS_AS(kfold_split(4, 1, 0), InputError);
  }

  TEST_CASE("kfold folds partition the samples") {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
      const int k = oracle::dim(rng, 2, 10);
      const int n = oracle::dim(rng, k, 60);
      const FoldSplit s = kfold_split(n, k, rng.next());
      REQUIRE(s.assignments.size() == static_cast<std::size_t>(n));
      std::vector<int> seen(n, 0);
      std::size_t smallest = n, largest = 0;
      for (int f = 0; f < k; ++f) {
        const auto test = s.test_rows(f);
        const auto train = s.train_rows(f);
        CHECK(test.size() + train.size() == static_cast<std::size_t>(n));
        for (int i : test) ++seen[i];
        const std::set<int> a(test.begin(), test.end());
        for (int i : train) CHECK(a.count(i) == 0);
        smallest = std::min(smallest, test.size());
        largest = std::max(largest, test.size());
      }
      CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
      CHECK(smallest >= 1);
      CHECK(largest - smallest <= 1);
    }
  }

  TEST_CASE("describe") {
    Dataset ds;
    ds.X = Matrix::Zero(2, 3);
    ds.Y.resize(2, 2);
    ds.Y << 1, 1, 1, 0;
    DatasetSummary s = describe(ds);
    CHECK(s.n == 2);
    CHECK(s.d == 3);
    CHECK(s.l == 2);
    CHECK(s.avg_candidate_labels == doctest::Approx(1.5));
    CHECK_FALSE(s.avg_true_labels.has_value());

    Matrix t(2, 2);
    t << 1, 0, 0, 0;
    ds.Y_true = t;
    s = describe(ds);
    REQUIRE(s.avg_true_labels.has_value());
    CHECK(*s.avg_true_labels == doctest::Approx(0.5));
  }

  TEST_CASE("dataset validation") {
    Dataset ds;
    ds.X = Matrix::Zero(2, 2);
    ds.Y = Matrix::Ones(2, 2);
    CHECK_NOTHROW(ds.validate());
    ds.Y_true = Matrix::Ones(2, 2);
    ds.Y(0, 0) = 0;
    CHECK_THROWS_AS(ds.validate(), InputError);
    ds.Y(0, 0) = 0.5;
    ds.Y_true.reset();
    CHECK_THROWS_AS(ds.validate(), InputError);
    ds.Y = Matrix::Ones(3, 2);
    CHECK_THROWS_AS(ds.validate(), InputError);
  }

  TEST_CASE("load_dataset with truth and empty-truth filtering") {
    const fs::path dir = scratch_dir("dataset");
    write_file(dir / "x.txt", "3 1\n1\n2\n3\n");
    write_file(dir / "y.txt", "3 2\n1 1\n0 1\n1 0\n");
    write_file(dir / "t.txt", "3 2\n1 0\n0 0\n1 0\n");
    Dataset ds = load_dataset(dir / "x.txt", dir / "y.txt", dir / "t.txt");
    CHECK(ds.n() == 3);
    ds = load_dataset(dir / "x.txt", dir / "y.txt", dir / "t.txt", true);
    REQUIRE(ds.n() == 2);
    CHECK(ds.X(1, 0) == 3);
    CHECK_THROWS_AS(load_dataset(dir / "x.txt", dir / "y.txt", std::nullopt, true), InputError);

    write_file(dir / "bad_truth.txt", "3 2\n1 0\n1 0\n1 0\n");
    CHECK_THROWS_AS(load_dataset(dir / "x.txt", dir / "y.txt", dir / "bad_truth.txt"), InputError);
  }

  TEST_CASE("standardize examples") {
    Matrix X(2, 2);
    X << 1, 5, 3, 5;
    const Matrix Z = standardize(X);
    CHECK(Z(0, 0) == doctest::Approx(-1.0));
    CHECK(Z(1, 0) == doctest::Approx(1.0));
    CHECK(Z(0, 1) == 0.0);
    CHECK(Z(1, 1) == 0.0);
  }

  TEST_CASE("standardize yields zero-mean unit-variance columns") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = oracle::dim(rng, 2, 40);
      const int d = oracle::dim(rng, 1, 8);
      Matrix X = oracle::gaussian(rng, n, d) * 7.0 + Matrix::Constant(n, d, 3.0);
      const Matrix Z = standardize(X);
      for (int j = 0; j < d; ++j) {
        const double mean = Z.col(j).sum() / n;
        CHECK(std::abs(mean) <= 1e-12);
        const double var = (Z.col(j).array() - mean).square().sum() / n;
        CHECK(var == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("column scaling learned on one split applies to another") {
    Matrix train(2, 1);
    train << 0, 2;
    Matrix test(1, 1);
    test << 4;
    const ColumnScaling s = ColumnScaling::fit(train);
    CHECK(s.apply(test)(0, 0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(s.apply(Matrix::Zero(1, 2)), InputError);
  }

  TEST_CASE("synthetic generator") {
    SyntheticSpec spec;
    spec.n = 40;
    spec.d = 6;
    spec.l = 5;
    const Dataset ds = make_synthetic(spec);
    CHECK_NOTHROW(ds.validate());
    REQUIRE(ds.Y_true.has_value());
    CHECK(numerical_rank(*ds.Y_true) == 5);
    for (int i = 0; i < ds.n(); ++i) CHECK(ds.Y_true->row(i).sum() >= 1);
    const Dataset again = make_synthetic(spec);
    CHECK(again.X == ds.X);
    CHECK(again.Y == ds.Y);
  }
}
