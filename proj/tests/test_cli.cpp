#include <filesystem>

#include "cli_runner.hpp"
#include "doctest.h"
#include "json.hpp"
#include "schirn/data.hpp"
#include "schirn/experiment.hpp"

using namespace schirn;

namespace {

struct Workspace {
  fs::path root;
  fs::path features;
  fs::path labels;
  fs::path truth;

  explicit Workspace(const std::string& name) : root(fs::temp_directory_path() / ("schirn_cli_" + name)) {
    fs::remove_all(root);
    fs::create_directories(root);
    SyntheticSpec spec;
    spec.n = 50;
    spec.d = 6;
    spec.l = 5;
    spec.noise_r = 1;
    spec.seed = 4;
    const Dataset ds = make_synthetic(spec);
    features = root / "x.txt";
    labels = root / "y.txt";
    truth = root / "t.txt";
    save_matrix(features, ds.X);
    save_matrix(labels, ds.Y);
    save_matrix(truth, *ds.Y_true);
  }

  cli::Result run(std::vector<std::string> args) const { return cli::run(args, root / "io"); }
  std::string p(const std::string& rel) const { return (root / rel).string(); }
};

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(cli::read_file(p)); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("help and usage errors") {
    const Workspace ws("usage");
    CHECK(ws.run({"--help"}).exit_code == 0);
    CHECK(ws.run({}).exit_code == 2);
    CHECK(ws.run({"frobnicate"}).exit_code == 2);
    CHECK(ws.run({"fit", "--alpha"}).exit_code == 2);
    const auto r = ws.run({"fit", "--features", ws.features.string(), "--labels", ws.labels.string(), "--out",
                           ws.p("m"), "--variant", "medium"});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("error") != std::string::npos);
  }

  TEST_CASE("fit writes a model and a parseable report") {
    const Workspace ws("fit");
    const auto r = ws.run({"fit", "--features", ws.features.string(), "--labels", ws.labels.string(), "--truth",
                           ws.truth.string(), "--out", ws.p("model"), "--max-iter", "20"});
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(ws.root / "model" / "model.W.txt"));
    CHECK(fs::exists(ws.root / "model" / "model.meta"));
    const auto report = read_json(ws.root / "model" / "fit_report.json");
    CHECK(report["objective_trace"].size() == 20);
  }

  TEST_CASE("missing feature file") {
    const Workspace ws("missing");
    const auto r = ws.run({"fit", "--features", ws.p("nope.txt"), "--labels", ws.labels.string(), "--out",
                           ws.p("model")});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("file not found") != std::string::npos);
  }

  TEST_CASE("malformed label file reports the line") {
    const Workspace ws("malformed");
    write_text_file(ws.root / "bad.txt", "2 2\n1 0\n0 2\n");
    const auto r = ws.run({"fit", "--features", ws.features.string(), "--labels", ws.p("bad.txt"), "--out",
                           ws.p("model")});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("bad.txt:3:") != std::string::npos);
  }

  TEST_CASE("zero iterations persist a zero model") {
    const Workspace ws("zero");
    const auto r = ws.run({"fit", "--features", ws.features.string(), "--labels", ws.labels.string(), "--out",
                           ws.p("model"), "--max-iter", "0"});
    REQUIRE(r.exit_code == 0);
    const Matrix W = load_matrix(ws.root / "model" / "model.W.txt");
    CHECK(W == Matrix::Zero(6, 5));
  }

  TEST_CASE("config file with flag override") {
    const Workspace ws("config");
    write_text_file(ws.root / "run.cfg", "features = " + ws.features.string() + "\nlabels = " +
                                             ws.labels.string() + "\nmax-iter = 7\nalpha = 0.5\n");
    const auto r = ws.run({"fit", "--config", ws.p("run.cfg"), "--max-iter", "3", "--out", ws.p("model")});
    REQUIRE(r.exit_code == 0);
    const auto report = read_json(ws.root / "model" / "fit_report.json");
    CHECK(report["objective_trace"].size() == 3);
    CHECK(report["params"]["alpha"] == 0.5);
  }

  TEST_CASE("inject, fit, predict, eval pipeline") {
    const Workspace ws("pipeline");
    REQUIRE(ws.run({"inject", "--truth", ws.truth.string(), "--r", "2", "--seed", "3", "--out", ws.p("y2.txt")})
                .exit_code == 0);
    const Matrix truth = load_matrix(ws.truth, MatrixKind::Labels);
    const Matrix y2 = load_matrix(ws.root / "y2.txt", MatrixKind::Labels);
    CHECK((y2 - truth).minCoeff() >= 0);
    CHECK(y2 == inject_noise(truth, {2, 3}));

    REQUIRE(ws.run({"fit", "--features", ws.features.string(), "--labels", ws.p("y2.txt"), "--standardize",
                    "--out", ws.p("model")})
                .exit_code == 0);
    CHECK(fs::exists(ws.root / "model" / "feature_scaling.txt"));
    REQUIRE(ws.run({"predict", "--model", ws.p("model"), "--features", ws.features.string(), "--out", ws.p("pred")})
                .exit_code == 0);
    const Matrix scores = load_matrix(ws.root / "pred" / "scores.txt");
    CHECK(scores.rows() == 50);
    CHECK(scores.cols() == 5);
    REQUIRE(ws.run({"eval", "--scores", ws.p("pred/scores.txt"), "--truth", ws.truth.string(), "--out",
                    ws.p("eval")})
                .exit_code == 0);
    const auto metrics = read_json(ws.root / "eval" / "metrics.json");
    const double ap = metrics["metrics"]["average_precision"];
    CHECK(ap > 0.0);
    CHECK(ap <= 1.0);
  }

  TEST_CASE("cv CSV shape") {
    const Workspace ws("cv");
    const auto r = ws.run({"cv", "--features", ws.features.string(), "--labels", ws.labels.string(), "--truth",
                           ws.truth.string(), "--folds", "5", "--max-iter", "10", "--out", ws.p("cv")});
    REQUIRE(r.exit_code == 0);
    const std::string csv = cli::read_file(ws.root / "cv" / "cv.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    CHECK(csv.find("\r\nmean,") != std::string::npos);
    CHECK(read_json(ws.root / "cv" / "cv.json")["per_fold"].size() == 5);
  }

  TEST_CASE("theorem-check and rank-report") {
    const Workspace ws("diag");
    auto r = ws.run({"theorem-check", "--n", "8", "--l", "6", "--epsilon", "3", "--trials", "20", "--seed", "1",
                     "--out", ws.p("thm")});
    REQUIRE(r.exit_code == 0);
    CHECK(read_json(ws.root / "thm" / "theorem_check.json")["violations"] == 0);

    REQUIRE(ws.run({"fit", "--features", ws.features.string(), "--labels", ws.labels.string(), "--out",
                    ws.p("model"), "--max-iter", "10"})
                .exit_code == 0);
    r = ws.run({"rank-report", "--model", ws.p("model"), "--features", ws.features.string(), "--labels",
                ws.labels.string(), "--truth", ws.truth.string(), "--out", ws.p("rank")});
    REQUIRE(r.exit_code == 0);
    const auto j = read_json(ws.root / "rank" / "rank_report.json");
    CHECK(j["rank_observed"] == 5);
  }

  TEST_CASE("repeated runs are byte-identical") {
    const Workspace ws("determinism");
    const std::vector<std::string> base = {"--features", ws.features.string(), "--truth", ws.truth.string(),
                                           "--r",        "1",                  "--seed",  "9",
                                           "--max-iter", "15",                 "--folds", "3"};
    for (const std::string cmd : {"cv", "ablate"}) {
      std::vector<std::string> args = {cmd};
      args.insert(args.end(), base.begin(), base.end());
      auto a = args, b = args;
      a.insert(a.end(), {"--out", ws.p(cmd + "_a")});
      b.insert(b.end(), {"--out", ws.p(cmd + "_b"), "--jobs", "3"});
      REQUIRE(ws.run(a).exit_code == 0);
      REQUIRE(ws.run(b).exit_code == 0);
      const auto first = cli::snapshot(ws.root / (cmd + "_a"));
      CHECK(first.size() == 2);
      CHECK(first == cli::snapshot(ws.root / (cmd + "_b")));
    }
  }
}
