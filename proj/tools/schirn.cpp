// Command-line harness: noise injection, fitting, prediction, evaluation,
// cross-validation, grid search, ablation and rank diagnostics.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "schirn/data.hpp"
#include "schirn/diagnostics.hpp"
#include "schirn/error.hpp"
#include "schirn/experiment.hpp"
#include "schirn/metrics.hpp"
#include "schirn/solver.hpp"

namespace {

using namespace schirn;

constexpr int kExitNumerical = 1;
constexpr int kExitInput = 2;

constexpr const char* kScalingFile = "feature_scaling.txt";

struct Option {
  const char* key;
  const char* help;
  bool is_flag = false;
};

const std::map<std::string, Option>& option_table() {
  static const std::map<std::string, Option> table = {
      {"features", {"features", "feature matrix file"}},
      {"labels", {"labels", "candidate label matrix file"}},
      {"truth", {"truth", "ground-truth label matrix file"}},
      {"model", {"model", "model directory written by 'fit'"}},
      {"scores", {"scores", "score matrix file"}},
      {"pred", {"pred", "binary prediction matrix file"}},
      {"out", {"out", "output directory (output file for 'inject')"}},
      {"r", {"r", "noisy labels added per sample"}},
      {"seed", {"seed", "random seed"}},
      {"alpha", {"alpha", "sparsity weight on the noise matrix"}},
      {"beta", {"beta", "weight of the nuclear-norm term"}},
      {"lambda", {"lambda", "ridge weight on W"}},
      {"mu0", {"mu0", "initial penalty"}},
      {"mu-max", {"mu-max", "penalty cap"}},
      {"rho", {"rho", "penalty growth factor"}},
      {"max-iter", {"max-iter", "iteration count"}},
      {"tol", {"tol", "early-stop relative primal residual (0 = off)"}},
      {"threshold", {"threshold", "score threshold for label prediction"}},
      {"variant", {"variant", "high-rank | low-rank | no-rank | no-sparsity"}},
      {"c-shift", {"c-shift", "paper | derived singular-value shift"}},
      {"folds", {"folds", "cross-validation folds"}},
      {"jobs", {"jobs", "concurrent fits"}},
      {"standardize", {"standardize", "standardize feature columns", true}},
      {"filter-empty-truth", {"filter-empty-truth", "drop samples with no ground-truth label", true}},
      {"grid-alpha", {"grid-alpha", "comma-separated alpha grid"}},
      {"grid-beta", {"grid-beta", "comma-separated beta grid"}},
      {"grid-lambda", {"grid-lambda", "comma-separated lambda grid"}},
      {"n", {"n", "rows of the random label matrix"}},
      {"l", {"l", "columns of the random label matrix"}},
      {"epsilon", {"epsilon", "nonzeros of the sparse perturbation"}},
      {"trials", {"trials", "Monte-Carlo trials"}},
  };
  return table;
}

const std::vector<std::string> kParamKeys = {"alpha", "beta",      "lambda",  "mu0",     "mu-max", "rho",
                                             "max-iter", "tol",    "threshold", "variant", "c-shift"};

// Registered options of one subcommand; values are applied on top of the
// --config file in a second pass.
struct Subcommand {
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  std::map<std::string, CLI::Option*> options;
};

Subcommand& add_subcommand(CLI::App& root, std::vector<std::unique_ptr<Subcommand>>& subs, const std::string& name,
                           const std::string& description, std::vector<std::string> keys) {
  auto& sub = *subs.emplace_back(std::make_unique<Subcommand>());
  sub.app = root.add_subcommand(name, description);
  sub.app->add_option("--config", sub.config_path, "key=value config file");
  for (const auto& key : keys) {
    const Option& opt = option_table().at(key);
    if (opt.is_flag) {
      sub.flags[key] = false;
      sub.options[key] = sub.app->add_flag("--" + key, sub.flags[key], opt.help);
    } else {
      sub.values[key];
      sub.options[key] = sub.app->add_option("--" + key, sub.values[key], opt.help);
    }
  }
  return sub;
}

ExperimentConfig build_config(const Subcommand& sub) {
  ExperimentConfig config;
  if (!sub.config_path.empty()) load_config_file(config, sub.config_path);
  for (const auto& [key, opt] : sub.options) {
    if (opt->count() == 0) continue;
    if (sub.flags.count(key)) {
      apply_setting(config, key, sub.flags.at(key) ? "true" : "false");
    } else {
      apply_setting(config, key, sub.values.at(key));
    }
  }
  return config;
}

template <class T>
const T& require(const std::optional<T>& value, const char* flag) {
  if (!value) throw InputError(std::string("missing required option --") + flag);
  return *value;
}

// Candidates come from --labels, or are injected into --truth with --r and
// --seed when no label file is given.
Dataset experiment_dataset(const ExperimentConfig& c) {
  const auto& features = require(c.features, "features");
  if (c.labels) return load_dataset(features, *c.labels, c.truth, c.filter_empty_truth);
  if (!c.truth) throw InputError("missing required option --labels (or --truth with --r)");
  Dataset ds;
  ds.X = load_matrix(features, MatrixKind::Features);
  ds.Y_true = load_matrix(*c.truth, MatrixKind::Labels);
  ds.Y = *ds.Y_true;
  ds.validate();
  if (c.filter_empty_truth) ds = filter_empty_truth(ds);
  ds.Y = inject_noise(*ds.Y_true, {c.noise_r, c.seed});
  return ds;
}

Matrix scaled_features(const fs::path& model_dir, Matrix X) {
  const auto path = model_dir / kScalingFile;
  if (!fs::exists(path)) return X;
  const Matrix stats = load_matrix(path, MatrixKind::Features);
  if (stats.rows() != 2) throw InputError(path.string() + ": expected 2 rows (mean, scale)");
  ColumnScaling scaling{stats.row(0).transpose(), stats.row(1).transpose()};
  return scaling.apply(X);
}

void print_summary(const std::string& label, const CvResult& cv) {
  std::cout << label << " average_precision=" << format_double(cv.average_precision.mean)
            << " ranking_loss=" << format_double(cv.ranking_loss.mean)
            << " coverage=" << format_double(cv.coverage.mean)
            << " hamming_loss=" << format_double(cv.hamming_loss.mean)
            << " one_error=" << format_double(cv.one_error.mean) << "\n";
}

int cmd_inject(const ExperimentConfig& c) {
  const Matrix truth = load_matrix(require(c.truth, "truth"), MatrixKind::Labels);
  const Matrix Y = inject_noise(truth, {c.noise_r, c.seed});
  const auto& out = require(c.out, "out");
  write_text_file(out, format_matrix(Y));
  std::cout << "wrote " << out.string() << " (" << format_double((Y - truth).sum()) << " noisy labels)\n";
  return 0;
}

int cmd_fit(const ExperimentConfig& c) {
  Dataset ds = experiment_dataset(c);
  const auto& out = require(c.out, "out");
  fs::create_directories(out);
  std::error_code ignored;
  fs::remove(out / kScalingFile, ignored);
  if (c.standardize) {
    const auto scaling = ColumnScaling::fit(ds.X);
    ds.X = scaling.apply(ds.X);
    Matrix stats(2, ds.d());
    stats.row(0) = scaling.mean.transpose();
    stats.row(1) = scaling.scale.transpose();
    save_matrix(out / kScalingFile, stats);
  }
  const Model model = fit(ds, c.params);
  save_model(out, model);
  write_text_file(out / "fit_report.json", fit_report_json(model, describe(ds)));
  std::cout << "fit: " << model.report.iterations_run << " iterations, final residual "
            << (model.report.primal_residual_trace.empty() ? std::string("n/a")
                                                           : format_double(model.report.primal_residual_trace.back()))
            << ", rank(XW)=" << model.report.final_rank_XW << "\n";
  return 0;
}

int cmd_predict(const ExperimentConfig& c) {
  const auto& model_dir = require(c.model, "model");
  Model model = load_model(model_dir);
  if (c.threshold_set) model.params.threshold = c.params.threshold;
  const Matrix X = scaled_features(model_dir, load_matrix(require(c.features, "features"), MatrixKind::Features));
  const Matrix scores = predict_scores(model, X);
  const auto& out = require(c.out, "out");
  fs::create_directories(out);
  save_matrix(out / "scores.txt", scores);
  save_matrix(out / "labels.txt", binarize(scores, model.params.threshold));
  std::cout << "predicted " << scores.rows() << " samples\n";
  return 0;
}

int cmd_eval(const ExperimentConfig& c) {
  const Matrix scores = load_matrix(require(c.scores, "scores"), MatrixKind::Features);
  const Matrix truth = load_matrix(require(c.truth, "truth"), MatrixKind::Labels);
  const Matrix pred = c.pred ? load_matrix(*c.pred, MatrixKind::Labels) : binarize(scores, c.params.threshold);
  const MetricReport report = evaluate_all(scores, pred, truth);
  const auto& out = require(c.out, "out");
  write_text_file(out / "metrics.json", metrics_json(report, c.params));
  std::cout << "average_precision=" << format_double(report.average_precision)
            << " ranking_loss=" << format_double(report.ranking_loss)
            << " coverage=" << format_double(report.coverage)
            << " hamming_loss=" << format_double(report.hamming_loss)
            << " one_error=" << format_double(report.one_error) << "\n";
  return 0;
}

int cmd_cv(const ExperimentConfig& c) {
  const Dataset ds = experiment_dataset(c);
  const auto& out = require(c.out, "out");
  const CvResult cv = cross_validate(ds, c.params, c.folds, c.seed, c.standardize, c.jobs);
  write_text_file(out / "cv.csv", cv_csv(cv, c.params));
  write_text_file(out / "cv.json", cv_json(cv, c.params, c.folds, c.seed));
  print_summary("cv mean:", cv);
  return 0;
}

int cmd_grid(const ExperimentConfig& c) {
  const Dataset ds = experiment_dataset(c);
  const auto& out = require(c.out, "out");
  const auto alphas = c.grid_alpha.empty() ? default_grid_alpha() : c.grid_alpha;
  const auto betas = c.grid_beta.empty() ? default_grid_beta() : c.grid_beta;
  const auto lambdas = c.grid_lambda.empty() ? default_grid_lambda() : c.grid_lambda;
  const auto rows = grid_search(ds, c.params, alphas, betas, lambdas, c.folds, c.seed, c.standardize, c.jobs);
  write_text_file(out / "grid.csv", grid_csv(rows, c.params));
  write_text_file(out / "grid.json", grid_json(rows, c.params, c.folds, c.seed));
  const auto& best = rows.front();
  std::cout << "grid: " << rows.size() << " combinations; best alpha=" << format_double(best.alpha)
            << " beta=" << format_double(best.beta) << " lambda=" << format_double(best.lambda) << "\n";
  print_summary("best mean:", best.cv);
  return 0;
}

int cmd_ablate(const ExperimentConfig& c) {
  const Dataset ds = experiment_dataset(c);
  const auto& out = require(c.out, "out");
  const auto rows = ablate(ds, c.params, c.folds, c.seed, c.standardize, c.jobs);
  write_text_file(out / "ablate.csv", ablation_csv(rows, c.params));
  write_text_file(out / "ablate.json", ablation_json(rows, c.params, c.folds, c.seed));
  for (const auto& r : rows) print_summary(std::string(to_string(r.variant)) + ":", r.cv);
  return 0;
}

int cmd_rank_report(const ExperimentConfig& c) {
  const auto& model_dir = require(c.model, "model");
  const Model model = load_model(model_dir);
  Dataset ds = load_dataset(require(c.features, "features"), require(c.labels, "labels"), c.truth,
                            c.filter_empty_truth);
  ds.X = scaled_features(model_dir, ds.X);
  const RankReport report = rank_report(model, ds);
  const auto& out = require(c.out, "out");
  write_text_file(out / "rank_report.json", rank_report_json(report));
  std::cout << "rank(XW)=" << report.rank_scores << " rank(labels)=" << report.rank_labels
            << " rank(Y)=" << report.rank_observed;
  if (report.rank_truth) std::cout << " rank(Y_true)=" << *report.rank_truth;
  std::cout << "\n";
  return 0;
}

int cmd_theorem_check(const ExperimentConfig& c) {
  const auto result = verify_rank_theorem(c.n, c.l, c.epsilon, c.trials, c.seed);
  const auto& out = require(c.out, "out");
  write_text_file(out / "theorem_check.json", theorem_check_json(result, c.n, c.l, c.seed));
  std::cout << "trials=" << result.trials << " violations=" << result.violations
            << " min_margin=" << result.min_observed_margin << "\n";
  return result.violations == 0 ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial multi-label learning with sparse noise and high-rank predictions"};
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Subcommand>> subs;
  auto with_params = [](std::vector<std::string> keys) {
    keys.insert(keys.end(), kParamKeys.begin(), kParamKeys.end());
    return keys;
  };
  const std::vector<std::string> data_keys = {"features", "labels", "truth", "r", "seed", "standardize",
                                              "filter-empty-truth", "out"};
  const std::vector<std::string> cv_keys = {"features", "labels", "truth", "r", "seed", "standardize",
                                            "filter-empty-truth", "folds", "jobs", "out"};
  auto grid_keys = cv_keys;
  grid_keys.insert(grid_keys.end(), {"grid-alpha", "grid-beta", "grid-lambda"});

  std::map<std::string, int (*)(const ExperimentConfig&)> handlers = {
      {"inject", cmd_inject}, {"fit", cmd_fit},   {"predict", cmd_predict},         {"eval", cmd_eval},
      {"cv", cmd_cv},         {"grid", cmd_grid}, {"ablate", cmd_ablate},           {"rank-report", cmd_rank_report},
      {"theorem-check", cmd_theorem_check}};

  add_subcommand(app, subs, "inject", "add r random negative labels per sample to a truth matrix",
                 {"truth", "r", "seed", "out"});
  add_subcommand(app, subs, "fit", "fit a model and write it with its fit report", with_params(data_keys));
  add_subcommand(app, subs, "predict", "score new samples with a fitted model",
                 {"model", "features", "threshold", "out"});
  add_subcommand(app, subs, "eval", "compute the five metrics for a score matrix",
                 {"scores", "pred", "truth", "threshold", "out"});
  add_subcommand(app, subs, "cv", "k-fold cross-validation", with_params(cv_keys));
  add_subcommand(app, subs, "grid", "grid search over alpha, beta, lambda by cv average precision",
                 with_params(grid_keys));
  add_subcommand(app, subs, "ablate", "cross-validate the four solver variants", with_params(cv_keys));
  add_subcommand(app, subs, "rank-report", "numerical ranks of predictions and label matrices",
                 {"model", "features", "labels", "truth", "filter-empty-truth", "out"});
  add_subcommand(app, subs, "theorem-check", "Monte-Carlo check of the sparse-perturbation rank bound",
                 {"n", "l", "epsilon", "trials", "seed", "out"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    for (const auto& sub : subs) {
      if (sub->app->parsed()) return handlers.at(sub->app->get_name())(build_config(*sub));
    }
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitInput;
}
