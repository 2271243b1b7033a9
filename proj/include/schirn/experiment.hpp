#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "schirn/data.hpp"
#include "schirn/diagnostics.hpp"
#include "schirn/metrics.hpp"
#include "schirn/solver.hpp"

namespace schirn {

namespace fs = std::filesystem;

/// Everything a CLI command may need. Populated from a key=value config
/// file and/or same-named command-line flags (flags win).
struct ExperimentConfig {
  std::optional<fs::path> features;
  std::optional<fs::path> labels;
  std::optional<fs::path> truth;
  std::optional<fs::path> model;
  std::optional<fs::path> scores;
  std::optional<fs::path> pred;
  std::optional<fs::path> out;

  int noise_r = 0;
  std::uint64_t seed = 0;
  SchirnParams params;
  bool threshold_set = false;  // threshold given explicitly (overrides a saved model's)
  int folds = 5;
  int jobs = 1;
  bool standardize = false;
  bool filter_empty_truth = false;

  std::vector<double> grid_alpha;
  std::vector<double> grid_beta;
  std::vector<double> grid_lambda;

  // theorem-check
  int n = 20;
  int l = 20;
  int epsilon = 5;
  int trials = 1000;
};

/// Applies one setting. Keys are the long flag names without dashes, e.g.
/// "alpha", "c-shift", "grid-lambda" (comma-separated list). Throws
/// InputError for unknown keys or malformed values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Config file grammar: one `key = value` per line; blank lines and lines
/// starting with '#' are ignored; whitespace around key and value is
/// trimmed. Later lines override earlier ones.
void apply_config_text(ExperimentConfig& config, std::string_view text, std::string_view source = "<config>");
void load_config_file(ExperimentConfig& config, const fs::path& path);

/// Default search grids: alpha 0.1..2.0 step 0.1, beta 0.01..0.1 step 0.01,
/// lambda {0.1, 10, 100, 250, 1000}.
std::vector<double> default_grid_alpha();
std::vector<double> default_grid_beta();
std::vector<double> default_grid_lambda();

/// Runs fn(0..count-1) on up to `jobs` threads. Exceptions are rethrown,
/// lowest index first.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

// ---- cross-validation -------------------------------------------------------

struct FoldResult {
  int fold = 0;
  int n_test = 0;
  MetricReport metrics;
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation across folds
};

struct CvResult {
  std::vector<FoldResult> folds;
  MetricSummary average_precision;
  MetricSummary ranking_loss;
  MetricSummary coverage;
  MetricSummary hamming_loss;
  MetricSummary one_error;

  std::vector<double> per_fold_average_precision() const;
};

/// k-fold cv: fit on the candidate labels of the training folds, score the
/// held-out fold against its ground truth. Requires ds.Y_true.
CvResult cross_validate(const Dataset& ds, const SchirnParams& params, int folds, std::uint64_t seed,
                        bool standardize_features, int jobs);

struct GridRow {
  double alpha = 0.0;
  double beta = 0.0;
  double lambda = 0.0;
  CvResult cv;
  bool best = false;
};

/// Full Cartesian product (alpha outermost, lambda innermost), sorted by
/// mean average precision, descending; ties keep enumeration order.
std::vector<GridRow> grid_search(const Dataset& ds, const SchirnParams& base, const std::vector<double>& alphas,
                                 const std::vector<double>& betas, const std::vector<double>& lambdas, int folds,
                                 std::uint64_t seed, bool standardize_features, int jobs);

struct AblationRow {
  Variant variant = Variant::HighRank;
  CvResult cv;
  std::optional<TTestResult> vs_high_rank;  // on per-fold average precision
};

/// Same folds and parameters for HighRank, NoRank, NoSparsity, LowRank.
std::vector<AblationRow> ablate(const Dataset& ds, const SchirnParams& params, int folds, std::uint64_t seed,
                                bool standardize_features, int jobs);

// ---- persistence --------------------------------------------------------------

/// Writes <dir>/model.W.txt (matrix text format) and <dir>/model.meta
/// (key=value parameters and iteration count).
void save_model(const fs::path& dir, const Model& model);
Model load_model(const fs::path& dir);

std::string fit_report_json(const Model& model, const DatasetSummary& summary);
std::string metrics_json(const MetricReport& report, const SchirnParams& params);
std::string rank_report_json(const RankReport& report);
std::string theorem_check_json(const TheoremCheckResult& result, int n, int l, std::uint64_t seed);

std::string cv_csv(const CvResult& cv, const SchirnParams& params);
std::string cv_json(const CvResult& cv, const SchirnParams& params, int folds, std::uint64_t seed);
std::string grid_csv(const std::vector<GridRow>& rows, const SchirnParams& params);
std::string grid_json(const std::vector<GridRow>& rows, const SchirnParams& params, int folds, std::uint64_t seed);
std::string ablation_csv(const std::vector<AblationRow>& rows, const SchirnParams& params);
std::string ablation_json(const std::vector<AblationRow>& rows, const SchirnParams& params, int folds,
                          std::uint64_t seed);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

void write_text_file(const fs::path& path, std::string_view text);

}  // namespace schirn
