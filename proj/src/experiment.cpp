#include "schirn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "schirn/error.hpp"
#include "schirn/random.hpp"

namespace schirn {

using Json = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw InputError("invalid value '" + std::string(value) + "' for " + std::string(key) + " (expected " +
                   std::string(expected) + ")");
}

double parse_double(std::string_view key, std::string_view value) {
  value = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    bad_value(key, value, "a number");
  }
  return out;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view value) {
  value = trim(value);
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value, "an integer");
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  value = trim(value);
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  bad_value(key, value, "true or false");
}

std::vector<double> parse_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    auto end = value.find(',', pos);
    if (end == std::string_view::npos) end = value.size();
    out.push_back(parse_double(key, value.substr(pos, end - pos)));
    pos = end + 1;
  }
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_field(fields[i]);
  }
  return out + "\r\n";
}

MetricSummary summarize(const std::vector<FoldResult>& folds, double MetricReport::*field) {
  MetricSummary s;
  const auto k = static_cast<double>(folds.size());
  for (const auto& f : folds) s.mean += f.metrics.*field;
  s.mean /= k;
  if (folds.size() > 1) {
    double ss = 0.0;
    for (const auto& f : folds) ss += (f.metrics.*field - s.mean) * (f.metrics.*field - s.mean);
    s.std = std::sqrt(ss / (k - 1.0));
  }
  return s;
}

Json params_json(const SchirnParams& p) {
  Json j;
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  j["lambda"] = p.lambda;
  j["mu0"] = p.mu0;
  j["mu_max"] = p.mu_max;
  j["rho"] = p.rho;
  j["max_iter"] = p.max_iter;
  j["tol"] = p.tol;
  j["variant"] = std::string(to_string(p.variant));
  j["c_shift_convention"] = std::string(to_string(p.c_shift));
  j["threshold"] = p.threshold;
  return j;
}

Json conventions_json(const SchirnParams& p) {
  Json j;
  j["rank_order"] = "descending score, ties by ascending label index";
  j["ranking_loss_ties"] = "counted as misordered";
  j["coverage_normalization"] = "divided by number of labels l";
  j["hamming_threshold"] = p.threshold;
  j["degenerate_rows"] = "all-zero or all-one truth rows excluded from ranking metrics";
  j["c_shift_convention"] = std::string(to_string(p.c_shift));
  return j;
}

Json metric_report_json(const MetricReport& r) {
  Json j;
  j["average_precision"] = r.average_precision;
  j["ranking_loss"] = r.ranking_loss;
  j["coverage"] = r.coverage;
  j["hamming_loss"] = r.hamming_loss;
  j["one_error"] = r.one_error;
  j["rows_total"] = r.rows_total;
  j["rows_scored"] = r.rows_scored;
  j["no_scorable_rows"] = r.no_scorable_rows;
  return j;
}

Json summary_json(const MetricSummary& s) {
  Json j;
  j["mean"] = s.mean;
  j["std"] = s.std;
  return j;
}

Json cv_summary_json(const CvResult& cv) {
  Json j;
  j["average_precision"] = summary_json(cv.average_precision);
  j["ranking_loss"] = summary_json(cv.ranking_loss);
  j["coverage"] = summary_json(cv.coverage);
  j["hamming_loss"] = summary_json(cv.hamming_loss);
  j["one_error"] = summary_json(cv.one_error);
  return j;
}

Json ttest_json(const TTestResult& t) {
  Json j;
  // Infinite statistics (zero-variance differences) serialize as null.
  j["t_stat"] = t.t_stat;
  j["p_value"] = t.p_value;
  j["mean_difference"] = t.mean_difference;
  j["verdict"] = std::string(to_string(t.verdict));
  return j;
}

const std::vector<std::string>& metric_columns() {
  static const std::vector<std::string> cols = {"average_precision", "ranking_loss", "coverage_over_l",
                                                "hamming_loss", "one_error"};
  return cols;
}

std::vector<const MetricSummary*> summaries(const CvResult& cv) {
  return {&cv.average_precision, &cv.ranking_loss, &cv.coverage, &cv.hamming_loss, &cv.one_error};
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v == 0.0 ? 0.0 : v);
  return std::string(buf, ptr);
}

void write_text_file(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw InputError(path.string() + ": write failed");
}

// ---- configuration --------------------------------------------------------------

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  auto& p = c.params;
  if (key == "features") c.features = fs::path(value);
  else if (key == "labels") c.labels = fs::path(value);
  else if (key == "truth") c.truth = fs::path(value);
  else if (key == "model") c.model = fs::path(value);
  else if (key == "scores") c.scores = fs::path(value);
  else if (key == "pred") c.pred = fs::path(value);
  else if (key == "out") c.out = fs::path(value);
  else if (key == "r") c.noise_r = parse_int<int>(key, value);
  else if (key == "seed") c.seed = parse_int<std::uint64_t>(key, value);
  else if (key == "alpha") p.alpha = parse_double(key, value);
  else if (key == "beta") p.beta = parse_double(key, value);
  else if (key == "lambda") p.lambda = parse_double(key, value);
  else if (key == "mu0") p.mu0 = parse_double(key, value);
  else if (key == "mu-max") p.mu_max = parse_double(key, value);
  else if (key == "rho") p.rho = parse_double(key, value);
  else if (key == "max-iter") p.max_iter = parse_int<int>(key, value);
  else if (key == "tol") p.tol = parse_double(key, value);
  else if (key == "threshold") {
    p.threshold = parse_double(key, value);
    c.threshold_set = true;
  }
  else if (key == "variant") p.variant = parse_variant(value);
  else if (key == "c-shift") p.c_shift = parse_c_shift(value);
  else if (key == "folds") c.folds = parse_int<int>(key, value);
  else if (key == "jobs") c.jobs = parse_int<int>(key, value);
  else if (key == "standardize") c.standardize = parse_bool(key, value);
  else if (key == "filter-empty-truth") c.filter_empty_truth = parse_bool(key, value);
  else if (key == "grid-alpha") c.grid_alpha = parse_list(key, value);
  else if (key == "grid-beta") c.grid_beta = parse_list(key, value);
  else if (key == "grid-lambda") c.grid_lambda = parse_list(key, value);
  else if (key == "n") c.n = parse_int<int>(key, value);
  else if (key == "l") c.l = parse_int<int>(key, value);
  else if (key == "epsilon") c.epsilon = parse_int<int>(key, value);
  else if (key == "trials") c.trials = parse_int<int>(key, value);
  else throw InputError("unknown setting '" + std::string(key) + "'");
}

void apply_config_text(ExperimentConfig& config, std::string_view text, std::string_view source) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InputError(std::string(source) + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      apply_setting(config, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const InputError& e) {
      throw InputError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void load_config_file(ExperimentConfig& config, const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": file not found or unreadable");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(config, buffer.str(), path.string());
}

std::vector<double> default_grid_alpha() {
  std::vector<double> v;
  for (int k = 1; k <= 20; ++k) v.push_back(k / 10.0);
  return v;
}

std::vector<double> default_grid_beta() {
  std::vector<double> v;
  for (int k = 1; k <= 10; ++k) v.push_back(k / 100.0);
  return v;
}

std::vector<double> default_grid_lambda() { return {0.1, 10.0, 100.0, 250.0, 1000.0}; }

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::clamp<long>(jobs, 1, static_cast<long>(std::max<std::size_t>(count, 1))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// ---- cross-validation -------------------------------------------------------------

std::vector<double> CvResult::per_fold_average_precision() const {
  std::vector<double> out;
  for (const auto& f : folds) out.push_back(f.metrics.average_precision);
  return out;
}

CvResult cross_validate(const Dataset& ds, const SchirnParams& params, int folds, std::uint64_t seed,
                        bool standardize_features, int jobs) {
  ds.validate();
  params.validate();
  if (!ds.Y_true) throw InputError("cross-validation needs ground-truth labels (--truth)");
  const FoldSplit split = kfold_split(ds.n(), folds, seed);

  CvResult cv;
  cv.folds.resize(static_cast<std::size_t>(folds));
  parallel_for(static_cast<std::size_t>(folds), jobs, [&](std::size_t f) {
    const int fold = static_cast<int>(f);
    Dataset train = ds.select_rows(split.train_rows(fold));
    Dataset test = ds.select_rows(split.test_rows(fold));
    if (standardize_features) {
      const auto scaling = ColumnScaling::fit(train.X);
      train.X = scaling.apply(train.X);
      test.X = scaling.apply(test.X);
    }
    const Model model = fit(train, params);
    const Matrix scores = predict_scores(model, test.X);
    const Matrix pred = binarize(scores, params.threshold);
    cv.folds[f] = FoldResult{fold, test.n(), evaluate_all(scores, pred, *test.Y_true)};
  });

  cv.average_precision = summarize(cv.folds, &MetricReport::average_precision);
  cv.ranking_loss = summarize(cv.folds, &MetricReport::ranking_loss);
  cv.coverage = summarize(cv.folds, &MetricReport::coverage);
  cv.hamming_loss = summarize(cv.folds, &MetricReport::hamming_loss);
  cv.one_error = summarize(cv.folds, &MetricReport::one_error);
  return cv;
}

std::vector<GridRow> grid_search(const Dataset& ds, const SchirnParams& base, const std::vector<double>& alphas,
                                 const std::vector<double>& betas, const std::vector<double>& lambdas, int folds,
                                 std::uint64_t seed, bool standardize_features, int jobs) {
  if (alphas.empty() || betas.empty() || lambdas.empty()) throw InputError("grid search: empty grid list");
  std::vector<GridRow> rows;
  for (double a : alphas)
    for (double b : betas)
      for (double l : lambdas) rows.push_back(GridRow{a, b, l, {}, false});

  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    SchirnParams p = base;
    p.alpha = rows[i].alpha;
    p.beta = rows[i].beta;
    p.lambda = rows[i].lambda;
    rows[i].cv = cross_validate(ds, p, folds, seed, standardize_features, 1);
  });

  std::stable_sort(rows.begin(), rows.end(), [](const GridRow& a, const GridRow& b) {
    return a.cv.average_precision.mean > b.cv.average_precision.mean;
  });
  rows.front().best = true;
  return rows;
}

std::vector<AblationRow> ablate(const Dataset& ds, const SchirnParams& params, int folds, std::uint64_t seed,
                                bool standardize_features, int jobs) {
  std::vector<AblationRow> rows = {{Variant::HighRank, {}, {}},
                                   {Variant::NoRank, {}, {}},
                                   {Variant::NoSparsity, {}, {}},
                                   {Variant::LowRank, {}, {}}};
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    SchirnParams p = params;
    p.variant = rows[i].variant;
    rows[i].cv = cross_validate(ds, p, folds, seed, standardize_features, 1);
  });
  const auto reference = rows.front().cv.per_fold_average_precision();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    // Win means the full method beats this variant.
    rows[i].vs_high_rank = paired_ttest(reference, rows[i].cv.per_fold_average_precision(), 0.05);
  }
  return rows;
}

// ---- persistence ------------------------------------------------------------------------

void save_model(const fs::path& dir, const Model& model) {
  fs::create_directories(dir);
  save_matrix(dir / "model.W.txt", model.W);
  const auto& p = model.params;
  std::string meta = "format=schirn-model-1\n";
  meta += "d=" + std::to_string(model.W.rows()) + "\n";
  meta += "l=" + std::to_string(model.W.cols()) + "\n";
  meta += "alpha=" + format_double(p.alpha) + "\n";
  meta += "beta=" + format_double(p.beta) + "\n";
  meta += "lambda=" + format_double(p.lambda) + "\n";
  meta += "mu0=" + format_double(p.mu0) + "\n";
  meta += "mu-max=" + format_double(p.mu_max) + "\n";
  meta += "rho=" + format_double(p.rho) + "\n";
  meta += "max-iter=" + std::to_string(p.max_iter) + "\n";
  meta += "tol=" + format_double(p.tol) + "\n";
  meta += "variant=" + std::string(to_string(p.variant)) + "\n";
  meta += "c-shift=" + std::string(to_string(p.c_shift)) + "\n";
  meta += "threshold=" + format_double(p.threshold) + "\n";
  meta += "iterations-run=" + std::to_string(model.report.iterations_run) + "\n";
  write_text_file(dir / "model.meta", meta);
}

Model load_model(const fs::path& dir) {
  Model model;
  model.W = load_matrix(dir / "model.W.txt", MatrixKind::Features);

  std::ifstream in(dir / "model.meta", std::ios::binary);
  if (!in) throw InputError((dir / "model.meta").string() + ": file not found or unreadable");
  std::map<std::string, std::string, std::less<>> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw InputError("model.meta: malformed line '" + std::string(t) + "'");
    kv[std::string(trim(t.substr(0, eq)))] = std::string(trim(t.substr(eq + 1)));
  }
  if (kv["format"] != "schirn-model-1") throw InputError("model.meta: unsupported format");
  if (parse_int<long>("d", kv["d"]) != model.W.rows() || parse_int<long>("l", kv["l"]) != model.W.cols()) {
    throw InputError("model.meta: dimensions disagree with model.W.txt");
  }
  ExperimentConfig scratch;
  for (const char* key : {"alpha", "beta", "lambda", "mu0", "mu-max", "rho", "max-iter", "tol", "variant",
                          "c-shift", "threshold"}) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw InputError(std::string("model.meta: missing key '") + key + "'");
    apply_setting(scratch, key, it->second);
  }
  model.params = scratch.params;
  model.report.iterations_run = parse_int<int>("iterations-run", kv["iterations-run"]);
  return model;
}

// ---- reports ----------------------------------------------------------------------------

std::string fit_report_json(const Model& model, const DatasetSummary& summary) {
  Json j;
  j["params"] = params_json(model.params);
  Json data;
  data["n"] = summary.n;
  data["d"] = summary.d;
  data["l"] = summary.l;
  data["avg_candidate_labels"] = summary.avg_candidate_labels;
  if (summary.avg_true_labels) data["avg_true_labels"] = *summary.avg_true_labels;
  j["dataset"] = data;
  j["iterations_run"] = model.report.iterations_run;
  j["final_rank_XW"] = model.report.final_rank_XW;
  j["noise_labels_flagged"] = static_cast<long>(model.noise.sum());
  j["objective_trace"] = model.report.objective_trace;
  j["primal_residual_trace"] = model.report.primal_residual_trace;
  j["mu_trace"] = model.report.mu_trace;
  return j.dump(2) + "\n";
}

std::string metrics_json(const MetricReport& report, const SchirnParams& params) {
  Json j;
  j["metrics"] = metric_report_json(report);
  j["conventions"] = conventions_json(params);
  return j.dump(2) + "\n";
}

std::string rank_report_json(const RankReport& r) {
  Json j;
  j["rank_prediction_scores"] = r.rank_scores;
  j["rank_prediction_labels"] = r.rank_labels;
  j["rank_observed"] = r.rank_observed;
  if (r.rank_truth) {
    j["rank_truth"] = *r.rank_truth;
  } else {
    j["rank_truth"] = nullptr;
  }
  j["max_rank"] = r.max_rank;
  j["rank_tolerance"] = "max(rows, cols) * machine_epsilon * sigma_max";
  return j.dump(2) + "\n";
}

std::string theorem_check_json(const TheoremCheckResult& r, int n, int l, std::uint64_t seed) {
  Json j;
  j["n"] = n;
  j["l"] = l;
  j["epsilon"] = r.epsilon_requested;
  j["seed"] = seed;
  j["trials"] = r.trials;
  j["violations"] = r.violations;
  j["sparsity_bound_violations"] = r.sparsity_bound_violations;
  j["min_observed_margin"] = r.min_observed_margin;
  j["min_rank_difference"] = r.min_rank_difference;
  j["max_rank_noise"] = r.max_rank_noise;
  j["epsilon_reduced"] = r.epsilon_reduced;
  j["epsilon_min_used"] = r.epsilon_min_used;
  return j.dump(2) + "\n";
}

std::string cv_csv(const CvResult& cv, const SchirnParams& params) {
  std::vector<std::string> header = {"fold", "n_test", "rows_scored"};
  for (const auto& m : metric_columns()) {
    header.push_back(m);
    header.push_back(m + "_std");
  }
  header.insert(header.end(), {"variant", "c_shift_convention", "hamming_threshold", "ranking_loss_ties"});
  std::string out = csv_row(header);

  const std::vector<std::string> tail = {std::string(to_string(params.variant)),
                                         std::string(to_string(params.c_shift)), format_double(params.threshold),
                                         "misordered"};
  int n_total = 0;
  int scored_total = 0;
  for (const auto& f : cv.folds) {
    std::vector<std::string> row = {std::to_string(f.fold), std::to_string(f.n_test),
                                    std::to_string(f.metrics.rows_scored)};
    for (double v : {f.metrics.average_precision, f.metrics.ranking_loss, f.metrics.coverage,
                     f.metrics.hamming_loss, f.metrics.one_error}) {
      row.push_back(format_double(v));
      row.emplace_back();
    }
    row.insert(row.end(), tail.begin(), tail.end());
    out += csv_row(row);
    n_total += f.n_test;
    scored_total += f.metrics.rows_scored;
  }
  std::vector<std::string> agg = {"mean", std::to_string(n_total), std::to_string(scored_total)};
  for (const auto* s : summaries(cv)) {
    agg.push_back(format_double(s->mean));
    agg.push_back(format_double(s->std));
  }
  agg.insert(agg.end(), tail.begin(), tail.end());
  return out + csv_row(agg);
}

std::string cv_json(const CvResult& cv, const SchirnParams& params, int folds, std::uint64_t seed) {
  Json j;
  j["params"] = params_json(params);
  j["folds"] = folds;
  j["seed"] = seed;
  j["conventions"] = conventions_json(params);
  Json per_fold = Json::array();
  for (const auto& f : cv.folds) {
    Json row;
    row["fold"] = f.fold;
    row["n_test"] = f.n_test;
    row["metrics"] = metric_report_json(f.metrics);
    per_fold.push_back(row);
  }
  j["per_fold"] = per_fold;
  j["summary"] = cv_summary_json(cv);
  return j.dump(2) + "\n";
}

std::string grid_csv(const std::vector<GridRow>& rows, const SchirnParams& params) {
  std::vector<std::string> header = {"rank", "alpha", "beta", "lambda"};
  for (const auto& m : metric_columns()) {
    header.push_back(m);
    header.push_back(m + "_std");
  }
  header.insert(header.end(), {"best", "variant", "c_shift_convention", "hamming_threshold"});
  std::string out = csv_row(header);
  int rank = 1;
  for (const auto& r : rows) {
    std::vector<std::string> row = {std::to_string(rank++), format_double(r.alpha), format_double(r.beta),
                                    format_double(r.lambda)};
    for (const auto* s : summaries(r.cv)) {
      row.push_back(format_double(s->mean));
      row.push_back(format_double(s->std));
    }
    row.insert(row.end(), {r.best ? "1" : "0", std::string(to_string(params.variant)),
                           std::string(to_string(params.c_shift)), format_double(params.threshold)});
    out += csv_row(row);
  }
  return out;
}

std::string grid_json(const std::vector<GridRow>& rows, const SchirnParams& params, int folds, std::uint64_t seed) {
  Json j;
  j["params"] = params_json(params);
  j["folds"] = folds;
  j["seed"] = seed;
  j["conventions"] = conventions_json(params);
  j["combinations"] = rows.size();
  Json table = Json::array();
  for (const auto& r : rows) {
    Json row;
    row["alpha"] = r.alpha;
    row["beta"] = r.beta;
    row["lambda"] = r.lambda;
    row["best"] = r.best;
    row["summary"] = cv_summary_json(r.cv);
    table.push_back(row);
  }
  j["ranking"] = table;
  return j.dump(2) + "\n";
}

std::string ablation_csv(const std::vector<AblationRow>& rows, const SchirnParams& params) {
  std::vector<std::string> header = {"variant"};
  for (const auto& m : metric_columns()) {
    header.push_back(m);
    header.push_back(m + "_std");
  }
  header.insert(header.end(), {"ttest_p_vs_high_rank", "verdict_high_rank_vs_variant", "c_shift_convention",
                               "hamming_threshold"});
  std::string out = csv_row(header);
  for (const auto& r : rows) {
    std::vector<std::string> row = {std::string(to_string(r.variant))};
    for (const auto* s : summaries(r.cv)) {
      row.push_back(format_double(s->mean));
      row.push_back(format_double(s->std));
    }
    if (r.vs_high_rank) {
      row.push_back(format_double(r.vs_high_rank->p_value));
      row.emplace_back(to_string(r.vs_high_rank->verdict));
    } else {
      row.emplace_back();
      row.emplace_back();
    }
    row.insert(row.end(), {std::string(to_string(params.c_shift)), format_double(params.threshold)});
    out += csv_row(row);
  }
  return out;
}

std::string ablation_json(const std::vector<AblationRow>& rows, const SchirnParams& params, int folds,
                          std::uint64_t seed) {
  Json j;
  j["params"] = params_json(params);
  j["folds"] = folds;
  j["seed"] = seed;
  j["conventions"] = conventions_json(params);
  Json table = Json::array();
  for (const auto& r : rows) {
    Json row;
    row["variant"] = std::string(to_string(r.variant));
    row["summary"] = cv_summary_json(r.cv);
    row["per_fold_average_precision"] = r.cv.per_fold_average_precision();
    if (r.vs_high_rank) {
      row["ttest_vs_high_rank"] = ttest_json(*r.vs_high_rank);
    }
    table.push_back(row);
  }
  j["variants"] = table;
  return j.dump(2) + "\n";
}

}  // namespace schirn
