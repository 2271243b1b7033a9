#include "schirn/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "schirn/error.hpp"
#include "schirn/random.hpp"

namespace schirn {

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

[[noreturn]] void format_error(std::string_view source, std::size_t line, const std::string& what) {
  throw InputError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

long parse_count(std::string_view token, std::string_view source) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value < 1) {
    format_error(source, 1, "invalid dimension '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

bool is_binary(const Matrix& A) {
  return (A.array() == 0.0 || A.array() == 1.0).all();
}

void Dataset::validate() const {
  if (X.rows() < 1 || X.cols() < 1 || Y.cols() < 1) throw InputError("dataset: empty matrix");
  if (X.rows() != Y.rows()) {
    throw InputError("dataset: features have " + std::to_string(X.rows()) +
                     " rows but labels have " + std::to_string(Y.rows()));
  }
  if (!X.allFinite()) throw InputError("dataset: non-finite feature value");
  if (!is_binary(Y)) throw InputError("dataset: candidate labels must be 0/1");
  if (Y_true) {
    if (Y_true->rows() != Y.rows() || Y_true->cols() != Y.cols()) {
      throw InputError("dataset: truth shape differs from candidate labels");
    }
    if (!is_binary(*Y_true)) throw InputError("dataset: ground-truth labels must be 0/1");
    if ((Y_true->array() > Y.array()).any()) {
      throw InputError("dataset: a ground-truth label is missing from its candidate set");
    }
  }
  if (!label_names.empty() && static_cast<int>(label_names.size()) != l()) {
    throw InputError("dataset: label name count differs from label count");
  }
}

Dataset Dataset::select_rows(const std::vector<int>& rows) const {
  const auto idx = Eigen::Map<const Eigen::VectorXi>(rows.data(), static_cast<Eigen::Index>(rows.size()));
  Dataset out;
  out.X = X(idx, Eigen::all);
  out.Y = Y(idx, Eigen::all);
  if (Y_true) out.Y_true = (*Y_true)(idx, Eigen::all);
  out.label_names = label_names;
  return out;
}

std::vector<int> FoldSplit::test_rows(int fold) const {
  std::vector<int> rows;
  for (int i = 0; i < static_cast<int>(assignments.size()); ++i) {
    if (assignments[i] == fold) rows.push_back(i);
  }
  return rows;
}

std::vector<int> FoldSplit::train_rows(int fold) const {
  std::vector<int> rows;
  for (int i = 0; i < static_cast<int>(assignments.size()); ++i) {
    if (assignments[i] != fold) rows.push_back(i);
  }
  return rows;
}

Matrix parse_matrix(std::string_view text, MatrixKind kind, std::string_view source) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  // Trailing blank lines are tolerated; blank lines inside the body are not.
  while (!lines.empty() && split_tokens(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) format_error(source, 1, "missing '<rows> <cols>' header");

  const auto header = split_tokens(lines[0]);
  if (header.size() != 2) format_error(source, 1, "header must be '<rows> <cols>'");
  const long rows = parse_count(header[0], source);
  const long cols = parse_count(header[1], source);

  const long body_lines = static_cast<long>(lines.size()) - 1;
  if (body_lines != rows) {
    format_error(source, static_cast<std::size_t>(std::min(body_lines, rows) + 2),
                 "row count mismatch: header declares " + std::to_string(rows) + " rows, found " +
                     std::to_string(body_lines));
  }

  Matrix A(rows, cols);
  for (long i = 0; i < rows; ++i) {
    const std::size_t line_no = static_cast<std::size_t>(i) + 2;
    const auto tokens = split_tokens(lines[static_cast<std::size_t>(i) + 1]);
    if (static_cast<long>(tokens.size()) != cols) {
      format_error(source, line_no,
                   "expected " + std::to_string(cols) + " values, found " + std::to_string(tokens.size()));
    }
    for (long j = 0; j < cols; ++j) {
      const auto tok = tokens[static_cast<std::size_t>(j)];
      if (kind == MatrixKind::Labels) {
        if (tok == "0") {
          A(i, j) = 0.0;
        } else if (tok == "1") {
          A(i, j) = 1.0;
        } else {
          format_error(source, line_no, "label entry '" + std::string(tok) + "' is not 0 or 1");
        }
        continue;
      }
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(value)) {
        format_error(source, line_no, "non-numeric token '" + std::string(tok) + "'");
      }
      A(i, j) = value;
    }
  }
  return A;
}

Matrix load_matrix(const std::filesystem::path& path, MatrixKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": file not found or unreadable");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_matrix(buffer.str(), kind, path.string());
}

std::string format_matrix(const Matrix& A) {
  std::string out = std::to_string(A.rows()) + " " + std::to_string(A.cols()) + "\n";
  char buf[32];
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (j > 0) out += ' ';
      // Negative zero prints as "-0", which label files do not admit.
      const double v = A(i, j) == 0.0 ? 0.0 : A(i, j);
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      out.append(buf, ptr);
    }
    out += '\n';
  }
  return out;
}

void save_matrix(const std::filesystem::path& path, const Matrix& A) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  out << format_matrix(A);
  if (!out) throw InputError(path.string() + ": write failed");
}

Dataset load_dataset(const std::filesystem::path& features, const std::filesystem::path& labels,
                     const std::optional<std::filesystem::path>& truth, bool filter_empty) {
  Dataset ds;
  ds.X = load_matrix(features, MatrixKind::Features);
  ds.Y = load_matrix(labels, MatrixKind::Labels);
  if (truth) ds.Y_true = load_matrix(*truth, MatrixKind::Labels);
  ds.validate();
  if (filter_empty) {
    if (!ds.Y_true) throw InputError("filter-empty-truth requires a truth file");
    return filter_empty_truth(ds);
  }
  return ds;
}

Dataset filter_empty_truth(const Dataset& ds) {
  if (!ds.Y_true) throw InputError("filter-empty-truth requires ground-truth labels");
  std::vector<int> keep;
  for (int i = 0; i < ds.n(); ++i) {
    if (ds.Y_true->row(i).sum() > 0.0) keep.push_back(i);
  }
  if (keep.empty()) throw InputError("filter-empty-truth removed every sample");
  return ds.select_rows(keep);
}

Matrix inject_noise(const Matrix& truth, const NoiseSpec& spec) {
  if (spec.r < 0) throw InputError("inject_noise: r must be non-negative");
  if (!is_binary(truth)) throw InputError("inject_noise: truth must be binary");
  Rng rng(spec.seed);
  Matrix Y = truth;
  std::vector<Eigen::Index> negatives;
  for (Eigen::Index i = 0; i < truth.rows(); ++i) {
    negatives.clear();
    for (Eigen::Index j = 0; j < truth.cols(); ++j) {
      if (truth(i, j) == 0.0) negatives.push_back(j);
    }
    const std::size_t take = std::min(static_cast<std::size_t>(spec.r), negatives.size());
    rng.partial_shuffle(negatives, take);
    for (std::size_t t = 0; t < take; ++t) Y(i, negatives[t]) = 1.0;
  }
  return Y;
}

FoldSplit kfold_split(int n, int k, std::uint64_t seed) {
  if (k < 2) throw InputError("kfold_split: k must be at least 2");
  if (n < k) {
    throw InputError("kfold_split: " + std::to_string(n) + " samples cannot fill " +
                     std::to_string(k) + " folds");
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.partial_shuffle(perm, perm.size());
  FoldSplit split{k, std::vector<int>(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) split.assignments[static_cast<std::size_t>(perm[i])] = i % k;
  return split;
}

DatasetSummary describe(const Dataset& ds) {
  DatasetSummary s;
  s.n = ds.n();
  s.d = ds.d();
  s.l = ds.l();
  s.avg_candidate_labels = ds.Y.rowwise().sum().mean();
  if (ds.Y_true) s.avg_true_labels = ds.Y_true->rowwise().sum().mean();
  return s;
}

ColumnScaling ColumnScaling::fit(const Matrix& X) {
  ColumnScaling s{Vector::Zero(X.cols()), Vector::Zero(X.cols())};
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const auto col = X.col(j);
    s.mean(j) = col.mean();
    if (col.maxCoeff() != col.minCoeff()) {
      s.scale(j) = std::sqrt((col.array() - s.mean(j)).square().mean());
    }
  }
  return s;
}

Matrix ColumnScaling::apply(const Matrix& X) const {
  if (X.cols() != mean.size()) throw InputError("standardize: column count differs from training data");
  Matrix out(X.rows(), X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    if (scale(j) == 0.0) {
      out.col(j).setZero();
    } else {
      out.col(j) = (X.col(j).array() - mean(j)) / scale(j);
    }
  }
  return out;
}

Matrix standardize(const Matrix& X) { return ColumnScaling::fit(X).apply(X); }

Dataset make_synthetic(const SyntheticSpec& spec) {
  if (spec.n < 1 || spec.d < 1 || spec.l < 1) throw InputError("make_synthetic: empty shape");
  if (!(spec.positive_rate > 0.0 && spec.positive_rate < 1.0)) {
    throw InputError("make_synthetic: positive_rate must lie in (0, 1)");
  }
  Rng rng(spec.seed);
  const auto gaussian = [&rng](Eigen::Index rows, Eigen::Index cols) {
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = rng.normal();
    return M;
  };

  const int full_rank = std::min(spec.n, spec.l);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Matrix truth(spec.n, spec.l);
    for (int i = 0; i < spec.n; ++i) {
      for (int j = 0; j < spec.l; ++j) truth(i, j) = rng.uniform01() < spec.positive_rate ? 1.0 : 0.0;
      if (truth.row(i).sum() == 0.0) truth(i, static_cast<Eigen::Index>(rng.uniform_index(spec.l))) = 1.0;
    }
    if (numerical_rank(truth) != full_rank) continue;

    Dataset ds;
    ds.X = truth * gaussian(spec.l, spec.d) + spec.feature_noise * gaussian(spec.n, spec.d);
    ds.Y = inject_noise(truth, {spec.noise_r, derive_seed(spec.seed, 1)});
    ds.Y_true = std::move(truth);
    return ds;
  }
  throw NumericalError("make_synthetic: could not draw a full-rank truth matrix");
}

}  // namespace schirn
