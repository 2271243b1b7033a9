#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "schirn/numerics.hpp"

namespace schirn {

enum class MatrixKind { Features, Labels };

/// Partial multi-label dataset: features X (n x d), candidate labels
/// Y (n x l, binary) and optionally the ground truth (binary, truth <= Y).
struct Dataset {
  Matrix X;
  Matrix Y;
  std::optional<Matrix> Y_true;
  std::vector<std::string> label_names;

  int n() const { return static_cast<int>(X.rows()); }
  int d() const { return static_cast<int>(X.cols()); }
  int l() const { return static_cast<int>(Y.cols()); }

  /// Throws InputError on shape or binarity violations.
  void validate() const;

  /// Sub-dataset holding the given rows, in the given order.
  Dataset select_rows(const std::vector<int>& rows) const;
};

struct NoiseSpec {
  int r = 0;
  std::uint64_t seed = 0;
};

struct FoldSplit {
  int k = 0;
  std::vector<int> assignments;

  std::vector<int> test_rows(int fold) const;
  std::vector<int> train_rows(int fold) const;
};

struct DatasetSummary {
  int n = 0;
  int d = 0;
  int l = 0;
  double avg_candidate_labels = 0.0;
  std::optional<double> avg_true_labels;
};

bool is_binary(const Matrix& A);

/// Reads the matrix text format:
///   "<rows> <cols>" header line, then `rows` lines of `cols` numbers.
/// Label files only admit the tokens "0" and "1". Errors carry the line
/// number of the offending line.
Matrix load_matrix(const std::filesystem::path& path, MatrixKind kind = MatrixKind::Features);

/// Parses the same format from an in-memory string; `source` names it in
/// error messages.
Matrix parse_matrix(std::string_view text, MatrixKind kind, std::string_view source = "<string>");

/// Writes the matrix text format: single-space separators, LF line endings,
/// shortest round-trip decimal representation of every entry.
void save_matrix(const std::filesystem::path& path, const Matrix& A);
std::string format_matrix(const Matrix& A);

/// Loads (features, labels[, truth]). With `filter_empty_truth`, rows whose
/// ground truth is empty are dropped (requires a truth file).
Dataset load_dataset(const std::filesystem::path& features, const std::filesystem::path& labels,
                     const std::optional<std::filesystem::path>& truth = std::nullopt,
                     bool filter_empty_truth = false);

/// Adds min(r, #negatives) noisy labels per row, drawn uniformly without
/// replacement by a partial Fisher-Yates shuffle of the row's zero indices.
/// Rows are processed in order from a single stream seeded with spec.seed.
Matrix inject_noise(const Matrix& truth, const NoiseSpec& spec);

/// Seeded permutation of [0, n); sample at permuted position i goes to
/// fold i mod k, so fold sizes differ by at most one.
FoldSplit kfold_split(int n, int k, std::uint64_t seed);

DatasetSummary describe(const Dataset& ds);

/// Column statistics learned on a training split and applied to new rows.
struct ColumnScaling {
  Vector mean;
  Vector scale;  // population std; 0 marks a constant column

  static ColumnScaling fit(const Matrix& X);
  Matrix apply(const Matrix& X) const;
};

/// Column-wise zero mean, unit population variance. Constant columns map
/// to zero.
Matrix standardize(const Matrix& X);

/// Drops rows with an empty ground-truth set. Requires Y_true.
Dataset filter_empty_truth(const Dataset& ds);

/// Parameters of the synthetic generator used by tests and the demo.
struct SyntheticSpec {
  int n = 200;
  int d = 30;
  int l = 12;
  int noise_r = 2;
  double positive_rate = 0.3;  // Bernoulli rate of each ground-truth label
  double feature_noise = 0.1;  // std of the Gaussian noise added to features
  std::uint64_t seed = 1;
};

/// Ground truth with Bernoulli(positive_rate) entries (every row keeps at
/// least one label; redrawn until its rank is min(n, l)), features
/// X = truth * A + feature_noise * E with Gaussian A (l x d) and E (n x d),
/// and candidates with noise_r injected negatives per row.
Dataset make_synthetic(const SyntheticSpec& spec);

}  // namespace schirn
