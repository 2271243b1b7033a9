#include "schirn/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "schirn/data.hpp"
#include "schirn/error.hpp"

namespace schirn {

namespace {

void check_shapes(const Matrix& a, const Matrix& truth, const char* where) {
  if (a.rows() != truth.rows() || a.cols() != truth.cols()) {
    throw InputError(std::string(where) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(truth.rows()) + "x" +
                     std::to_string(truth.cols()) + ")");
  }
  if (!is_binary(truth)) throw InputError(std::string(where) + ": truth must be binary");
  require_finite(a, where);
}

// Mean of per-row values over scorable rows; 0 when there are none.
template <class RowFn>
double mean_over_scorable(const Matrix& scores, const Matrix& truth, RowFn&& row_value) {
  const auto rows = scorable_rows(truth);
  if (rows.empty()) return 0.0;
  double total = 0.0;
  for (int i : rows) {
    const Vector s = scores.row(i).transpose();
    total += row_value(s, truth.row(i), label_ranks(s));
  }
  return total / static_cast<double>(rows.size());
}

}  // namespace

std::vector<int> label_ranks(const Eigen::Ref<const Vector>& scores) {
  const auto l = static_cast<int>(scores.size());
  std::vector<int> order(static_cast<std::size_t>(l));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores(a) > scores(b); });
  std::vector<int> rank(static_cast<std::size_t>(l));
  for (int pos = 0; pos < l; ++pos) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] = pos + 1;
  return rank;
}

std::vector<int> scorable_rows(const Matrix& truth) {
  std::vector<int> rows;
  for (Eigen::Index i = 0; i < truth.rows(); ++i) {
    const double relevant = truth.row(i).sum();
    if (relevant > 0.0 && relevant < static_cast<double>(truth.cols())) rows.push_back(static_cast<int>(i));
  }
  return rows;
}

double average_precision(const Matrix& scores, const Matrix& truth) {
  check_shapes(scores, truth, "average_precision");
  return mean_over_scorable(scores, truth, [](const Vector&, const auto& t, const std::vector<int>& rank) {
    std::vector<int> relevant_ranks;
    for (Eigen::Index j = 0; j < t.size(); ++j) {
      if (t(j) == 1.0) relevant_ranks.push_back(rank[static_cast<std::size_t>(j)]);
    }
    std::sort(relevant_ranks.begin(), relevant_ranks.end());
    double sum = 0.0;
    for (std::size_t k = 0; k < relevant_ranks.size(); ++k) {
      sum += static_cast<double>(k + 1) / relevant_ranks[k];
    }
    return sum / static_cast<double>(relevant_ranks.size());
  });
}

double ranking_loss(const Matrix& scores, const Matrix& truth) {
  check_shapes(scores, truth, "ranking_loss");
  return mean_over_scorable(scores, truth, [](const Vector& s, const auto& t, const std::vector<int>&) {
    // Sort irrelevant scores once; each relevant label then counts the
    // irrelevant scores >= its own with a binary search.
    std::vector<double> irrelevant;
    std::vector<double> relevant;
    for (Eigen::Index j = 0; j < s.size(); ++j) (t(j) == 1.0 ? relevant : irrelevant).push_back(s(j));
    std::sort(irrelevant.begin(), irrelevant.end());
    double violations = 0.0;
    for (double r : relevant) {
      const auto first_ge = std::lower_bound(irrelevant.begin(), irrelevant.end(), r);
      violations += static_cast<double>(irrelevant.end() - first_ge);
    }
    return violations / (static_cast<double>(relevant.size()) * static_cast<double>(irrelevant.size()));
  });
}

double coverage(const Matrix& scores, const Matrix& truth) {
  check_shapes(scores, truth, "coverage");
  const double l = static_cast<double>(truth.cols());
  return mean_over_scorable(scores, truth, [l](const Vector&, const auto& t, const std::vector<int>& rank) {
    int deepest = 0;
    for (Eigen::Index j = 0; j < t.size(); ++j) {
      if (t(j) == 1.0) deepest = std::max(deepest, rank[static_cast<std::size_t>(j)]);
    }
    return (deepest - 1) / l;
  });
}

double hamming_loss(const Matrix& pred, const Matrix& truth) {
  check_shapes(pred, truth, "hamming_loss");
  if (!is_binary(pred)) throw InputError("hamming_loss: predictions must be binary");
  const auto mismatches = (pred.array() != truth.array()).count();
  return static_cast<double>(mismatches) / static_cast<double>(truth.size());
}

double one_error(const Matrix& scores, const Matrix& truth) {
  check_shapes(scores, truth, "one_error");
  return mean_over_scorable(scores, truth, [](const Vector&, const auto& t, const std::vector<int>& rank) {
    const auto top = std::find(rank.begin(), rank.end(), 1) - rank.begin();
    return t(top) == 1.0 ? 0.0 : 1.0;
  });
}

MetricReport evaluate_all(const Matrix& scores, const Matrix& pred, const Matrix& truth) {
  MetricReport r;
  r.average_precision = average_precision(scores, truth);
  r.ranking_loss = ranking_loss(scores, truth);
  r.coverage = coverage(scores, truth);
  r.hamming_loss = hamming_loss(pred, truth);
  r.one_error = one_error(scores, truth);
  r.rows_total = static_cast<int>(truth.rows());
  r.rows_scored = static_cast<int>(scorable_rows(truth).size());
  r.no_scorable_rows = r.rows_scored == 0;
  return r;
}

}  // namespace schirn
