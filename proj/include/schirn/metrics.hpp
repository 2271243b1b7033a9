#pragma once

#include <vector>

#include "schirn/numerics.hpp"

namespace schirn {

// Ranking conventions shared by every ranking metric:
//  * ranks are 1-based by descending score;
//  * equal scores are ordered by ascending label index;
//  * rows whose truth is all-zero or all-one are excluded (no
//    relevant/irrelevant contrast). Hamming loss never excludes rows.
// When no row is scorable a metric reports 0 and the report carries the
// no_scorable_rows flag.

/// 1-based rank of every label of one row.
std::vector<int> label_ranks(const Eigen::Ref<const Vector>& scores);

/// Row indices that contain at least one relevant and one irrelevant label.
std::vector<int> scorable_rows(const Matrix& truth);

double average_precision(const Matrix& scores, const Matrix& truth);

/// Fraction of (relevant, irrelevant) pairs with score_rel <= score_irrel.
/// Ties count as violations.
double ranking_loss(const Matrix& scores, const Matrix& truth);

/// (max rank of a relevant label - 1) / l, averaged over scorable rows.
double coverage(const Matrix& scores, const Matrix& truth);

double hamming_loss(const Matrix& pred, const Matrix& truth);

double one_error(const Matrix& scores, const Matrix& truth);

struct MetricReport {
  double average_precision = 0.0;
  double ranking_loss = 0.0;
  double coverage = 0.0;
  double hamming_loss = 0.0;
  double one_error = 0.0;
  int rows_total = 0;
  int rows_scored = 0;  // rows used by the four ranking metrics
  bool no_scorable_rows = false;
};

MetricReport evaluate_all(const Matrix& scores, const Matrix& pred, const Matrix& truth);

}  // namespace schirn
