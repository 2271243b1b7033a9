#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "schirn/data.hpp"
#include "schirn/solver.hpp"

namespace schirn {

/// Numerical ranks of the prediction, the candidate labels and the truth.
/// The prediction rank is given for the raw score matrix XW and for its
/// thresholded label matrix.
struct RankReport {
  int rank_scores = 0;
  int rank_labels = 0;
  int rank_observed = 0;
  std::optional<int> rank_truth;
  int max_rank = 0;  // min(n, l)
};

RankReport rank_report(const Model& model, const Dataset& ds);

/// Monte-Carlo check of rank(Y - N) >= min(n, l) - rank(N) for full-rank
/// binary Y and N with epsilon ones placed inside the support of Y.
struct TheoremCheckResult {
  int trials = 0;
  int violations = 0;            // trials with rank(Y - N) < min(n,l) - rank(N)
  int sparsity_bound_violations = 0;  // trials with rank(Y - N) < min(n,l) - epsilon
  int min_observed_margin = 0;   // min of rank(Y - N) - (min(n,l) - rank(N))
  int min_rank_difference = 0;   // min of rank(Y - N)
  int max_rank_noise = 0;        // max of rank(N)
  int epsilon_requested = 0;
  int epsilon_min_used = 0;      // smallest epsilon actually placed
  bool epsilon_reduced = false;  // some trial had fewer ones in Y than epsilon
};

/// Trial t draws from an independent stream derive_seed(seed, t); Y has
/// Bernoulli(1/2) entries and is redrawn until its numerical rank is
/// min(n, l).
TheoremCheckResult verify_rank_theorem(int n, int l, int epsilon, int trials, std::uint64_t seed);

enum class Verdict { Win, Tie, Loss };
std::string_view to_string(Verdict v);

struct TTestResult {
  double t_stat = 0.0;
  double p_value = 1.0;
  double mean_difference = 0.0;
  Verdict verdict = Verdict::Tie;
};

/// Two-sided paired Student t-test on a - b. The verdict is Win (Loss) when
/// p < alpha_level and the mean difference is positive (negative), Tie
/// otherwise. Zero-variance differences: all equal -> t = 0, p = 1; nonzero
/// mean -> t = +-infinity, p = 0.
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b, double alpha_level = 0.05);

/// Regularized incomplete beta function I_x(a, b) by Lentz's continued
/// fraction.
double incomplete_beta(double a, double b, double x);

/// CDF of Student's t distribution with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

}  // namespace schirn
