#include "schirn/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "schirn/error.hpp"
#include "schirn/random.hpp"

namespace schirn {

RankReport rank_report(const Model& model, const Dataset& ds) {
  ds.validate();
  const Matrix scores = predict_scores(model, ds.X);
  if (scores.cols() != ds.Y.cols()) throw InputError("rank_report: label count differs from model");
  RankReport r;
  r.rank_scores = numerical_rank(scores);
  r.rank_labels = numerical_rank(binarize(scores, model.params.threshold));
  r.rank_observed = numerical_rank(ds.Y);
  if (ds.Y_true) r.rank_truth = numerical_rank(*ds.Y_true);
  r.max_rank = std::min(ds.n(), ds.l());
  return r;
}

TheoremCheckResult verify_rank_theorem(int n, int l, int epsilon, int trials, std::uint64_t seed) {
  if (n < 1 || l < 1) throw InputError("verify_rank_theorem: n and l must be positive");
  if (epsilon < 0) throw InputError("verify_rank_theorem: epsilon must be non-negative");
  if (trials < 1) throw InputError("verify_rank_theorem: trials must be positive");

  const int full = std::min(n, l);
  TheoremCheckResult result;
  result.trials = trials;
  result.epsilon_requested = epsilon;
  result.epsilon_min_used = epsilon;
  result.min_observed_margin = std::numeric_limits<int>::max();
  result.min_rank_difference = std::numeric_limits<int>::max();

  Matrix Y(n, l);
  std::vector<std::pair<int, int>> ones;
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    int attempts = 0;
    do {
      if (++attempts > 1000) throw NumericalError("verify_rank_theorem: no full-rank draw after 1000 attempts");
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < l; ++j) Y(i, j) = static_cast<double>(rng.next() >> 63);
    } while (numerical_rank(Y) != full);

    ones.clear();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < l; ++j)
        if (Y(i, j) == 1.0) ones.emplace_back(i, j);
    const int used = std::min<int>(epsilon, static_cast<int>(ones.size()));
    if (used < epsilon) result.epsilon_reduced = true;
    result.epsilon_min_used = std::min(result.epsilon_min_used, used);
    rng.partial_shuffle(ones, static_cast<std::size_t>(used));

    Matrix N = Matrix::Zero(n, l);
    for (int k = 0; k < used; ++k) N(ones[static_cast<std::size_t>(k)].first, ones[static_cast<std::size_t>(k)].second) = 1.0;

    const int rank_noise = numerical_rank(N);
    const int rank_diff = numerical_rank(Y - N);
    const int margin = rank_diff - (full - rank_noise);
    if (margin < 0) ++result.violations;
    if (rank_diff < full - used) ++result.sparsity_bound_violations;
    result.min_observed_margin = std::min(result.min_observed_margin, margin);
    result.min_rank_difference = std::min(result.min_rank_difference, rank_diff);
    result.max_rank_noise = std::max(result.max_rank_noise, rank_noise);
  }
  return result;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Win: return "win";
    case Verdict::Tie: return "tie";
    case Verdict::Loss: return "loss";
  }
  return "?";
}

namespace {

// Continued fraction for I_x(a, b), modified Lentz; converges quickly for
// x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < eps) return h;
  }
  throw NumericalError("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InputError("incomplete_beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw InputError("incomplete_beta: x must lie in [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double dof) {
  if (!(dof > 0.0)) throw InputError("student_t_cdf: degrees of freedom must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double x = dof / (dof + t * t);
  const double tail = 0.5 * incomplete_beta(0.5 * dof, 0.5, x);
  return t > 0.0 ? 1.0 - tail : tail;
}

TTestResult paired_ttest(std::span<const double> a, std::span<const double> b, double alpha_level) {
  if (a.size() != b.size()) throw InputError("paired_ttest: samples differ in length");
  if (a.size() < 2) throw InputError("paired_ttest: need at least two pairs");
  if (!(alpha_level > 0.0 && alpha_level < 1.0)) throw InputError("paired_ttest: alpha must lie in (0, 1)");

  const auto n = static_cast<double>(a.size());
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const double mean = std::accumulate(diff.begin(), diff.end(), 0.0) / n;
  double ss = 0.0;
  for (double d : diff) ss += (d - mean) * (d - mean);
  const double sd = std::sqrt(ss / (n - 1.0));

  TTestResult r;
  r.mean_difference = mean;
  if (sd == 0.0) {
    if (mean == 0.0) return r;
    r.t_stat = std::copysign(std::numeric_limits<double>::infinity(), mean);
    r.p_value = 0.0;
  } else {
    r.t_stat = mean / (sd / std::sqrt(n));
    const double x = (n - 1.0) / (n - 1.0 + r.t_stat * r.t_stat);
    r.p_value = std::min(1.0, incomplete_beta(0.5 * (n - 1.0), 0.5, x));
  }
  if (r.p_value < alpha_level) r.verdict = mean > 0.0 ? Verdict::Win : Verdict::Loss;
  return r;
}

}  // namespace schirn
