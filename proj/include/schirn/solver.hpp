#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "schirn/data.hpp"
#include "schirn/numerics.hpp"

namespace schirn {

/// Which regularizers are active. HighRank is the full method; the others
/// are ablations:
///   HighRank   - sparse noise + nuclear-norm maximization
///   NoRank     - sparse noise only (beta ignored)
///   NoSparsity - nuclear-norm maximization only (N fixed at 0)
///   LowRank    - sparse noise + nuclear-norm minimization
enum class Variant { HighRank, LowRank, NoRank, NoSparsity };

/// Scale of the singular-value shift in the C-update: `Paper` uses
/// 2*beta/(2+mu), `Derived` uses beta/(2+mu), the value obtained from the
/// stationarity condition of the C-subproblem.
enum class CShiftConvention { Paper, Derived };

std::string_view to_string(Variant v);
std::string_view to_string(CShiftConvention c);
Variant parse_variant(std::string_view text);
CShiftConvention parse_c_shift(std::string_view text);

struct SchirnParams {
  double alpha = 1.0;   // weight of the l1 penalty on the noise matrix
  double beta = 0.05;   // weight of the nuclear-norm term
  double lambda = 10.0; // ridge weight on W
  double mu0 = 1e-4;
  double mu_max = 10.0;
  double rho = 1.1;
  int max_iter = 100;
  double tol = 0.0;     // early stop on relative primal residual; 0 disables
  Variant variant = Variant::HighRank;
  CShiftConvention c_shift = CShiftConvention::Paper;
  double threshold = 0.5;  // score cut for label prediction

  /// Throws InputError on out-of-range values.
  void validate() const;
};

/// Iterates of the augmented Lagrangian scheme.
struct SolverState {
  Matrix W;       // d x l
  Matrix N;       // n x l, binary, N <= Y
  Matrix C;       // n x l, split copy of XW
  Matrix Lambda;  // n x l multiplier
  double mu = 0.0;
  int iter = 0;

  /// W = 0, N = 0, C = Lambda = 1, mu = mu0.
  static SolverState initial(int n, int d, int l, const SchirnParams& params);
};

struct FitReport {
  std::vector<double> objective_trace;
  std::vector<double> primal_residual_trace;
  std::vector<double> mu_trace;  // penalty in effect during each iteration
  int iterations_run = 0;
  int final_rank_XW = 0;
};

struct Model {
  Matrix W;
  SchirnParams params;
  FitReport report;
  Matrix noise;  // final noise-label estimate N on the training set
};

/// Eigendecomposition of X^T X plus X^T, computed once per fit so that each
/// W-update reduces to dense products and a diagonal scaling.
class RidgeSystem {
 public:
  explicit RidgeSystem(const Matrix& X);

  /// argmin_W lambda*|W|^2 + <Lambda, XW - C> + mu/2 |XW - C|^2, i.e. the
  /// solution of (mu X^T X + 2 lambda I) W = mu X^T C - X^T Lambda.
  Matrix solve(const Matrix& C, const Matrix& Lambda, double mu, double lambda) const;

 private:
  Matrix Xt_;
  EigResult gram_;
};

Matrix update_w(const SolverState& state, const Matrix& X, const SchirnParams& params);
Matrix update_w(const SolverState& state, const RidgeSystem& system, const SchirnParams& params);

/// One exact proximal (ISTA) step with Lipschitz constant 2: shrink
/// M = Y - C by alpha/2, map to {0,1} by sign, clip to Y. Returns zeros for
/// the NoSparsity variant.
Matrix update_n(const SolverState& state, const Matrix& Y, const SchirnParams& params);

/// Amount added to (HighRank) or removed from (LowRank) every singular value.
double c_shift(double beta, double mu, CShiftConvention convention);

/// G = (2Y - 2N + Lambda + mu XW) / (2 + mu), using the current W and N.
Matrix c_target(const SolverState& state, const Matrix& X, const Matrix& Y);

/// Singular-value shift of c_target: every singular value grows by
/// c_shift (HighRank, NoSparsity) or is soft-thresholded by it (LowRank);
/// NoRank returns G unchanged.
Matrix update_c(const SolverState& state, const Matrix& X, const Matrix& Y, const SchirnParams& params);
Matrix shift_singular_values(const Matrix& G, double shift, Variant variant);

/// Lambda += mu (XW - C) with the pre-update mu, then mu = min(mu_max, rho mu).
struct LagrangeUpdate {
  Matrix Lambda;
  double mu = 0.0;
};
LagrangeUpdate update_lagrange(const SolverState& state, const Matrix& X, const SchirnParams& params);

/// |XW - (Y - N)|_F^2 + alpha |N|_1 + s * beta |XW|_* + lambda |W|_F^2 with
/// s = -1 (HighRank, NoSparsity), +1 (LowRank), 0 (NoRank).
double objective(const SolverState& state, const Matrix& X, const Matrix& Y, const SchirnParams& params);

/// |XW - C|_F / max(1, |C|_F)
double primal_residual(const Matrix& XW, const Matrix& C);

/// Runs the W -> N -> C -> Lambda -> mu loop for params.max_iter iterations
/// (or until the relative primal residual drops to params.tol when tol > 0).
/// Deterministic for fixed inputs.
Model fit(const Dataset& ds, const SchirnParams& params);

Matrix predict_scores(const Model& model, const Matrix& X_test);

/// 1 where the score is strictly greater than params.threshold.
Matrix predict_labels(const Model& model, const Matrix& X_test);
Matrix binarize(const Matrix& scores, double threshold);

}  // namespace schirn
