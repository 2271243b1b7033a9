#include "schirn/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "schirn/error.hpp"

namespace schirn {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::HighRank: return "high-rank";
    case Variant::LowRank: return "low-rank";
    case Variant::NoRank: return "no-rank";
    case Variant::NoSparsity: return "no-sparsity";
  }
  return "?";
}

std::string_view to_string(CShiftConvention c) {
  return c == CShiftConvention::Paper ? "paper" : "derived";
}

Variant parse_variant(std::string_view text) {
  for (auto v : {Variant::HighRank, Variant::LowRank, Variant::NoRank, Variant::NoSparsity}) {
    if (text == to_string(v)) return v;
  }
  throw InputError("unknown variant '" + std::string(text) +
                   "' (expected high-rank, low-rank, no-rank or no-sparsity)");
}

CShiftConvention parse_c_shift(std::string_view text) {
  if (text == "paper") return CShiftConvention::Paper;
  if (text == "derived") return CShiftConvention::Derived;
  throw InputError("unknown c-shift convention '" + std::string(text) + "' (expected paper or derived)");
}

void SchirnParams::validate() const {
  const auto fail = [](const std::string& what) { throw InputError("invalid parameter: " + what); };
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail("alpha must be > 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) fail("beta must be >= 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail("lambda must be > 0");
  if (!(mu0 > 0.0)) fail("mu0 must be > 0");
  if (!(mu_max >= mu0) || !std::isfinite(mu_max)) fail("mu_max must be finite and >= mu0");
  if (!(rho > 1.0) || !std::isfinite(rho)) fail("rho must be > 1");
  if (max_iter < 0) fail("max_iter must be >= 0");
  if (!(tol >= 0.0)) fail("tol must be >= 0");
  if (!(threshold > 0.0 && threshold < 1.0)) fail("threshold must lie in (0, 1)");
}

SolverState SolverState::initial(int n, int d, int l, const SchirnParams& params) {
  SolverState s;
  s.W = Matrix::Zero(d, l);
  s.N = Matrix::Zero(n, l);
  s.C = Matrix::Ones(n, l);
  s.Lambda = Matrix::Ones(n, l);
  s.mu = params.mu0;
  return s;
}

RidgeSystem::RidgeSystem(const Matrix& X) : Xt_(X.transpose()) {
  require_finite(X, "RidgeSystem");
  Matrix gram = Xt_ * X;
  gram = 0.5 * (gram + gram.transpose()).eval();
  gram_ = sym_eig(gram);
}

Matrix RidgeSystem::solve(const Matrix& C, const Matrix& Lambda, double mu, double lambda) const {
  const Matrix rhs = Xt_ * (mu * C - Lambda);
  const Vector inv = (mu * gram_.eigenvalues.array() + 2.0 * lambda).inverse();
  Matrix W = gram_.Q * (inv.asDiagonal() * (gram_.Q.transpose() * rhs));
  if (!W.allFinite()) throw NumericalError("update_w: non-finite weights");
  return W;
}

Matrix update_w(const SolverState& state, const RidgeSystem& system, const SchirnParams& params) {
  return system.solve(state.C, state.Lambda, state.mu, params.lambda);
}

Matrix update_w(const SolverState& state, const Matrix& X, const SchirnParams& params) {
  if (X.rows() != state.C.rows() || X.cols() != state.W.rows()) {
    throw InputError("update_w: dimension mismatch");
  }
  return update_w(state, RidgeSystem(X), params);
}

Matrix update_n(const SolverState& state, const Matrix& Y, const SchirnParams& params) {
  if (params.variant == Variant::NoSparsity) return Matrix::Zero(Y.rows(), Y.cols());
  const double eps = params.alpha / 2.0;  // alpha / L_f with L_f = 2
  Matrix N(Y.rows(), Y.cols());
  for (Eigen::Index j = 0; j < Y.cols(); ++j) {
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
      const double shrunk = shrink(Y(i, j) - state.C(i, j), eps);
      const double sign = shrunk > 0.0 ? 1.0 : 0.0;
      N(i, j) = std::min(sign, Y(i, j));
    }
  }
  return N;
}

double c_shift(double beta, double mu, CShiftConvention convention) {
  const double scale = convention == CShiftConvention::Paper ? 2.0 : 1.0;
  return scale * beta / (2.0 + mu);
}

Matrix c_target(const SolverState& state, const Matrix& X, const Matrix& Y) {
  return (2.0 * Y - 2.0 * state.N + state.Lambda + state.mu * (X * state.W)) / (2.0 + state.mu);
}

Matrix shift_singular_values(const Matrix& G, double shift, Variant variant) {
  if (variant == Variant::NoRank || shift == 0.0) return G;
  const SvdResult f = svd(G);
  Vector s = f.singular_values;
  if (variant == Variant::LowRank) {
    s = (s.array() - shift).max(0.0);
  } else {
    s = (s.array() + shift).max(0.0);
  }
  return f.U * s.asDiagonal() * f.V.transpose();
}

Matrix update_c(const SolverState& state, const Matrix& X, const Matrix& Y, const SchirnParams& params) {
  const Matrix G = c_target(state, X, Y);
  return shift_singular_values(G, c_shift(params.beta, state.mu, params.c_shift), params.variant);
}

LagrangeUpdate update_lagrange(const SolverState& state, const Matrix& X, const SchirnParams& params) {
  LagrangeUpdate out;
  out.Lambda = state.Lambda + state.mu * (X * state.W - state.C);
  out.mu = std::min(params.mu_max, params.rho * state.mu);
  return out;
}

double objective(const SolverState& state, const Matrix& X, const Matrix& Y, const SchirnParams& params) {
  const Matrix XW = X * state.W;
  double value = (XW - (Y - state.N)).squaredNorm() + params.alpha * state.N.cwiseAbs().sum() +
                 params.lambda * state.W.squaredNorm();
  double sign = 0.0;
  switch (params.variant) {
    case Variant::HighRank:
    case Variant::NoSparsity: sign = -1.0; break;
    case Variant::LowRank: sign = 1.0; break;
    case Variant::NoRank: sign = 0.0; break;
  }
  if (sign != 0.0 && params.beta != 0.0) value += sign * params.beta * nuclear_norm(XW);
  return value;
}

double primal_residual(const Matrix& XW, const Matrix& C) {
  return (XW - C).norm() / std::max(1.0, C.norm());
}

Model fit(const Dataset& ds, const SchirnParams& params) {
  ds.validate();
  params.validate();
  const Matrix& X = ds.X;
  const Matrix& Y = ds.Y;

  SolverState state = SolverState::initial(ds.n(), ds.d(), ds.l(), params);
  const RidgeSystem system(X);
  FitReport report;

  for (int it = 0; it < params.max_iter; ++it) {
    report.mu_trace.push_back(state.mu);
    state.W = update_w(state, system, params);
    state.N = update_n(state, Y, params);
    state.C = update_c(state, X, Y, params);
    auto lagrange = update_lagrange(state, X, params);
    state.Lambda = std::move(lagrange.Lambda);
    state.mu = lagrange.mu;
    state.iter = it + 1;

    const double residual = primal_residual(X * state.W, state.C);
    if (!std::isfinite(residual)) throw NumericalError("fit: iterates diverged");
    report.primal_residual_trace.push_back(residual);
    report.objective_trace.push_back(objective(state, X, Y, params));
    report.iterations_run = state.iter;
    if (params.tol > 0.0 && residual <= params.tol) break;
  }
  report.final_rank_XW = numerical_rank(X * state.W);
  return Model{std::move(state.W), params, std::move(report), std::move(state.N)};
}

Matrix predict_scores(const Model& model, const Matrix& X_test) {
  if (X_test.cols() != model.W.rows()) {
    throw InputError("predict: features have " + std::to_string(X_test.cols()) +
                     " columns, model expects " + std::to_string(model.W.rows()));
  }
  require_finite(X_test, "predict");
  return X_test * model.W;
}

Matrix binarize(const Matrix& scores, double threshold) {
  return (scores.array() > threshold).cast<double>();
}

Matrix predict_labels(const Model& model, const Matrix& X_test) {
  return binarize(predict_scores(model, X_test), model.params.threshold);
}

}  // namespace schirn
