#pragma once

#include <Eigen/Dense>
#include <string_view>

namespace schirn {

/// Dense real matrix used for features, labels, weights and solver state.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thin singular value decomposition A = U diag(s) V^T, k = min(rows, cols),
/// singular values non-increasing.
struct SvdResult {
  Matrix U;
  Vector singular_values;
  Matrix V;
};

/// Eigendecomposition A = Q diag(eigenvalues) Q^T of a symmetric matrix,
/// eigenvalues ascending.
struct EigResult {
  Matrix Q;
  Vector eigenvalues;
};

struct MatrixNorms {
  double frobenius = 0.0;
  double l1 = 0.0;
  double nuclear = 0.0;
};

/// Throws NumericalError naming `where` if any entry is NaN or infinite.
void require_finite(const Matrix& A, std::string_view where);

SvdResult svd(const Matrix& A);

/// Throws InputError if A is not square or not symmetric to 1e-10.
EigResult sym_eig(const Matrix& A);

/// Soft-thresholding: sign(a) * max(0, |a| - eps).
inline double shrink(double a, double eps) {
  if (a > eps) return a - eps;
  if (a < -eps) return a + eps;
  return 0.0;
}

/// Solves A X = B for symmetric positive definite A via Cholesky.
Matrix solve_spd(const Matrix& A, const Matrix& B);

/// Relative tolerance factor of numerical_rank: singular values above
/// max(rows, cols) * machine epsilon * sigma_max count toward the rank.
double rank_tolerance(const Matrix& A, const Vector& singular_values);

int numerical_rank(const Matrix& A);
int numerical_rank(const Matrix& A, const Vector& singular_values);

MatrixNorms norms(const Matrix& A);
double nuclear_norm(const Matrix& A);

}  // namespace schirn
