#include "schirn/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "schirn/error.hpp"

namespace schirn {

void require_finite(const Matrix& A, std::string_view where) {
  if (!A.allFinite()) {
    throw NumericalError(std::string(where) + ": non-finite entry in input");
  }
}

SvdResult svd(const Matrix& A) {
  require_finite(A, "svd");
  // Column-pivoting QR preconditioning keeps tall n x l inputs cheap: the
  // two-sided Jacobi sweep runs on the l x l triangular factor.
  Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> jacobi(
      A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (jacobi.info() != Eigen::Success) {
    throw NumericalError("svd: Jacobi iteration did not converge");
  }
  SvdResult out{jacobi.matrixU(), jacobi.singularValues(), jacobi.matrixV()};
  if (!out.singular_values.allFinite() || !out.U.allFinite() || !out.V.allFinite()) {
    throw NumericalError("svd: non-finite factors");
  }
  return out;
}

EigResult sym_eig(const Matrix& A) {
  if (A.rows() != A.cols()) {
    throw InputError("sym_eig: matrix is " + std::to_string(A.rows()) + "x" +
                     std::to_string(A.cols()) + ", expected square");
  }
  require_finite(A, "sym_eig");
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InputError("sym_eig: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(A);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("sym_eig: eigen solver did not converge");
  }
  return {solver.eigenvectors(), solver.eigenvalues()};
}

Matrix solve_spd(const Matrix& A, const Matrix& B) {
  if (A.rows() != A.cols() || A.rows() != B.rows()) {
    throw InputError("solve_spd: dimension mismatch");
  }
  require_finite(A, "solve_spd");
  require_finite(B, "solve_spd");
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw NumericalError("solve_spd: matrix is not symmetric positive definite");
  }
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("solve_spd: Cholesky factorization failed (matrix not SPD)");
  }
  Matrix X = llt.solve(B);
  if (!X.allFinite()) throw NumericalError("solve_spd: non-finite solution");
  return X;
}

double rank_tolerance(const Matrix& A, const Vector& singular_values) {
  const double sigma_max = singular_values.size() > 0 ? singular_values.maxCoeff() : 0.0;
  return static_cast<double>(std::max(A.rows(), A.cols())) *
         std::numeric_limits<double>::epsilon() * sigma_max;
}

int numerical_rank(const Matrix& A, const Vector& singular_values) {
  const double tol = rank_tolerance(A, singular_values);
  return static_cast<int>((singular_values.array() > tol).count());
}

int numerical_rank(const Matrix& A) {
  require_finite(A, "numerical_rank");
  Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> jacobi(A);
  return numerical_rank(A, jacobi.singularValues());
}

double nuclear_norm(const Matrix& A) {
  require_finite(A, "nuclear_norm");
  Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> jacobi(A);
  return jacobi.singularValues().sum();
}

MatrixNorms norms(const Matrix& A) {
  require_finite(A, "norms");
  return {A.norm(), A.cwiseAbs().sum(), nuclear_norm(A)};
}

}  // namespace schirn
