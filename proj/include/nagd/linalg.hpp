#pragma once

#include <optional>
#include <span>

#include "nagd/matrix.hpp"

// Small dense kernels shared by the spectral, game and analysis modules.
namespace nagd::linalg {

double norm2(std::span<const double> x);
double norm2(std::span<const Complex> x);
double dot(std::span<const double> a, std::span<const double> b);
/// w^* x, conjugating the first argument.
Complex conj_dot(std::span<const Complex> w, std::span<const double> x);
Complex conj_dot(std::span<const Complex> w, std::span<const Complex> x);

double frobenius_norm(const Matrix& a);
double frobenius_norm(const CMatrix& a);
bool all_finite(const Matrix& a);

Vector matvec(const Matrix& a, std::span<const double> x);
void matvec(const Matrix& a, std::span<const double> x, std::span<double> out);
Matrix matmul(const Matrix& a, const Matrix& b);
CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix to_complex(const Matrix& a);
CMatrix adjoint(const CMatrix& a);

template <class T>
struct Svd {
  Vector singular_values;  // descending
  DenseMatrix<T> u;        // left singular vectors (columns)
  DenseMatrix<T> v;        // right singular vectors (columns)
};

/// One-sided (Hestenes) Jacobi SVD of a square or tall matrix.
Svd<double> svd(const Matrix& a);
Svd<Complex> svd(const CMatrix& a);

/// Spectral-norm condition number; infinity when the smallest singular value
/// is exactly zero.
double condition_number(const CMatrix& a);

/// LU with partial pivoting. Returns nullopt when a pivot is exactly zero or
/// the result is not finite.
std::optional<CMatrix> inverse(const CMatrix& a);
std::optional<Matrix> inverse(const Matrix& a);

struct SymmetricEigen {
  Vector values;  // ascending
  Matrix vectors; // orthonormal columns
};

/// Cyclic Jacobi for real symmetric input (only the upper triangle is read).
SymmetricEigen symmetric_eigen(const Matrix& a);

/// Eigenvalues of a general real matrix: Householder reduction to upper
/// Hessenberg form followed by Francis double-shift QR. Throws
/// EigensolverNoConvergence when more than max_sweeps QR sweeps are needed.
CVector hessenberg_qr_eigenvalues(const Matrix& a, int max_sweeps);

/// Orthonormal basis (columns) of the right null space of `a`, using the
/// singular value threshold rel_tol * sigma_max.
Matrix null_space(const Matrix& a, double rel_tol);

/// Minimum-norm least-squares solution of a x = rhs via the pseudo-inverse
/// (singular values below rel_tol * sigma_max are dropped).
Vector min_norm_solve(const Matrix& a, std::span<const double> rhs, double rel_tol);

}  // namespace nagd::linalg
