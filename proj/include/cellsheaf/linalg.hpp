#pragma once

#include <optional>
#include <vector>

#include "cellsheaf/types.hpp"

// Dense helpers shared by the spectral modules. Everything here works on
// plain Eigen matrices; the sheaf-aware layers sit on top.
namespace cellsheaf::linalg {

/// Eigenvalue threshold below which a PSD eigenvalue counts as zero:
/// max(n, 16) * epsilon * lambda_max.
template <typename Scalar>
Scalar default_zero_tolerance(Index n, Scalar lambda_max);

template <typename Scalar>
struct SymmetricEigen {
  Vector<Scalar> values;  // ascending
  Matrix<Scalar> vectors;
};

/// Eigendecomposition of the symmetric part (A + A^T) / 2.
template <typename Scalar>
SymmetricEigen<Scalar> symmetric_eigen(const Matrix<Scalar>& a);

template <typename Scalar>
Vector<Scalar> symmetric_eigenvalues(const Matrix<Scalar>& a);

/// Principal square root of a symmetric positive-definite matrix.
template <typename Scalar>
Matrix<Scalar> spd_sqrt(const Matrix<Scalar>& a);

template <typename Scalar>
Matrix<Scalar> spd_inverse_sqrt(const Matrix<Scalar>& a);

/// Moore-Penrose pseudoinverse of a symmetric matrix; eigenvalues with
/// |lambda| <= tol are treated as zero.
template <typename Scalar>
Matrix<Scalar> pseudo_inverse(const Matrix<Scalar>& a,
                              std::optional<Scalar> tol = std::nullopt);

/// (A^dagger)^{1/2} for symmetric PSD A.
template <typename Scalar>
Matrix<Scalar> pseudo_inverse_sqrt(const Matrix<Scalar>& a,
                                   std::optional<Scalar> tol = std::nullopt);

template <typename Scalar>
Matrix<Scalar> kron(const Matrix<Scalar>& a, const Matrix<Scalar>& b);

template <typename Scalar>
Matrix<Scalar> block_diagonal(const std::vector<Matrix<Scalar>>& blocks);

/// max |A - A^T| relative to max(1, max |A|).
template <typename Scalar>
Scalar symmetry_residual(const Matrix<Scalar>& a);

/// Rank from singular values above max(m, n) * epsilon * sigma_max (or tol).
template <typename Scalar>
Index numerical_rank(const Matrix<Scalar>& a,
                     std::optional<Scalar> tol = std::nullopt);

/// Orthonormal basis (columns) of ker A, via SVD.
template <typename Scalar>
Matrix<Scalar> null_space(const Matrix<Scalar>& a,
                          std::optional<Scalar> tol = std::nullopt);

/// Orthonormal basis of the orthogonal complement of the column span.
template <typename Scalar>
Matrix<Scalar> orthonormal_complement(const Matrix<Scalar>& basis,
                                      Index ambient_dim);

/// True if A is symmetric and its smallest eigenvalue exceeds tol * max(1, |A|).
template <typename Scalar>
bool is_spd(const Matrix<Scalar>& a, Scalar tol);

/// Spectral norm of R^T R - I.
template <typename Scalar>
Scalar orthogonality_residual(const Matrix<Scalar>& r);

}  // namespace cellsheaf::linalg
