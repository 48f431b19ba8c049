#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "cellsheaf/linalg.hpp"

namespace cellsheaf::linalg {

template <typename Scalar>
Scalar default_zero_tolerance(Index n, Scalar lambda_max) {
  using std::abs;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  return static_cast<Scalar>(std::max<Index>(n, 16)) * eps * abs(lambda_max);
}

template <typename Scalar>
SymmetricEigen<Scalar> symmetric_eigen(const Matrix<Scalar>& a) {
  SymmetricEigen<Scalar> out;
  if (a.rows() == 0) {
    out.values.resize(0);
    out.vectors.resize(0, 0);
    return out;
  }
  const Matrix<Scalar> sym = (a + a.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(sym);
  if (solver.info() != Eigen::Success) throw Error("symmetric eigensolver failed to converge");
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  return out;
}

template <typename Scalar>
Vector<Scalar> symmetric_eigenvalues(const Matrix<Scalar>& a) {
  if (a.rows() == 0) return Vector<Scalar>(0);
  const Matrix<Scalar> sym = (a + a.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("symmetric eigensolver failed to converge");
  return solver.eigenvalues();
}

template <typename Scalar>
Matrix<Scalar> spd_sqrt(const Matrix<Scalar>& a) {
  auto eig = symmetric_eigen(a);
  Vector<Scalar> root = eig.values.unaryExpr([](Scalar v) {
    using std::sqrt;
    return sqrt(std::max(v, Scalar(0)));
  });
  return eig.vectors * root.asDiagonal() * eig.vectors.transpose();
}

template <typename Scalar>
Matrix<Scalar> spd_inverse_sqrt(const Matrix<Scalar>& a) {
  auto eig = symmetric_eigen(a);
  for (Index i = 0; i < eig.values.size(); ++i)
    if (!(eig.values(i) > Scalar(0))) throw Error("matrix is not positive definite");
  Vector<Scalar> root = eig.values.unaryExpr([](Scalar v) {
    using std::sqrt;
    return Scalar(1) / sqrt(v);
  });
  return eig.vectors * root.asDiagonal() * eig.vectors.transpose();
}

namespace detail {

template <typename Scalar, typename Fn>
Matrix<Scalar> spectral_pseudo_map(const Matrix<Scalar>& a, std::optional<Scalar> tol, Fn fn) {
  if (a.rows() == 0) return Matrix<Scalar>(0, 0);
  auto eig = symmetric_eigen(a);
  using std::abs;
  const Scalar scale = eig.values.cwiseAbs().maxCoeff();
  const Scalar cut = tol ? *tol : default_zero_tolerance(a.rows(), scale);
  Vector<Scalar> mapped(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i)
    mapped(i) = abs(eig.values(i)) > cut ? fn(eig.values(i)) : Scalar(0);
  return eig.vectors * mapped.asDiagonal() * eig.vectors.transpose();
}

}  // namespace detail

template <typename Scalar>
Matrix<Scalar> pseudo_inverse(const Matrix<Scalar>& a, std::optional<Scalar> tol) {
  return detail::spectral_pseudo_map(a, tol, [](Scalar v) { return Scalar(1) / v; });
}

template <typename Scalar>
Matrix<Scalar> pseudo_inverse_sqrt(const Matrix<Scalar>& a, std::optional<Scalar> tol) {
  return detail::spectral_pseudo_map(a, tol, [](Scalar v) {
    using std::sqrt;
    return v > Scalar(0) ? Scalar(1) / sqrt(v) : Scalar(0);
  });
}

template <typename Scalar>
Matrix<Scalar> kron(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Matrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <typename Scalar>
Matrix<Scalar> block_diagonal(const std::vector<Matrix<Scalar>>& blocks) {
  Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix<Scalar> out = Matrix<Scalar>::Zero(rows, cols);
  Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

template <typename Scalar>
Scalar symmetry_residual(const Matrix<Scalar>& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<Scalar>::infinity();
  if (a.size() == 0) return Scalar(0);
  const Scalar scale = std::max(Scalar(1), a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
}

template <typename Scalar>
Index numerical_rank(const Matrix<Scalar>& a, std::optional<Scalar> tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix<Scalar>> svd(a);
  const auto& s = svd.singularValues();
  const Scalar cut = tol ? *tol
                         : static_cast<Scalar>(std::max(a.rows(), a.cols())) *
                               std::numeric_limits<Scalar>::epsilon() * s(0);
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return rank;
}

template <typename Scalar>
Matrix<Scalar> null_space(const Matrix<Scalar>& a, std::optional<Scalar> tol) {
  const Index n = a.cols();
  if (n == 0) return Matrix<Scalar>(0, 0);
  if (a.rows() == 0) return Matrix<Scalar>::Identity(n, n);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const Scalar cut = tol ? *tol
                         : static_cast<Scalar>(std::max(a.rows(), a.cols())) *
                               std::numeric_limits<Scalar>::epsilon() * s(0);
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

template <typename Scalar>
Matrix<Scalar> orthonormal_complement(const Matrix<Scalar>& basis, Index ambient_dim) {
  if (basis.cols() == 0) return Matrix<Scalar>::Identity(ambient_dim, ambient_dim);
  return null_space<Scalar>(basis.transpose());
}

template <typename Scalar>
bool is_spd(const Matrix<Scalar>& a, Scalar tol) {
  if (a.rows() != a.cols()) return false;
  if (a.rows() == 0) return true;
  if (symmetry_residual(a) > tol) return false;
  const Scalar scale = std::max(Scalar(1), a.cwiseAbs().maxCoeff());
  return symmetric_eigenvalues(a)(0) > tol * scale;
}

template <typename Scalar>
Scalar orthogonality_residual(const Matrix<Scalar>& r) {
  if (r.size() == 0) return Scalar(0);
  const Matrix<Scalar> gram = r.transpose() * r - Matrix<Scalar>::Identity(r.cols(), r.cols());
  return symmetric_eigenvalues(gram).cwiseAbs().maxCoeff();
}

}  // namespace cellsheaf::linalg
