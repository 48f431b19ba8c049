#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cellsheaf/sheaf.hpp"

namespace cellsheaf {

/// Block layout of a cochain space: cells in cochain order with their
/// offsets and stalk sizes.
struct BlockIndex {
  std::vector<CellIndex> cells;
  std::vector<Index> offsets;
  std::vector<Index> sizes;

  Index total() const { return offsets.empty() ? 0 : offsets.back() + sizes.back(); }
  /// Position of `cell` in `cells`, if present.
  std::optional<std::size_t> find(CellIndex cell) const {
    auto it = std::find(cells.begin(), cells.end(), cell);
    if (it == cells.end()) return std::nullopt;
    return static_cast<std::size_t>(it - cells.begin());
  }
};

/// Dense matrix carrying the block layout of its domain and codomain.
template <typename Scalar>
struct BlockOperator {
  Matrix<Scalar> matrix;
  BlockIndex rows;
  BlockIndex cols;

  auto block(std::size_t row_block, std::size_t col_block) const {
    return matrix.block(rows.offsets[row_block], cols.offsets[col_block], rows.sizes[row_block],
                        cols.sizes[col_block]);
  }
};

template <typename Scalar>
struct Cochain {
  int degree = 0;
  Vector<Scalar> values;
};

template <typename Scalar>
BlockIndex cochain_index(const CellularSheaf<Scalar>& f, int k);

/// Cochain from per-cell blocks; cells not mentioned are zero. Throws Error
/// on wrong degree or block length.
template <typename Scalar>
Cochain<Scalar> make_cochain(const CellularSheaf<Scalar>& f, int k,
                             const std::map<CellId, Vector<Scalar>>& blocks);

template <typename Scalar>
Vector<Scalar> cochain_block(const CellularSheaf<Scalar>& f, const Cochain<Scalar>& x, CellIndex cell);

/// M_k: block diagonal of the stalk inner products over k-cells.
template <typename Scalar>
Matrix<Scalar> inner_product_matrix(const CellularSheaf<Scalar>& f, int k);

/// Block diagonal of M_sigma^{1/2} (power = 1) or M_sigma^{-1/2} (power = -1).
template <typename Scalar>
Matrix<Scalar> inner_product_root(const CellularSheaf<Scalar>& f, int k, int power);

/// delta^k: C^k -> C^{k+1}, block (tau, sigma) = [sigma : tau] F_{sigma<tau}.
template <typename Scalar>
BlockOperator<Scalar> coboundary(const CellularSheaf<Scalar>& f, int k);

/// (delta^k)^* = M_k^{-1} delta^T M_{k+1}: C^{k+1} -> C^k.
template <typename Scalar>
BlockOperator<Scalar> coboundary_adjoint(const CellularSheaf<Scalar>& f, int k);

/// M_{k+1}^{1/2} delta^k M_k^{-1/2}: the coboundary in orthonormal coordinates.
template <typename Scalar>
Matrix<Scalar> orthonormal_coboundary(const CellularSheaf<Scalar>& f, int k);

enum class LaplacianPart { up, down, full };

template <typename Scalar>
BlockOperator<Scalar> up_laplacian(const CellularSheaf<Scalar>& f, int k);

template <typename Scalar>
BlockOperator<Scalar> down_laplacian(const CellularSheaf<Scalar>& f, int k);

template <typename Scalar>
BlockOperator<Scalar> hodge_laplacian(const CellularSheaf<Scalar>& f, int k);

template <typename Scalar>
BlockOperator<Scalar> laplacian(const CellularSheaf<Scalar>& f, int k, LaplacianPart part);

/// M^{1/2} Delta M^{-1/2}, an ordinary symmetric PSD matrix with the same
/// spectrum as the self-adjoint Laplacian.
template <typename Scalar>
Matrix<Scalar> orthonormal_laplacian(const CellularSheaf<Scalar>& f, int k,
                                     LaplacianPart part = LaplacianPart::full);

template <typename Scalar>
struct HarmonicBasis {
  Matrix<Scalar> basis;  // columns, orthonormal for the stalk inner products
  Index dimension = 0;
  Scalar zero_tol = 0;
};

/// Basis of ker Delta^k. Eigenvalues at most `tol` count as zero; the default
/// is linalg::default_zero_tolerance.
template <typename Scalar>
HarmonicBasis<Scalar> harmonic_cochains(const CellularSheaf<Scalar>& f, int k,
                                        std::optional<Scalar> tol = std::nullopt);

template <typename Scalar>
Index cohomology_dim(const CellularSheaf<Scalar>& f, int k, std::optional<Scalar> tol = std::nullopt);

/// dim H^k(X, A; F) from the Hodge kernel of the coboundary restricted to
/// cells outside the subcomplex A.
template <typename Scalar>
Index relative_cohomology_dim(const CellularSheaf<Scalar>& f, const std::vector<CellId>& subcomplex,
                              int k, std::optional<Scalar> tol = std::nullopt);

/// Frobenius norm of delta^{k+1} delta^k.
template <typename Scalar>
Scalar coboundary_composition_residual(const CellularSheaf<Scalar>& f, int k);

/// Largest coboundary_composition_residual over all degrees.
template <typename Scalar>
Scalar max_composition_residual(const CellularSheaf<Scalar>& f);

/// Orthogonal projectors (orthonormal coordinates) onto ker Delta^k,
/// im delta^{k-1}, and im (delta^k)^*.
template <typename Scalar>
struct HodgeProjectors {
  Matrix<Scalar> harmonic;
  Matrix<Scalar> exact;
  Matrix<Scalar> coexact;
};

template <typename Scalar>
HodgeProjectors<Scalar> hodge_projectors(const CellularSheaf<Scalar>& f, int k,
                                         std::optional<Scalar> tol = std::nullopt);

template <typename Scalar>
struct HodgeDecomposition {
  Cochain<Scalar> harmonic;
  Cochain<Scalar> exact;
  Cochain<Scalar> coexact;
};

template <typename Scalar>
HodgeDecomposition<Scalar> hodge_decomposition(const CellularSheaf<Scalar>& f, const Cochain<Scalar>& x,
                                               std::optional<Scalar> tol = std::nullopt);

/// Reweights stalk inner products from the top dimension down so that on
/// every stalk delta is an isometry on the complement of its kernel:
/// <x, y>_N = <delta x, delta y> + <Pi x, Pi y>, with Pi the projection onto
/// the kernel of delta restricted to the stalk. Top-dimensional stalks keep
/// their inner products.
template <typename Scalar>
CellularSheaf<Scalar> normalize_sheaf(const CellularSheaf<Scalar>& f);

/// Largest |<delta x, delta y> - <x, y>| over orthonormal bases of the
/// complements of the stalkwise kernels; zero for a normalized sheaf.
template <typename Scalar>
Scalar normalization_residual(const CellularSheaf<Scalar>& f);

/// D^{+/2} L D^{+/2} for the degree-0 Laplacian of a graph sheaf, with D its
/// block diagonal.
template <typename Scalar>
BlockOperator<Scalar> normalized_laplacian(const CellularSheaf<Scalar>& f,
                                           std::optional<Scalar> tol = std::nullopt);

template <typename Scalar>
struct FactorWidthCertificate {
  bool value = false;
  Vector<Scalar> scaling;  // D with D L D weakly diagonally dominant, when value
  Scalar residual = 0;     // worst relative dominance defect under `scaling`
  int iterations = 0;
  std::string witness;     // reason when !value
};

/// Factor width at most two, i.e. symmetric PSD and generalized diagonally
/// dominant. The scaling is the Perron vector of diag(L)^{-1} |offdiag(L)|
/// on each irreducible block, found by damped power iteration (at most
/// `max_iterations`).
template <typename Scalar>
FactorWidthCertificate<Scalar> is_factor_width_two(const Matrix<Scalar>& l,
                                                   Scalar tol = Scalar(kCheckTolerance),
                                                   int max_iterations = 1000);

}  // namespace cellsheaf
