#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cellsheaf/hodge.hpp"

namespace cellsheaf {

/// Boundary data for a harmonic extension: the blocks of `values` over the
/// boundary k-cells are prescribed, the rest is ignored.
template <typename Scalar>
struct BoundaryProblem {
  int degree = 0;
  std::vector<CellId> boundary;
  Cochain<Scalar> values;
  LaplacianPart part = LaplacianPart::full;
};

template <typename Scalar>
struct Extension {
  Cochain<Scalar> cochain;
  bool unique = false;
  Scalar residual = 0;  // |(M Delta x)_S| relative to max(1, |M Delta| |x|)
};

/// Solves Delta(S,S) x_S = -Delta(S,B) x_B on the interior cells S, in the
/// symmetric form M Delta. A singular Delta(S,S) yields the minimum-norm
/// solution with unique = false.
template <typename Scalar>
Extension<Scalar> harmonic_extension(const CellularSheaf<Scalar>& f, const BoundaryProblem<Scalar>& problem,
                                     std::optional<Scalar> tol = std::nullopt);

/// M_k Delta^k: the Laplacian as a symmetric matrix (the energy form).
template <typename Scalar>
BlockOperator<Scalar> energy_form(const CellularSheaf<Scalar>& f, int k,
                                  LaplacianPart part = LaplacianPart::full);

/// Schur complement of the interior blocks onto `boundary` (cells of the
/// operator's block index), using a pseudoinverse when L(S,S) is singular.
template <typename Scalar>
BlockOperator<Scalar> kron_reduce_matrix(const BlockOperator<Scalar>& l, const std::vector<CellIndex>& boundary,
                                         std::optional<Scalar> tol = std::nullopt);

template <typename Scalar>
struct KronReduction {
  CellularSheaf<Scalar> sheaf;  // graph sheaf over the boundary vertices
  BlockOperator<Scalar> schur;
  FactorWidthCertificate<Scalar> certificate;
  Scalar residual = 0;  // max |L_realized - schur| relative to max(1, max |schur|)
};

/// Kron reduction of a graph sheaf with vertex stalks of dimension at most
/// one. The Schur complement of the energy form is scaled to diagonal
/// dominance and realized edge by edge: -w becomes restrictions (sqrt w,
/// sqrt w), +w becomes (sqrt w, -sqrt w), and diagonal surplus r a dangling
/// edge (sqrt r, 0) to another boundary vertex (or to an auxiliary vertex
/// with a zero stalk). Throws KronObstruction when some vertex stalk has
/// dimension two or more.
template <typename Scalar>
KronReduction<Scalar> kron_reduce_sheaf(const CellularSheaf<Scalar>& f, const std::vector<CellId>& boundary,
                                        Scalar tol = Scalar(kCheckTolerance));

/// Reasons a vertex set fails to be thin: G minus B disconnected or empty,
/// or a boundary vertex with no neighbour outside B.
std::vector<std::string> thinness_issues(const CellComplex& graph, const std::vector<CellId>& boundary);

template <typename Scalar>
struct MaxModulusReport {
  Scalar harmonic_residual = 0;
  bool thin = false;
  std::vector<std::string> warnings;
  Scalar max_modulus = 0;
  Scalar max_on_boundary = 0;
  Scalar max_on_interior = 0;
  CellId argmax;
  bool attained_on_boundary = false;
  bool attained_on_interior = false;
  bool constant_modulus = false;
  bool holds = false;  // interior maximum forces constant modulus, and the boundary attains it
};

/// Maximum modulus check for an O(n)-bundle on a graph whose restrictions
/// on each edge share one scale (constant vertex weights), with identity
/// inner products. Throws Error when x is not harmonic off B.
template <typename Scalar>
MaxModulusReport<Scalar> check_max_modulus(const CellularSheaf<Scalar>& f, const std::vector<CellId>& boundary,
                                           const Cochain<Scalar>& x, Scalar tol = Scalar(1e-9));

}  // namespace cellsheaf
