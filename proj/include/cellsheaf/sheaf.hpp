#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cellsheaf/complex.hpp"
#include "cellsheaf/types.hpp"

namespace cellsheaf {

/// Tolerance used for SPD, orthogonality, and commutation checks unless a
/// caller supplies its own.
inline constexpr double kCheckTolerance = 1e-8;

/// A weighted cellular sheaf of finite-dimensional real vector spaces.
///
/// Restriction maps are stored per incidence of the base, in the base's
/// incidence order; restriction(k) maps the stalk over incidences()[k].face
/// into the stalk over incidences()[k].coface. Every stalk carries an inner
/// product (identity unless given).
template <typename Scalar>
class CellularSheaf {
 public:
  CellularSheaf() = default;

  /// Empty `inner_products` means identity everywhere. Throws Error on shape
  /// mismatches or inner products that are not SPD to `tol`.
  CellularSheaf(CellComplex base, std::vector<Index> stalk_dims,
                std::vector<Matrix<Scalar>> restrictions,
                std::vector<Matrix<Scalar>> inner_products = {},
                Scalar tol = Scalar(kCheckTolerance));

  const CellComplex& base() const { return base_; }
  Index stalk_dim(CellIndex c) const { return stalk_dims_.at(c); }
  const std::vector<Index>& stalk_dims() const { return stalk_dims_; }

  const Matrix<Scalar>& restriction(std::size_t incidence) const {
    return restrictions_.at(incidence);
  }
  /// Throws Error when the cells are not a codim-1 incident pair.
  const Matrix<Scalar>& restriction(CellIndex face, CellIndex coface) const;
  const std::vector<Matrix<Scalar>>& restrictions() const { return restrictions_; }

  const Matrix<Scalar>& inner_product(CellIndex c) const { return inner_products_.at(c); }
  const std::vector<Matrix<Scalar>>& inner_products() const { return inner_products_; }
  bool has_identity_inner_products() const;

  /// dim C^k: total stalk dimension over k-cells.
  Index cochain_dim(int k) const;
  /// Offset of a cell's block inside the cochain vector of its degree.
  Index offset(CellIndex c) const { return offsets_.at(c); }

  CellularSheaf with_inner_products(std::vector<Matrix<Scalar>> inner_products) const;
  CellularSheaf with_restrictions(std::vector<Matrix<Scalar>> restrictions) const;

 private:
  CellComplex base_;
  std::vector<Index> stalk_dims_;
  std::vector<Matrix<Scalar>> restrictions_;
  std::vector<Matrix<Scalar>> inner_products_;
  std::vector<Index> offsets_;
  std::vector<Index> degree_dims_;
};

/// Builds a sheaf from id-keyed data. Every cell needs a stalk dimension and
/// every incident pair a restriction; errors name the offending cell or pair.
template <typename Scalar>
CellularSheaf<Scalar> make_sheaf(
    const CellComplex& base, const std::map<CellId, Index>& stalks,
    const std::map<std::pair<CellId, CellId>, Matrix<Scalar>>& restrictions,
    const std::map<CellId, Matrix<Scalar>>& inner_products = {});

/// Component maps phi_sigma: F(sigma) -> G(sigma), one per base cell.
template <typename Scalar>
class SheafMorphism {
 public:
  SheafMorphism(CellularSheaf<Scalar> source, CellularSheaf<Scalar> target,
                std::vector<Matrix<Scalar>> components);

  const CellularSheaf<Scalar>& source() const { return source_; }
  const CellularSheaf<Scalar>& target() const { return target_; }
  const Matrix<Scalar>& component(CellIndex c) const { return components_.at(c); }
  const std::vector<Matrix<Scalar>>& components() const { return components_; }

 private:
  CellularSheaf<Scalar> source_;
  CellularSheaf<Scalar> target_;
  std::vector<Matrix<Scalar>> components_;
};

template <typename Scalar>
struct SquareViolation {
  CellId face;
  CellId coface;
  Scalar residual = 0;  // Frobenius norm of phi_tau F - G phi_sigma
};

/// Squares phi_tau F_{s<t} = G_{s<t} phi_sigma that fail to commute, with a
/// residual above tol * max(1, |phi_tau F|, |G phi_sigma|).
template <typename Scalar>
std::vector<SquareViolation<Scalar>> validate_morphism(const SheafMorphism<Scalar>& phi,
                                                       Scalar tol = Scalar(kCheckTolerance));

template <typename Scalar>
SheafMorphism<Scalar> identity_morphism(const CellularSheaf<Scalar>& f);

/// phi^k: block-diagonal map C^k(F) -> C^k(G).
template <typename Scalar>
Matrix<Scalar> cochain_map(const SheafMorphism<Scalar>& phi, int k);

/// Stalks R^d, restriction (alpha_tau / alpha_sigma) Id; alpha defaults to 1.
template <typename Scalar>
CellularSheaf<Scalar> constant_sheaf(const CellComplex& x, Index d,
                                     const std::map<CellId, Scalar>& weights = {});

template <typename Scalar>
CellularSheaf<Scalar> direct_sum(const CellularSheaf<Scalar>& f, const CellularSheaf<Scalar>& g);

template <typename Scalar>
CellularSheaf<Scalar> tensor(const CellularSheaf<Scalar>& f, const CellularSheaf<Scalar>& g);

/// f^*G. Collapsed pairs (f(s) = f(t)) get the identity restriction.
template <typename Scalar>
CellularSheaf<Scalar> pullback(const CellMap& f, const CellularSheaf<Scalar>& g);

/// f_*F for a locally injective f. The stalk over sigma is the direct sum of
/// the stalks over its fiber, in source order. Each block carries the sign
/// ratio [s':t'][s:t] so that the pushed-forward coboundary is a permutation
/// of the original one.
template <typename Scalar>
CellularSheaf<Scalar> pushforward(const CellMap& f, const CellularSheaf<Scalar>& sheaf);

/// F boxtimes G on product_complex(F.base(), G.base()).
template <typename Scalar>
CellularSheaf<Scalar> product_sheaf(const CellularSheaf<Scalar>& f, const CellularSheaf<Scalar>& g);

/// Per-edge (R_tail, R_head); edges not listed use the identity.
template <typename Scalar>
using Rotations = std::map<CellId, std::pair<Matrix<Scalar>, Matrix<Scalar>>>;

/// O(n)-bundle on a graph: F_{v<e} = (alpha_e / alpha_v) R. Throws Error if
/// some R is not orthogonal to `tol`.
template <typename Scalar>
CellularSheaf<Scalar> on_bundle(const CellComplex& graph, Index n, const Rotations<Scalar>& rotations,
                                const std::map<CellId, Scalar>& weights = {},
                                Scalar tol = Scalar(kCheckTolerance));

/// If every restriction of a graph sheaf is c_e times an orthogonal matrix
/// with one scale c_e per edge, returns the scales indexed by edge position.
template <typename Scalar>
std::optional<std::vector<Scalar>> bundle_edge_scales(const CellularSheaf<Scalar>& f,
                                                      Scalar tol = Scalar(kCheckTolerance));

}  // namespace cellsheaf
