#pragma once

#include <map>
#include <vector>

#include "cellsheaf/hodge.hpp"

namespace cellsheaf {

/// Orthogonal projection of x0 onto ker Delta^k in the stalk inner products.
template <typename Scalar>
Cochain<Scalar> harmonic_projection(const CellularSheaf<Scalar>& f, const Cochain<Scalar>& x0);

template <typename Scalar>
struct Diffusion {
  std::vector<Cochain<Scalar>> trajectory;  // x_0, ..., x_steps
  std::vector<Scalar> energies;             // <x_t, Delta x_t>
  bool energy_nonincreasing = true;
  Scalar lambda_max = 0;
  Scalar lambda_min_nonzero = 0;            // zero if Delta vanishes
  Cochain<Scalar> projection;               // harmonic projection of x_0
  Scalar final_distance = 0;                // |x_T - projection|
  Scalar predicted_distance = 0;            // |x_0| exp(-lambda_min T dt (1 - dt lambda_max / 2))
  Cochain<Scalar> exact;                    // exp(-T dt Delta) x_0
  Scalar exact_distance = 0;                // |x_T - exact|
};

/// Explicit Euler for dx/dt = -Delta^k x: x_{t+1} = x_t - dt Delta x_t. Norms
/// are in the stalk inner products. Throws Error unless 0 < dt < 2 / lambda_max
/// and steps >= 0.
template <typename Scalar>
Diffusion<Scalar> diffuse(const CellularSheaf<Scalar>& f, const Cochain<Scalar>& x0, Scalar dt, int steps);

/// Edge subspaces K_e of V = R^{dim_v}, each given by basis columns.
template <typename Scalar>
struct ApproximationSpec {
  CellComplex graph;
  Index dim_v = 0;
  std::map<CellId, Matrix<Scalar>> subspaces;  // edges not listed get K_e = 0
};

template <typename Scalar>
struct ConstantApproximation {
  CellularSheaf<Scalar> sheaf;
  SheafMorphism<Scalar> morphism;  // weighted constant sheaf -> sheaf
  Index sections = 0;              // dim H^0 of the approximation
  bool is_valid = false;           // same dim H^0 as the constant sheaf
};

/// Vertex stalks V, edge stalks R^{dim V - dim K_e}; both restrictions on e
/// equal alpha_e Q_e with Q_e having orthonormal rows spanning K_e^perp.
/// Throws Error for malformed subspaces (wrong row count, dependent columns,
/// non-edge keys).
template <typename Scalar>
ConstantApproximation<Scalar> approximate_constant_sheaf(const ApproximationSpec<Scalar>& spec,
                                                         const std::map<CellId, Scalar>& edge_weights = {});

struct Cutset {
  std::vector<CellId> edges;
  Index intersection_dim = 0;
};

struct CutsetReport {
  int cap = 0;                     // largest side enumerated besides bridges
  std::size_t checked = 0;
  std::vector<Cutset> violations;  // cutsets whose K_e intersect nontrivially
  bool passes = true;
};

/// Checks every bridge and the crossing set of every connected vertex set of
/// size at most `cap`. Passing is necessary, not sufficient, for validity.
/// Throws Error when the graph is disconnected.
template <typename Scalar>
CutsetReport check_cutset_condition(const ApproximationSpec<Scalar>& spec, int cap = 4);

template <typename Scalar>
struct ApproximationBound {
  Index k = 0;  // common edge stalk dimension
  Index dim_v = 0;
  Scalar lambda_f = 0;
  Scalar lambda_const = 0;
  Scalar bound = 0;  // (k / dim V) lambda_const
  bool holds = false;
  Scalar lambda_f_max = 0;
  Scalar lambda_const_max = 0;
  Scalar max_bound = 0;
  bool max_holds = false;
};

/// lambda_F <= (k / dim V) lambda_const and lambda_F^max >= (k / dim V)
/// lambda_const^max for a morphism from a weighted constant sheaf (vertex
/// weights 1) whose vertex components are identities and edge components
/// have orthonormal rows. Throws Error when a hypothesis is unmet.
template <typename Scalar>
ApproximationBound<Scalar> approximation_spectral_bound_check(const SheafMorphism<Scalar>& a,
                                                              Scalar tol = Scalar(kCheckTolerance));

}  // namespace cellsheaf
