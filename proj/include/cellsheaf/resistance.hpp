#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cellsheaf/hodge.hpp"

namespace cellsheaf {

// Chains are the cochains of the dual weighted cosheaf: C_k = C^k with
// boundary d_{k+1} = (delta^k)^*, so the Laplacian d_{k+1} d_{k+1}^* is the
// up-Laplacian of degree k.

inline constexpr double kHomologyTolerance = 1e-8;

/// <b - a, (L^k)^+ (b - a)> for homologous k-cycles a, b. Throws Error when
/// a or b is not a cycle or b - a is not a boundary (projection residual
/// above tol |b - a|), and when the two solvers disagree.
template <typename Scalar>
Scalar effective_resistance(const CellularSheaf<Scalar>& f, int k, const Cochain<Scalar>& a,
                            const Cochain<Scalar>& b, Scalar tol = Scalar(kHomologyTolerance));

/// min |c|^2 subject to d_{k+1} c = b - a, solved directly with a complete
/// orthogonal decomposition. No cycle or homology checks.
template <typename Scalar>
Scalar least_norm_resistance(const CellularSheaf<Scalar>& f, int k, const Cochain<Scalar>& a,
                             const Cochain<Scalar>& b);

template <typename Scalar>
struct ResistanceForm {
  CellIndex cell = 0;
  Matrix<Scalar> matrix;  // x^T Q x = <d x, L^+ d x> for x in stalk coordinates
  Scalar trace = 0;       // trace of (d|_sigma)^* L^+ d|_sigma
};

/// Resistance form of a (k+1)-cell sigma, using L^k.
template <typename Scalar>
ResistanceForm<Scalar> cell_resistance(const CellularSheaf<Scalar>& f, CellIndex sigma);

/// Counter-based generator: uniform double in [0, 1) from (seed, counter),
/// via two rounds of the SplitMix64 finalizer.
double uniform_from_counter(std::uint64_t seed, std::uint64_t counter);

template <typename Scalar>
struct SparsifyReport {
  std::uint64_t seed = 0;
  Scalar epsilon = 0;
  Index n = 0;                       // dim C^{d-1}
  std::size_t total_cells = 0;       // d-cells of X
  std::size_t kept_cells = 0;
  std::vector<Scalar> probabilities;  // per d-cell, in cell order
  std::vector<bool> kept;
  Scalar expected_cells = 0;         // sum of p_sigma
  Scalar trace_sum = 0;              // sum of tr R_eff(sigma), at most n
  Scalar lambda_min = 0;             // extreme eigenvalues of L^{+/2} L' L^{+/2} on (ker L)^perp
  Scalar lambda_max = 0;
  Scalar relative_error = 0;         // max(1 - lambda_min, lambda_max - 1)
  bool within_bound = false;         // relative_error <= epsilon
};

template <typename Scalar>
struct Sparsification {
  CellularSheaf<Scalar> sheaf;  // F' over X'
  SparsifyReport<Scalar> report;
};

/// Keeps each top-dimensional cell sigma independently with probability
/// p = min(1, 4 eps^-2 log(n) tr R_eff(sigma)) and scales the restriction
/// maps into kept cells by 1/sqrt(p). Throws Error for eps outside (0, 1)
/// or n < 2. Violations of the spectral bound are reported, not thrown.
template <typename Scalar>
Sparsification<Scalar> sparsify(const CellularSheaf<Scalar>& f, Scalar epsilon, std::uint64_t seed);

}  // namespace cellsheaf
