#pragma once

#include <optional>
#include <vector>

#include "cellsheaf/hodge.hpp"

namespace cellsheaf {

/// Relative tolerance for eigenvalue multiset comparisons (scaled by
/// max(1, lambda_max)).
inline constexpr double kSpectrumTolerance = 1e-8;

template <typename Scalar>
struct Spectrum {
  Vector<Scalar> eigenvalues;  // ascending, with multiplicity
  Scalar zero_tol = 0;

  Index size() const { return eigenvalues.size(); }
  Index zero_count() const;
  Scalar max() const { return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) : Scalar(0); }
};

/// Full spectrum of a symmetric matrix. Throws Error when the symmetry
/// residual exceeds 1e-8.
template <typename Scalar>
Spectrum<Scalar> spectrum(const Matrix<Scalar>& a, std::optional<Scalar> tol = std::nullopt);

/// Spectrum of a self-adjoint Laplacian, computed in orthonormal coordinates.
template <typename Scalar>
Spectrum<Scalar> laplacian_spectrum(const CellularSheaf<Scalar>& f, int k,
                                    LaplacianPart part = LaplacianPart::full,
                                    std::optional<Scalar> tol = std::nullopt);

/// Max entrywise gap between two PSD spectra after sorting both in
/// descending order and padding the shorter with zeros. Comparing nonzero
/// spectra this way needs no zero threshold.
template <typename Scalar>
Scalar padded_spectrum_distance(const Vector<Scalar>& a, const Vector<Scalar>& b);

/// True if every value of `sub` is matched by a distinct value of `super`
/// within `tol`.
template <typename Scalar>
bool spectrum_contains(const Vector<Scalar>& super, const Vector<Scalar>& sub, Scalar tol);

template <typename Scalar>
struct HodgeSpectralReport {
  Scalar union_error = 0;     // nonzero spec Delta vs nonzero spec Delta+ and Delta-
  Scalar adjacent_error = 0;  // nonzero spec Delta^k_+ vs Delta^{k+1}_-
  Scalar tolerance = 0;
  bool holds = false;
};

template <typename Scalar>
HodgeSpectralReport<Scalar> check_hodge_spectral_relations(const CellularSheaf<Scalar>& f, int k,
                                                           Scalar tol = Scalar(kSpectrumTolerance));

/// (p,q)-interlacing: lambda_{k-p} <= mu_k <= lambda_{k+q} for all k. A bound
/// whose index falls outside [1, n] is vacuous, so a rank-t PSD perturbation
/// is (t,0)-interlaced even when lambda_1 > 0. Both lists
/// ascending and of equal length (throws Error otherwise). The default slack
/// is 1e-9 * max(1, max |lambda|).
template <typename Scalar>
bool check_interlacing(const Vector<Scalar>& lambda, const Vector<Scalar>& mu, int p, int q,
                       std::optional<Scalar> tol = std::nullopt);

template <typename Scalar>
struct DeletionReport {
  Index t = 0;
  Vector<Scalar> lambda;  // spectrum of Delta^k_F
  Vector<Scalar> mu;      // spectrum of Delta^k of F restricted to X \ C, padded with zeros
  bool interlaced = false;
  bool normalized_checked = false;
  Vector<Scalar> normalized_lambda;
  Vector<Scalar> normalized_mu;
  bool normalized_interlaced = false;
};

/// Compares Delta^k of F with Delta^k of its restriction to X \ C. t is the
/// rank of Delta^k of the sheaf G that keeps only the restriction maps into
/// cells of C. For degree 0 on a graph the normalized Laplacians are also
/// checked for (t,t)-interlacing.
template <typename Scalar>
DeletionReport<Scalar> deletion_interlacing(const CellularSheaf<Scalar>& f, const std::vector<CellId>& deleted,
                                            int k);

/// F restricted to a subcomplex given as X minus an upward-closed set.
template <typename Scalar>
CellularSheaf<Scalar> restrict_to_complement(const CellularSheaf<Scalar>& f, const std::vector<CellId>& deleted);

template <typename Scalar>
struct ConjugationReport {
  Scalar isometry_residual = 0;  // |(phi^{k+1})^* phi^{k+1} - I|
  bool unitary = false;
  Scalar conjugation_residual = 0;  // |L^k_F - (phi^k)^* L^k_G phi^k|, relative
  bool holds = false;
};

/// Up-Laplacian conjugation identity for a sheaf morphism.
template <typename Scalar>
ConjugationReport<Scalar> morphism_conjugation_check(const SheafMorphism<Scalar>& phi, int k,
                                                     Scalar tol = Scalar(kCheckTolerance));

template <typename Scalar>
struct SpectrumComparison {
  Vector<Scalar> source;  // spectrum on the domain side
  Vector<Scalar> target;
  Scalar error = 0;
  bool holds = false;
};

/// Up-Laplacian spectra of F and f_*F agree as multisets.
template <typename Scalar>
SpectrumComparison<Scalar> pushforward_isospectral_check(const CellMap& f, const CellularSheaf<Scalar>& sheaf, int k,
                                                         Scalar tol = Scalar(kSpectrumTolerance));

/// For a covering f: C -> X, the up-Laplacian spectrum of F is contained in
/// that of f^*F (source = spectrum of F, target = spectrum of f^*F).
template <typename Scalar>
SpectrumComparison<Scalar> covering_containment_check(const CellMap& f, const CellularSheaf<Scalar>& sheaf, int k,
                                                      Scalar tol = Scalar(kSpectrumTolerance));

template <typename Scalar>
struct FiberBoundReport {
  std::size_t fiber_d = 0;
  std::size_t fiber_d1 = 0;
  Index kernel_dim = 0;            // m = dim ker L^d_F
  Scalar lambda_base = 0;          // lambda_{m+1}(L^d_F)
  Scalar lambda_pullback = 0;      // lambda_{m+1}(L^d_{f^*F})
  bool vacuous = false;            // L^d_F has no nonzero eigenvalue
  bool holds = false;
};

/// For dimension-preserving f: Y -> X with constant fiber sizes l_d over
/// d-cells and l_{d+1} over (d+1)-cells:
/// lambda_{m+1}(F) >= (l_d / l_{d+1}) lambda_{m+1}(f^*F).
template <typename Scalar>
FiberBoundReport<Scalar> fiber_bound_check(const CellMap& f, const CellularSheaf<Scalar>& sheaf, int d,
                                           Scalar tol = Scalar(kSpectrumTolerance));

template <typename Scalar>
struct ProductEigenpair {
  Scalar lambda = 0;
  Scalar mu = 0;
  Scalar rayleigh = 0;
  Scalar residual = 0;  // |L v - (lambda + mu) v| / |v|
};

template <typename Scalar>
struct ProductSpectrumReport {
  Scalar sum_formula_residual = 0;  // degree-0 Laplacian vs id (x) L_G + L_F (x) id
  Scalar sum_spectrum_error = 0;
  bool degree1_checked = false;
  std::vector<ProductEigenpair<Scalar>> degree1_pairs;
  std::size_t degree1_skipped = 0;  // pairs with a zero eigenvalue
  bool holds = false;
};

/// Degree-0 sum formula and sum spectrum for F boxtimes G; for graph bases
/// also the degree-1 up-Laplacian eigenvectors
/// [ sqrt(l/m) v_F (x) delta v_G ; -sqrt(m/l) delta v_F (x) v_G ]
/// (the minus sign comes from the product's incidence signs).
template <typename Scalar>
ProductSpectrumReport<Scalar> product_spectrum_check(const CellularSheaf<Scalar>& f, const CellularSheaf<Scalar>& g,
                                                     Scalar tol = Scalar(kSpectrumTolerance));

/// <x, L x> / <x, D x> for a 0-cochain on a graph sheaf, D the block
/// diagonal of L. Throws Error when <x, D x> vanishes.
template <typename Scalar>
Scalar frustration(const CellularSheaf<Scalar>& f, const Cochain<Scalar>& x);

/// x^kappa: x_v / |x_v| where |x_v|^2 >= kappa (and x_v != 0), zero elsewhere.
template <typename Scalar>
Cochain<Scalar> threshold_round(const CellularSheaf<Scalar>& f, const Cochain<Scalar>& x, Scalar kappa);

template <typename Scalar>
struct RoundingResult {
  Scalar kappa = 0;
  Scalar eta = 0;
  Cochain<Scalar> rounded;
  std::vector<std::pair<Scalar, Scalar>> evaluated;  // (kappa, eta) for every usable threshold
};

/// Minimizes eta(x^kappa) over `grid`, by default the breakpoints |x_v|^2.
/// Thresholds whose rounding has <x, D x> = 0 are skipped; throws Error when
/// none is usable.
template <typename Scalar>
RoundingResult<Scalar> best_rounding(const CellularSheaf<Scalar>& f, const Cochain<Scalar>& x,
                                     std::optional<std::vector<Scalar>> grid = std::nullopt);

template <typename Scalar>
struct CheegerReport {
  Index sections = 0;          // dim H^0(F)
  Index perturbed_sections = 0;  // dim H^0(F')
  bool applicable = false;     // F' has more global sections than F
  Scalar perturbation = 0;     // |delta_F - delta_F'|_F^2
  Scalar lambda_1 = 0;         // smallest eigenvalue of L_F on the complement of its kernel
  bool holds = false;          // perturbation >= lambda_1
};

template <typename Scalar>
CheegerReport<Scalar> structural_cheeger_lower_bound(const CellularSheaf<Scalar>& f,
                                                     const CellularSheaf<Scalar>& perturbed,
                                                     Scalar tol = Scalar(kSpectrumTolerance));

}  // namespace cellsheaf
