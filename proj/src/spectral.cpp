#include "cellsheaf/impl/spectral_impl.hpp"

namespace cellsheaf {

#define CELLSHEAF_INSTANTIATE_SPECTRAL(S)                                                                   \
  template struct Spectrum<S>;                                                                              \
  template Spectrum<S> spectrum<S>(const Matrix<S>&, std::optional<S>);                                     \
  template Spectrum<S> laplacian_spectrum<S>(const CellularSheaf<S>&, int, LaplacianPart, std::optional<S>); \
  template S padded_spectrum_distance<S>(const Vector<S>&, const Vector<S>&);                               \
  template bool spectrum_contains<S>(const Vector<S>&, const Vector<S>&, S);                                \
  template HodgeSpectralReport<S> check_hodge_spectral_relations<S>(const CellularSheaf<S>&, int, S);       \
  template bool check_interlacing<S>(const Vector<S>&, const Vector<S>&, int, int, std::optional<S>);       \
  template DeletionReport<S> deletion_interlacing<S>(const CellularSheaf<S>&, const std::vector<CellId>&,   \
                                                     int);                                                  \
  template CellularSheaf<S> restrict_to_complement<S>(const CellularSheaf<S>&, const std::vector<CellId>&); \
  template ConjugationReport<S> morphism_conjugation_check<S>(const SheafMorphism<S>&, int, S);             \
  template SpectrumComparison<S> pushforward_isospectral_check<S>(const CellMap&, const CellularSheaf<S>&,  \
                                                                  int, S);                                  \
  template SpectrumComparison<S> covering_containment_check<S>(const CellMap&, const CellularSheaf<S>&,     \
                                                               int, S);                                     \
  template FiberBoundReport<S> fiber_bound_check<S>(const CellMap&, const CellularSheaf<S>&, int, S);       \
  template ProductSpectrumReport<S> product_spectrum_check<S>(const CellularSheaf<S>&,                      \
                                                              const CellularSheaf<S>&, S);                  \
  template S frustration<S>(const CellularSheaf<S>&, const Cochain<S>&);                                    \
  template Cochain<S> threshold_round<S>(const CellularSheaf<S>&, const Cochain<S>&, S);                    \
  template RoundingResult<S> best_rounding<S>(const CellularSheaf<S>&, const Cochain<S>&,                   \
                                              std::optional<std::vector<S>>);                               \
  template CheegerReport<S> structural_cheeger_lower_bound<S>(const CellularSheaf<S>&,                      \
                                                              const CellularSheaf<S>&, S);

CELLSHEAF_INSTANTIATE_SPECTRAL(double)

}  // namespace cellsheaf
