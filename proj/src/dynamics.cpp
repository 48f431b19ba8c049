#include "cellsheaf/impl/dynamics_impl.hpp"

namespace cellsheaf {

#define CELLSHEAF_INSTANTIATE_DYNAMICS(S)                                                                   \
  template struct Diffusion<S>;                                                                             \
  template struct ApproximationSpec<S>;                                                                     \
  template struct ConstantApproximation<S>;                                                                 \
  template struct ApproximationBound<S>;                                                                    \
  template Cochain<S> harmonic_projection<S>(const CellularSheaf<S>&, const Cochain<S>&);                   \
  template Diffusion<S> diffuse<S>(const CellularSheaf<S>&, const Cochain<S>&, S, int);                     \
  template ConstantApproximation<S> approximate_constant_sheaf<S>(const ApproximationSpec<S>&,              \
                                                                  const std::map<CellId, S>&);              \
  template CutsetReport check_cutset_condition<S>(const ApproximationSpec<S>&, int);                        \
  template ApproximationBound<S> approximation_spectral_bound_check<S>(const SheafMorphism<S>&, S);

CELLSHEAF_INSTANTIATE_DYNAMICS(double)

}  // namespace cellsheaf
