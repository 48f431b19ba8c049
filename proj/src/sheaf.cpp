#include "cellsheaf/impl/sheaf_impl.hpp"

namespace cellsheaf {

#define CELLSHEAF_INSTANTIATE_SHEAF(S)                                                           \
  template class CellularSheaf<S>;                                                               \
  template class SheafMorphism<S>;                                                               \
  template struct SquareViolation<S>;                                                            \
  template CellularSheaf<S> make_sheaf<S>(const CellComplex&, const std::map<CellId, Index>&,    \
                                          const std::map<std::pair<CellId, CellId>, Matrix<S>>&, \
                                          const std::map<CellId, Matrix<S>>&);                   \
  template std::vector<SquareViolation<S>> validate_morphism<S>(const SheafMorphism<S>&, S);     \
  template SheafMorphism<S> identity_morphism<S>(const CellularSheaf<S>&);                       \
  template Matrix<S> cochain_map<S>(const SheafMorphism<S>&, int);                               \
  template CellularSheaf<S> constant_sheaf<S>(const CellComplex&, Index,                         \
                                              const std::map<CellId, S>&);                       \
  template CellularSheaf<S> direct_sum<S>(const CellularSheaf<S>&, const CellularSheaf<S>&);     \
  template CellularSheaf<S> tensor<S>(const CellularSheaf<S>&, const CellularSheaf<S>&);         \
  template CellularSheaf<S> pullback<S>(const CellMap&, const CellularSheaf<S>&);                \
  template CellularSheaf<S> pushforward<S>(const CellMap&, const CellularSheaf<S>&);             \
  template CellularSheaf<S> product_sheaf<S>(const CellularSheaf<S>&, const CellularSheaf<S>&);  \
  template CellularSheaf<S> on_bundle<S>(const CellComplex&, Index, const Rotations<S>&,         \
                                         const std::map<CellId, S>&, S);                         \
  template std::optional<std::vector<S>> bundle_edge_scales<S>(const CellularSheaf<S>&, S);

CELLSHEAF_INSTANTIATE_SHEAF(double)

}  // namespace cellsheaf
