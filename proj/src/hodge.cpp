#include "cellsheaf/impl/hodge_impl.hpp"

namespace cellsheaf {

#define CELLSHEAF_INSTANTIATE_HODGE(S)                                                             \
  template struct BlockOperator<S>;                                                                \
  template struct Cochain<S>;                                                                      \
  template BlockIndex cochain_index<S>(const CellularSheaf<S>&, int);                              \
  template Cochain<S> make_cochain<S>(const CellularSheaf<S>&, int,                                \
                                      const std::map<CellId, Vector<S>>&);                         \
  template Vector<S> cochain_block<S>(const CellularSheaf<S>&, const Cochain<S>&, CellIndex);      \
  template Matrix<S> inner_product_matrix<S>(const CellularSheaf<S>&, int);                        \
  template Matrix<S> inner_product_root<S>(const CellularSheaf<S>&, int, int);                     \
  template BlockOperator<S> coboundary<S>(const CellularSheaf<S>&, int);                           \
  template BlockOperator<S> coboundary_adjoint<S>(const CellularSheaf<S>&, int);                   \
  template Matrix<S> orthonormal_coboundary<S>(const CellularSheaf<S>&, int);                      \
  template BlockOperator<S> up_laplacian<S>(const CellularSheaf<S>&, int);                         \
  template BlockOperator<S> down_laplacian<S>(const CellularSheaf<S>&, int);                       \
  template BlockOperator<S> hodge_laplacian<S>(const CellularSheaf<S>&, int);                      \
  template BlockOperator<S> laplacian<S>(const CellularSheaf<S>&, int, LaplacianPart);             \
  template Matrix<S> orthonormal_laplacian<S>(const CellularSheaf<S>&, int, LaplacianPart);        \
  template HarmonicBasis<S> harmonic_cochains<S>(const CellularSheaf<S>&, int, std::optional<S>);  \
  template Index cohomology_dim<S>(const CellularSheaf<S>&, int, std::optional<S>);                \
  template Index relative_cohomology_dim<S>(const CellularSheaf<S>&, const std::vector<CellId>&,   \
                                            int, std::optional<S>);                                \
  template S coboundary_composition_residual<S>(const CellularSheaf<S>&, int);                     \
  template S max_composition_residual<S>(const CellularSheaf<S>&);                                 \
  template HodgeProjectors<S> hodge_projectors<S>(const CellularSheaf<S>&, int, std::optional<S>); \
  template HodgeDecomposition<S> hodge_decomposition<S>(const CellularSheaf<S>&, const Cochain<S>&, \
                                                        std::optional<S>);                         \
  template CellularSheaf<S> normalize_sheaf<S>(const CellularSheaf<S>&);                           \
  template S normalization_residual<S>(const CellularSheaf<S>&);                                   \
  template BlockOperator<S> normalized_laplacian<S>(const CellularSheaf<S>&, std::optional<S>);    \
  template FactorWidthCertificate<S> is_factor_width_two<S>(const Matrix<S>&, S, int);

CELLSHEAF_INSTANTIATE_HODGE(double)

}  // namespace cellsheaf
