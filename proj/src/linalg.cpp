#include "cellsheaf/impl/linalg_impl.hpp"

namespace cellsheaf::linalg {

#define CELLSHEAF_INSTANTIATE_LINALG(S)                                                  \
  template S default_zero_tolerance<S>(Index, S);                                        \
  template struct SymmetricEigen<S>;                                                     \
  template SymmetricEigen<S> symmetric_eigen<S>(const Matrix<S>&);                       \
  template Vector<S> symmetric_eigenvalues<S>(const Matrix<S>&);                         \
  template Matrix<S> spd_sqrt<S>(const Matrix<S>&);                                      \
  template Matrix<S> spd_inverse_sqrt<S>(const Matrix<S>&);                              \
  template Matrix<S> pseudo_inverse<S>(const Matrix<S>&, std::optional<S>);              \
  template Matrix<S> pseudo_inverse_sqrt<S>(const Matrix<S>&, std::optional<S>);         \
  template Matrix<S> kron<S>(const Matrix<S>&, const Matrix<S>&);                        \
  template Matrix<S> block_diagonal<S>(const std::vector<Matrix<S>>&);                   \
  template S symmetry_residual<S>(const Matrix<S>&);                                     \
  template Index numerical_rank<S>(const Matrix<S>&, std::optional<S>);                  \
  template Matrix<S> null_space<S>(const Matrix<S>&, std::optional<S>);                  \
  template Matrix<S> orthonormal_complement<S>(const Matrix<S>&, Index);                 \
  template bool is_spd<S>(const Matrix<S>&, S);                                          \
  template S orthogonality_residual<S>(const Matrix<S>&);

CELLSHEAF_INSTANTIATE_LINALG(double)

}  // namespace cellsheaf::linalg
