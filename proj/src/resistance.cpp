#include "cellsheaf/impl/resistance_impl.hpp"

namespace cellsheaf {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double uniform_from_counter(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = splitmix64(seed ^ splitmix64(counter));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

#define CELLSHEAF_INSTANTIATE_RESISTANCE(S)                                                        \
  template struct ResistanceForm<S>;                                                               \
  template struct SparsifyReport<S>;                                                               \
  template S effective_resistance<S>(const CellularSheaf<S>&, int, const Cochain<S>&,              \
                                     const Cochain<S>&, S);                                        \
  template S least_norm_resistance<S>(const CellularSheaf<S>&, int, const Cochain<S>&,             \
                                      const Cochain<S>&);                                          \
  template ResistanceForm<S> cell_resistance<S>(const CellularSheaf<S>&, CellIndex);               \
  template Sparsification<S> sparsify<S>(const CellularSheaf<S>&, S, std::uint64_t);

CELLSHEAF_INSTANTIATE_RESISTANCE(double)

}  // namespace cellsheaf
