#include "cellsheaf/impl/harmonic_impl.hpp"

namespace cellsheaf {

std::vector<std::string> thinness_issues(const CellComplex& graph, const std::vector<CellId>& boundary) {
  std::vector<std::string> issues;
  std::vector<char> in_b(graph.size(), 0);
  for (const auto& id : boundary) in_b[graph.index_of(id)] = 1;

  auto neighbours = [&](CellIndex v) {
    std::vector<CellIndex> out;
    for (std::size_t k : graph.cofaces(v)) {
      CellIndex e = graph.incidences()[k].coface;
      for (std::size_t j : graph.faces(e)) {
        CellIndex w = graph.incidences()[j].face;
        if (w != v) out.push_back(w);
      }
    }
    return out;
  };

  std::vector<CellIndex> interior;
  for (CellIndex v : graph.cells_of_dim(0))
    if (!in_b[v]) interior.push_back(v);
  if (interior.empty()) {
    issues.push_back("no vertices outside the boundary");
  } else {
    std::vector<char> seen(graph.size(), 0);
    std::vector<CellIndex> stack{interior.front()};
    seen[interior.front()] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      CellIndex v = stack.back();
      stack.pop_back();
      for (CellIndex w : neighbours(v))
        if (!in_b[w] && !seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
    }
    if (reached != interior.size()) issues.push_back("complement of the boundary is disconnected");
  }
  for (const auto& id : boundary) {
    CellIndex v = graph.index_of(id);
    bool touches = false;
    for (CellIndex w : neighbours(v)) touches = touches || !in_b[w];
    if (!touches) issues.push_back("boundary vertex '" + id + "' has no neighbour outside the boundary");
  }
  return issues;
}

#define CELLSHEAF_INSTANTIATE_HARMONIC(S)                                                          \
  template struct BoundaryProblem<S>;                                                              \
  template struct Extension<S>;                                                                    \
  template struct KronReduction<S>;                                                                \
  template struct MaxModulusReport<S>;                                                             \
  template BlockOperator<S> energy_form<S>(const CellularSheaf<S>&, int, LaplacianPart);           \
  template Extension<S> harmonic_extension<S>(const CellularSheaf<S>&, const BoundaryProblem<S>&,  \
                                              std::optional<S>);                                   \
  template BlockOperator<S> kron_reduce_matrix<S>(const BlockOperator<S>&,                         \
                                                  const std::vector<CellIndex>&, std::optional<S>);\
  template KronReduction<S> kron_reduce_sheaf<S>(const CellularSheaf<S>&,                          \
                                                 const std::vector<CellId>&, S);                   \
  template MaxModulusReport<S> check_max_modulus<S>(const CellularSheaf<S>&,                       \
                                                    const std::vector<CellId>&, const Cochain<S>&, S);

CELLSHEAF_INSTANTIATE_HARMONIC(double)

}  // namespace cellsheaf
