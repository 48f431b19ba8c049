#pragma once

// Small hand-built sheaves shared by several test files.

#include <cmath>
#include <initializer_list>
#include <map>
#include <utility>

#include <Eigen/Dense>

#include "cellsheaf/complex.hpp"
#include "cellsheaf/sheaf.hpp"

namespace fixtures {

using cellsheaf::CellId;
using cellsheaf::CellularSheaf;
using cellsheaf::Index;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline Mat row(std::initializer_list<double> values) {
  Mat m(1, static_cast<Index>(values.size()));
  Index j = 0;
  for (double v : values) m(0, j++) = v;
  return m;
}

inline Vec vec(std::initializer_list<double> values) {
  Vec v(static_cast<Index>(values.size()));
  Index j = 0;
  for (double x : values) v(j++) = x;
  return v;
}

inline Mat mat(Index rows, Index cols, std::initializer_list<double> values) {
  Mat m(rows, cols);
  auto it = values.begin();
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = *it++;
  return m;
}

/// Center c with stalk R^2 joined to three leaves with stalk R; the edge maps
/// from c are the sum and the two coordinate projections.
inline CellularSheaf<double> star_sheaf() {
  const auto x = cellsheaf::build_graph({"c", "v1", "v2", "v3"}, {{"e1", "c", "v1"}, {"e2", "c", "v2"}, {"e3", "c", "v3"}});
  std::map<CellId, Index> stalks{{"c", 2}, {"v1", 1}, {"v2", 1}, {"v3", 1}, {"e1", 1}, {"e2", 1}, {"e3", 1}};
  std::map<std::pair<CellId, CellId>, Mat> maps{
      {{"c", "e1"}, row({1, 1})}, {{"c", "e2"}, row({1, 0})}, {{"c", "e3"}, row({0, 1})},
      {{"v1", "e1"}, row({1})},   {{"v2", "e2"}, row({1})},   {{"v3", "e3"}, row({1})}};
  return cellsheaf::make_sheaf<double>(x, stalks, maps);
}

/// Two R^2 vertices over one R edge, maps [1 0] and [1/2 sqrt(3)/2].
inline CellularSheaf<double> frustration_sheaf() {
  const auto x = cellsheaf::build_graph({"v1", "v2"}, {{"e", "v1", "v2"}});
  std::map<CellId, Index> stalks{{"v1", 2}, {"v2", 2}, {"e", 1}};
  std::map<std::pair<CellId, CellId>, Mat> maps{{{"v1", "e"}, row({1, 0})},
                                                {{"v2", "e"}, row({0.5, std::sqrt(3.0) / 2})}};
  return cellsheaf::make_sheaf<double>(x, stalks, maps);
}

inline cellsheaf::CellComplex filled_triangle() { return cellsheaf::build_simplicial({{"a", "b", "c"}}); }

}  // namespace fixtures
