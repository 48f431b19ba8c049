#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "cellsheaf/linalg.hpp"
#include "cellsheaf/sheaf.hpp"

namespace cellsheaf {

namespace detail {

inline std::string pair_name(const CellComplex& x, CellIndex face, CellIndex coface) {
  return "(" + x.id(face) + ", " + x.id(coface) + ")";
}

inline std::string shape_name(Index r, Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace detail

template <typename Scalar>
CellularSheaf<Scalar>::CellularSheaf(CellComplex base, std::vector<Index> stalk_dims,
                                     std::vector<Matrix<Scalar>> restrictions,
                                     std::vector<Matrix<Scalar>> inner_products, Scalar tol)
    : base_(std::move(base)),
      stalk_dims_(std::move(stalk_dims)),
      restrictions_(std::move(restrictions)),
      inner_products_(std::move(inner_products)) {
  const auto& x = base_;
  if (stalk_dims_.size() != x.size())
    throw Error("sheaf needs one stalk dimension per cell (" + std::to_string(x.size()) +
                "), got " + std::to_string(stalk_dims_.size()));
  for (CellIndex c = 0; c < x.size(); ++c)
    if (stalk_dims_[c] < 0) throw Error("stalk over '" + x.id(c) + "' has negative dimension");
  if (restrictions_.size() != x.incidences().size())
    throw Error("sheaf needs one restriction per incidence (" +
                std::to_string(x.incidences().size()) + "), got " +
                std::to_string(restrictions_.size()));
  for (std::size_t k = 0; k < restrictions_.size(); ++k) {
    const auto& inc = x.incidences()[k];
    const auto& r = restrictions_[k];
    if (r.rows() != stalk_dims_[inc.coface] || r.cols() != stalk_dims_[inc.face])
      throw Error("restriction " + detail::pair_name(x, inc.face, inc.coface) + " has shape " +
                  detail::shape_name(r.rows(), r.cols()) + ", expected " +
                  detail::shape_name(stalk_dims_[inc.coface], stalk_dims_[inc.face]));
    if (!r.allFinite())
      throw Error("restriction " + detail::pair_name(x, inc.face, inc.coface) +
                  " has non-finite entries");
  }
  if (inner_products_.empty()) {
    inner_products_.reserve(x.size());
    for (CellIndex c = 0; c < x.size(); ++c)
      inner_products_.push_back(Matrix<Scalar>::Identity(stalk_dims_[c], stalk_dims_[c]));
  } else {
    if (inner_products_.size() != x.size())
      throw Error("sheaf needs one inner product per cell");
    for (CellIndex c = 0; c < x.size(); ++c) {
      const auto& m = inner_products_[c];
      if (m.rows() != stalk_dims_[c] || m.cols() != stalk_dims_[c])
        throw Error("inner product over '" + x.id(c) + "' has shape " +
                    detail::shape_name(m.rows(), m.cols()) + ", expected " +
                    detail::shape_name(stalk_dims_[c], stalk_dims_[c]));
      if (!linalg::is_spd(m, tol))
        throw Error("inner product over '" + x.id(c) + "' is not symmetric positive-definite");
    }
  }
  offsets_.assign(x.size(), 0);
  degree_dims_.assign(static_cast<std::size_t>(std::max(x.dimension() + 1, 0)), 0);
  for (int k = 0; k <= x.dimension(); ++k) {
    Index off = 0;
    for (CellIndex c : x.cells_of_dim(k)) {
      offsets_[c] = off;
      off += stalk_dims_[c];
    }
    degree_dims_[static_cast<std::size_t>(k)] = off;
  }
}

template <typename Scalar>
const Matrix<Scalar>& CellularSheaf<Scalar>::restriction(CellIndex face, CellIndex coface) const {
  auto k = base_.incidence_between(face, coface);
  if (!k) throw Error("no incidence " + detail::pair_name(base_, face, coface));
  return restrictions_[*k];
}

template <typename Scalar>
bool CellularSheaf<Scalar>::has_identity_inner_products() const {
  for (const auto& m : inner_products_)
    if (!m.isIdentity(Scalar(0))) return false;
  return true;
}

template <typename Scalar>
Index CellularSheaf<Scalar>::cochain_dim(int k) const {
  if (k < 0 || k >= static_cast<int>(degree_dims_.size())) return 0;
  return degree_dims_[static_cast<std::size_t>(k)];
}

template <typename Scalar>
CellularSheaf<Scalar> CellularSheaf<Scalar>::with_inner_products(
    std::vector<Matrix<Scalar>> inner_products) const {
  return CellularSheaf(base_, stalk_dims_, restrictions_, std::move(inner_products));
}

template <typename Scalar>
CellularSheaf<Scalar> CellularSheaf<Scalar>::with_restrictions(
    std::vector<Matrix<Scalar>> restrictions) const {
  return CellularSheaf(base_, stalk_dims_, std::move(restrictions), inner_products_);
}

template <typename Scalar>
CellularSheaf<Scalar> make_sheaf(
    const CellComplex& base, const std::map<CellId, Index>& stalks,
    const std::map<std::pair<CellId, CellId>, Matrix<Scalar>>& restrictions,
    const std::map<CellId, Matrix<Scalar>>& inner_products) {
  std::vector<Index> dims(base.size());
  for (CellIndex c = 0; c < base.size(); ++c) {
    auto it = stalks.find(base.id(c));
    if (it == stalks.end()) throw Error("missing stalk for cell '" + base.id(c) + "'");
    dims[c] = it->second;
  }
  for (const auto& [id, d] : stalks) base.index_of(id);

  std::vector<Matrix<Scalar>> maps;
  maps.reserve(base.incidences().size());
  for (const auto& inc : base.incidences()) {
    auto it = restrictions.find({base.id(inc.face), base.id(inc.coface)});
    if (it == restrictions.end())
      throw Error("missing restriction map for " + detail::pair_name(base, inc.face, inc.coface));
    maps.push_back(it->second);
  }
  for (const auto& [pair, m] : restrictions) {
    auto f = base.index_of(pair.first);
    auto c = base.index_of(pair.second);
    if (!base.incidence_between(f, c))
      throw Error("restriction given for non-incident pair " + detail::pair_name(base, f, c));
  }

  std::vector<Matrix<Scalar>> products;
  if (!inner_products.empty()) {
    for (const auto& [id, m] : inner_products) base.index_of(id);
    products.reserve(base.size());
    for (CellIndex c = 0; c < base.size(); ++c) {
      auto it = inner_products.find(base.id(c));
      products.push_back(it == inner_products.end() ? Matrix<Scalar>::Identity(dims[c], dims[c])
                                                    : it->second);
    }
  }
  return CellularSheaf<Scalar>(base, std::move(dims), std::move(maps), std::move(products));
}

template <typename Scalar>
SheafMorphism<Scalar>::SheafMorphism(CellularSheaf<Scalar> source, CellularSheaf<Scalar> target,
                                     std::vector<Matrix<Scalar>> components)
    : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
  const auto& x = source_.base();
  if (!(x == target_.base())) throw Error("morphism source and target have different bases");
  if (components_.size() != x.size()) throw Error("morphism needs one component per cell");
  for (CellIndex c = 0; c < x.size(); ++c) {
    const auto& m = components_[c];
    if (m.rows() != target_.stalk_dim(c) || m.cols() != source_.stalk_dim(c))
      throw Error("morphism component over '" + x.id(c) + "' has shape " +
                  detail::shape_name(m.rows(), m.cols()) + ", expected " +
                  detail::shape_name(target_.stalk_dim(c), source_.stalk_dim(c)));
  }
}

template <typename Scalar>
std::vector<SquareViolation<Scalar>> validate_morphism(const SheafMorphism<Scalar>& phi,
                                                       Scalar tol) {
  const auto& x = phi.source().base();
  std::vector<SquareViolation<Scalar>> out;
  for (std::size_t k = 0; k < x.incidences().size(); ++k) {
    const auto& inc = x.incidences()[k];
    const Matrix<Scalar> left = phi.component(inc.coface) * phi.source().restriction(k);
    const Matrix<Scalar> right = phi.target().restriction(k) * phi.component(inc.face);
    const Scalar residual = (left - right).norm();
    const Scalar scale = std::max({Scalar(1), left.norm(), right.norm()});
    if (residual > tol * scale) out.push_back({x.id(inc.face), x.id(inc.coface), residual});
  }
  return out;
}

template <typename Scalar>
SheafMorphism<Scalar> identity_morphism(const CellularSheaf<Scalar>& f) {
  std::vector<Matrix<Scalar>> comps;
  for (CellIndex c = 0; c < f.base().size(); ++c)
    comps.push_back(Matrix<Scalar>::Identity(f.stalk_dim(c), f.stalk_dim(c)));
  return SheafMorphism<Scalar>(f, f, std::move(comps));
}

template <typename Scalar>
Matrix<Scalar> cochain_map(const SheafMorphism<Scalar>& phi, int k) {
  std::vector<Matrix<Scalar>> blocks;
  for (CellIndex c : phi.source().base().cells_of_dim(k)) blocks.push_back(phi.component(c));
  return linalg::block_diagonal(blocks);
}

namespace detail {

template <typename Scalar>
std::vector<Scalar> cell_weights(const CellComplex& x, const std::map<CellId, Scalar>& weights) {
  std::vector<Scalar> alpha(x.size(), Scalar(1));
  for (const auto& [id, w] : weights) {
    CellIndex c = x.index_of(id);
    if (!(w > Scalar(0))) throw Error("weight on '" + id + "' is not positive");
    alpha[c] = w;
  }
  return alpha;
}

}  // namespace detail

template <typename Scalar>
CellularSheaf<Scalar> constant_sheaf(const CellComplex& x, Index d,
                                     const std::map<CellId, Scalar>& weights) {
  if (d < 0) throw Error("constant sheaf dimension must be nonnegative");
  const auto alpha = detail::cell_weights(x, weights);
  std::vector<Matrix<Scalar>> maps;
  for (const auto& inc : x.incidences())
    maps.push_back((alpha[inc.coface] / alpha[inc.face]) * Matrix<Scalar>::Identity(d, d));
  return CellularSheaf<Scalar>(x, std::vector<Index>(x.size(), d), std::move(maps));
}

template <typename Scalar>
CellularSheaf<Scalar> direct_sum(const CellularSheaf<Scalar>& f, const CellularSheaf<Scalar>& g) {
  const auto& x = f.base();
  if (!(x == g.base())) throw Error("direct sum of sheaves over different bases");
  std::vector<Index> dims(x.size());
  std::vector<Matrix<Scalar>> maps, products;
  for (CellIndex c = 0; c < x.size(); ++c) {
    dims[c] = f.stalk_dim(c) + g.stalk_dim(c);
    products.push_back(linalg::block_diagonal<Scalar>({f.inner_product(c), g.inner_product(c)}));
  }
  for (std::size_t k = 0; k < x.incidences().size(); ++k)
    maps.push_back(linalg::block_diagonal<Scalar>({f.restriction(k), g.restriction(k)}));
  return CellularSheaf<Scalar>(x, std::move(dims), std::move(maps), std::move(products));
}

template <typename Scalar>
CellularSheaf<Scalar> tensor(const CellularSheaf<Scalar>& f, const CellularSheaf<Scalar>& g) {
  const auto& x = f.base();
  if (!(x == g.base())) throw Error("tensor product of sheaves over different bases");
  std::vector<Index> dims(x.size());
  std::vector<Matrix<Scalar>> maps, products;
  for (CellIndex c = 0; c < x.size(); ++c) {
    dims[c] = f.stalk_dim(c) * g.stalk_dim(c);
    products.push_back(linalg::kron(f.inner_product(c), g.inner_product(c)));
  }
  for (std::size_t k = 0; k < x.incidences().size(); ++k)
    maps.push_back(linalg::kron(f.restriction(k), g.restriction(k)));
  return CellularSheaf<Scalar>(x, std::move(dims), std::move(maps), std::move(products));
}

template <typename Scalar>
CellularSheaf<Scalar> pullback(const CellMap& f, const CellularSheaf<Scalar>& g) {
  if (!(f.target == g.base())) throw Error("pullback: sheaf is not over the map's target");
  if (auto v = cell_map_violation(f)) throw Error("pullback: " + *v);
  const auto& x = f.source;
  std::vector<Index> dims(x.size());
  std::vector<Matrix<Scalar>> maps, products;
  for (CellIndex c = 0; c < x.size(); ++c) {
    dims[c] = g.stalk_dim(f.image[c]);
    products.push_back(g.inner_product(f.image[c]));
  }
  for (const auto& inc : x.incidences()) {
    CellIndex a = f.image[inc.face], b = f.image[inc.coface];
    maps.push_back(a == b ? Matrix<Scalar>::Identity(dims[inc.face], dims[inc.face])
                          : g.restriction(a, b));
  }
  return CellularSheaf<Scalar>(x, std::move(dims), std::move(maps), std::move(products));
}

template <typename Scalar>
CellularSheaf<Scalar> pushforward(const CellMap& f, const CellularSheaf<Scalar>& sheaf) {
  if (!(f.source == sheaf.base())) throw Error("pushforward: sheaf is not over the map's source");
  if (auto v = local_injectivity_violation(f)) throw Error("pushforward: " + *v);
  const auto& x = f.source;
  const auto& y = f.target;
  std::vector<std::vector<CellIndex>> fiber(y.size());
  for (CellIndex c = 0; c < x.size(); ++c) fiber[f.image[c]].push_back(c);

  std::vector<Index> dims(y.size(), 0);
  std::vector<std::vector<Index>> offset(y.size());
  std::vector<Matrix<Scalar>> products;
  for (CellIndex c = 0; c < y.size(); ++c) {
    std::vector<Matrix<Scalar>> blocks;
    for (CellIndex s : fiber[c]) {
      offset[c].push_back(dims[c]);
      dims[c] += sheaf.stalk_dim(s);
      blocks.push_back(sheaf.inner_product(s));
    }
    products.push_back(linalg::block_diagonal(blocks));
  }
  std::vector<Matrix<Scalar>> maps;
  for (const auto& inc : y.incidences()) {
    Matrix<Scalar> m = Matrix<Scalar>::Zero(dims[inc.coface], dims[inc.face]);
    const auto& lower = fiber[inc.face];
    const auto& upper = fiber[inc.coface];
    for (std::size_t i = 0; i < upper.size(); ++i)
      for (std::size_t j = 0; j < lower.size(); ++j) {
        auto k = x.incidence_between(lower[j], upper[i]);
        if (!k) continue;
        const Scalar ratio = Scalar(x.incidences()[*k].sign * inc.sign);
        m.block(offset[inc.coface][i], offset[inc.face][j], sheaf.stalk_dim(upper[i]),
                sheaf.stalk_dim(lower[j])) = ratio * sheaf.restriction(*k);
      }
    maps.push_back(std::move(m));
  }
  return CellularSheaf<Scalar>(y, std::move(dims), std::move(maps), std::move(products));
}

template <typename Scalar>
CellularSheaf<Scalar> product_sheaf(const CellularSheaf<Scalar>& f, const CellularSheaf<Scalar>& g) {
  const auto& x = f.base();
  const auto& y = g.base();
  CellComplex xy = product_complex(x, y);
  std::vector<Index> dims(xy.size());
  std::vector<Matrix<Scalar>> products(xy.size());
  for (CellIndex i = 0; i < x.size(); ++i)
    for (CellIndex j = 0; j < y.size(); ++j) {
      CellIndex c = xy.index_of(product_cell_id(x.id(i), y.id(j)));
      dims[c] = f.stalk_dim(i) * g.stalk_dim(j);
      products[c] = linalg::kron(f.inner_product(i), g.inner_product(j));
    }
  std::vector<Matrix<Scalar>> maps(xy.incidences().size());
  for (CellIndex i = 0; i < x.size(); ++i)
    for (CellIndex j = 0; j < y.size(); ++j) {
      CellIndex here = xy.index_of(product_cell_id(x.id(i), y.id(j)));
      for (std::size_t k : x.cofaces(i)) {
        CellIndex up = xy.index_of(product_cell_id(x.id(x.incidences()[k].coface), y.id(j)));
        const Matrix<Scalar> id = Matrix<Scalar>::Identity(g.stalk_dim(j), g.stalk_dim(j));
        maps[*xy.incidence_between(here, up)] = linalg::kron(f.restriction(k), id);
      }
      for (std::size_t k : y.cofaces(j)) {
        CellIndex up = xy.index_of(product_cell_id(x.id(i), y.id(y.incidences()[k].coface)));
        const Matrix<Scalar> id = Matrix<Scalar>::Identity(f.stalk_dim(i), f.stalk_dim(i));
        maps[*xy.incidence_between(here, up)] = linalg::kron(id, g.restriction(k));
      }
    }
  return CellularSheaf<Scalar>(std::move(xy), std::move(dims), std::move(maps), std::move(products));
}

template <typename Scalar>
CellularSheaf<Scalar> on_bundle(const CellComplex& graph, Index n, const Rotations<Scalar>& rotations,
                                const std::map<CellId, Scalar>& weights, Scalar tol) {
  if (!is_graph(graph)) throw Error("O(n)-bundles are built on graphs");
  if (n < 0) throw Error("bundle dimension must be nonnegative");
  const auto alpha = detail::cell_weights(graph, weights);
  for (const auto& [edge, pair] : rotations) {
    CellIndex e = graph.index_of(edge);
    if (graph.dim(e) != 1) throw Error("rotation given for non-edge '" + edge + "'");
    for (const auto* r : {&pair.first, &pair.second}) {
      if (r->rows() != n || r->cols() != n)
        throw Error("rotation on '" + edge + "' is not " + detail::shape_name(n, n));
      if (linalg::orthogonality_residual(*r) > tol)
        throw Error("rotation on '" + edge + "' is not orthogonal");
    }
  }
  std::vector<Matrix<Scalar>> maps;
  for (const auto& inc : graph.incidences()) {
    Matrix<Scalar> r = Matrix<Scalar>::Identity(n, n);
    auto it = rotations.find(graph.id(inc.coface));
    if (it != rotations.end()) r = inc.sign < 0 ? it->second.first : it->second.second;
    maps.push_back((alpha[inc.coface] / alpha[inc.face]) * r);
  }
  return CellularSheaf<Scalar>(graph, std::vector<Index>(graph.size(), n), std::move(maps));
}

template <typename Scalar>
std::optional<std::vector<Scalar>> bundle_edge_scales(const CellularSheaf<Scalar>& f, Scalar tol) {
  const auto& x = f.base();
  if (!is_graph(x)) return std::nullopt;
  const auto& edges = x.cells_of_dim(1);
  std::vector<Scalar> scales(edges.size(), Scalar(0));
  for (std::size_t p = 0; p < edges.size(); ++p) {
    std::optional<Scalar> scale;
    for (std::size_t k : x.faces(edges[p])) {
      const auto& r = f.restriction(k);
      if (r.rows() != r.cols()) return std::nullopt;
      const Index n = r.rows();
      if (n == 0) {
        scale = Scalar(0);
        continue;
      }
      const Matrix<Scalar> gram = r.transpose() * r;
      const Scalar c2 = gram.trace() / Scalar(n);
      const Matrix<Scalar> dev = gram - c2 * Matrix<Scalar>::Identity(n, n);
      if (dev.norm() > tol * std::max(Scalar(1), c2)) return std::nullopt;
      using std::sqrt;
      using std::abs;
      const Scalar c = sqrt(c2);
      if (scale && abs(*scale - c) > tol * std::max(Scalar(1), c)) return std::nullopt;
      scale = c;
    }
    scales[p] = scale.value_or(Scalar(0));
  }
  return scales;
}

}  // namespace cellsheaf
