#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "cellsheaf/harmonic.hpp"
#include "cellsheaf/impl/hodge_impl.hpp"
#include "cellsheaf/linalg.hpp"

namespace cellsheaf {

namespace detail {

inline std::vector<Index> block_entries(const BlockIndex& idx, const std::vector<std::size_t>& blocks) {
  std::vector<Index> out;
  for (std::size_t b : blocks)
    for (Index i = 0; i < idx.sizes[b]; ++i) out.push_back(idx.offsets[b] + i);
  return out;
}

inline BlockIndex sub_index(const BlockIndex& idx, const std::vector<std::size_t>& blocks) {
  BlockIndex out;
  Index off = 0;
  for (std::size_t b : blocks) {
    out.cells.push_back(idx.cells[b]);
    out.offsets.push_back(off);
    out.sizes.push_back(idx.sizes[b]);
    off += idx.sizes[b];
  }
  return out;
}

template <typename Scalar>
Vector<Scalar> subvector(const Vector<Scalar>& v, const std::vector<Index>& entries) {
  Vector<Scalar> out(static_cast<Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) out(static_cast<Index>(i)) = v(entries[i]);
  return out;
}

}  // namespace detail

template <typename Scalar>
BlockOperator<Scalar> energy_form(const CellularSheaf<Scalar>& f, int k, LaplacianPart part) {
  auto idx = cochain_index(f, k);
  Matrix<Scalar> l = orthonormal_laplacian(f, k, part);
  if (!f.has_identity_inner_products()) {
    const Matrix<Scalar> root = inner_product_root(f, k, 1);
    l = root * l * root;
    l = (l + l.transpose()) / Scalar(2);
  }
  return {std::move(l), idx, idx};
}

template <typename Scalar>
Extension<Scalar> harmonic_extension(const CellularSheaf<Scalar>& f, const BoundaryProblem<Scalar>& problem,
                                     std::optional<Scalar> tol) {
  const int k = problem.degree;
  const auto& x = f.base();
  if (problem.values.degree != k) throw Error("boundary values have degree " +
                                              std::to_string(problem.values.degree) + ", expected " +
                                              std::to_string(k));
  if (problem.values.values.size() != f.cochain_dim(k))
    throw Error("boundary values have length " + std::to_string(problem.values.values.size()) +
                ", expected " + std::to_string(f.cochain_dim(k)));
  const auto a = energy_form(f, k, problem.part);
  std::vector<char> on_boundary(a.rows.cells.size(), 0);
  for (const auto& id : problem.boundary) {
    CellIndex c = x.index_of(id);
    auto pos = a.rows.find(c);
    if (!pos) throw Error("boundary cell '" + id + "' is not a " + std::to_string(k) + "-cell");
    on_boundary[*pos] = 1;
  }
  std::vector<std::size_t> bnd, interior;
  for (std::size_t b = 0; b < on_boundary.size(); ++b) (on_boundary[b] ? bnd : interior).push_back(b);
  const auto be = detail::block_entries(a.rows, bnd);
  const auto se = detail::block_entries(a.rows, interior);

  Extension<Scalar> out;
  out.cochain = {k, Vector<Scalar>::Zero(f.cochain_dim(k))};
  for (Index e : be) out.cochain.values(e) = problem.values.values(e);
  out.unique = true;
  if (se.empty()) return out;

  const Vector<Scalar> xb = detail::subvector(problem.values.values, be);
  const Matrix<Scalar> ass = detail::submatrix(a.matrix, se, se);
  const Vector<Scalar> rhs = -detail::submatrix(a.matrix, se, be) * xb;

  Matrix<Scalar> inv_root = Matrix<Scalar>::Identity(ass.rows(), ass.cols());
  if (!f.has_identity_inner_products())
    inv_root = detail::submatrix(inner_product_root(f, k, -1), se, se);
  const auto eig = linalg::symmetric_eigen<Scalar>(inv_root * ass * inv_root);
  const Scalar cut = detail::zero_cut(eig.values, tol);
  const Vector<Scalar> b = eig.vectors.transpose() * (inv_root * rhs);
  Vector<Scalar> y = Vector<Scalar>::Zero(b.size());
  for (Index i = 0; i < b.size(); ++i) {
    if (std::abs(eig.values(i)) > cut)
      y(i) = b(i) / eig.values(i);
    else
      out.unique = false;
  }
  const Vector<Scalar> xs = inv_root * (eig.vectors * y);
  for (std::size_t i = 0; i < se.size(); ++i) out.cochain.values(se[i]) = xs(static_cast<Index>(i));

  const Scalar scale = std::max(Scalar(1), a.matrix.norm() * out.cochain.values.norm());
  out.residual = (ass * xs - rhs).norm() / scale;
  return out;
}

template <typename Scalar>
BlockOperator<Scalar> kron_reduce_matrix(const BlockOperator<Scalar>& l, const std::vector<CellIndex>& boundary,
                                         std::optional<Scalar> tol) {
  if (l.matrix.rows() != l.matrix.cols() || linalg::symmetry_residual(l.matrix) > Scalar(kCheckTolerance))
    throw Error("Kron reduction requires a symmetric matrix");
  std::vector<char> keep(l.rows.cells.size(), 0);
  for (CellIndex c : boundary) {
    auto pos = l.rows.find(c);
    if (!pos) throw Error("boundary cell is not a block of the operator");
    keep[*pos] = 1;
  }
  std::vector<std::size_t> bnd, interior;
  for (std::size_t b = 0; b < keep.size(); ++b) (keep[b] ? bnd : interior).push_back(b);
  const auto be = detail::block_entries(l.rows, bnd);
  const auto se = detail::block_entries(l.rows, interior);
  auto idx = detail::sub_index(l.rows, bnd);
  Matrix<Scalar> out = detail::submatrix(l.matrix, be, be);
  if (!se.empty()) {
    const Matrix<Scalar> lbs = detail::submatrix(l.matrix, be, se);
    out -= lbs * linalg::pseudo_inverse<Scalar>(detail::submatrix(l.matrix, se, se), tol) * lbs.transpose();
  }
  out = (out + out.transpose()) / Scalar(2);
  return {std::move(out), idx, idx};
}

template <typename Scalar>
KronReduction<Scalar> kron_reduce_sheaf(const CellularSheaf<Scalar>& f, const std::vector<CellId>& boundary,
                                        Scalar tol) {
  using std::sqrt;
  const auto& x = f.base();
  if (!is_graph(x)) throw Error("Kron reduction of sheaves requires a graph base");
  for (CellIndex v : x.cells_of_dim(0))
    if (f.stalk_dim(v) >= 2)
      throw KronObstruction("vertex '" + x.id(v) + "' has stalk dimension " +
                            std::to_string(f.stalk_dim(v)) +
                            "; Kron reduction is only closed for vertex stalks of dimension at most one");
  std::vector<CellIndex> bnd;
  for (const auto& id : boundary) {
    CellIndex v = x.index_of(id);
    if (x.dim(v) != 0) throw Error("boundary cell '" + id + "' is not a vertex");
    bnd.push_back(v);
  }

  KronReduction<Scalar> out;
  out.schur = kron_reduce_matrix(energy_form(f, 0), bnd);
  const Matrix<Scalar>& s = out.schur.matrix;
  out.certificate = is_factor_width_two(s, tol);
  if (!out.certificate.value)
    throw Error("reduced matrix is not of factor width two: " + out.certificate.witness);

  const auto& idx = out.schur.rows;
  const Vector<Scalar>& d = out.certificate.scaling;
  const Matrix<Scalar> scaled = d.asDiagonal() * s * d.asDiagonal();
  const Scalar top = scaled.size() ? scaled.cwiseAbs().maxCoeff() : Scalar(0);
  const Scalar cut = linalg::default_zero_tolerance(scaled.rows(), top);

  struct PlannedEdge {
    CellId id;
    std::size_t tail, head;
    Scalar at_tail, at_head;
  };
  const std::size_t nb = idx.cells.size();
  std::vector<Index> row_of(nb, -1);
  for (std::size_t b = 0; b < nb; ++b)
    if (idx.sizes[b] == 1) row_of[b] = idx.offsets[b];
  std::vector<PlannedEdge> edges;
  bool need_ground = false;
  for (std::size_t a = 0; a < nb; ++a) {
    if (row_of[a] < 0) continue;
    const Index i = row_of[a];
    const CellId& name = x.id(idx.cells[a]);
    Scalar off = 0;
    for (std::size_t b = 0; b < nb; ++b) {
      if (b == a || row_of[b] < 0) continue;
      const Index j = row_of[b];
      const Scalar w = std::abs(scaled(i, j));
      off += w;
      if (b < a || w <= cut) continue;
      const Scalar r = sqrt(w);
      edges.push_back({"kron:" + name + "~" + x.id(idx.cells[b]), a, b, r / d(i),
                       (scaled(i, j) < 0 ? r : -r) / d(j)});
    }
    const Scalar surplus = scaled(i, i) - off;
    if (surplus <= cut) continue;
    std::size_t partner = a == 0 ? 1 : 0;
    if (nb < 2) {
      need_ground = true;
      partner = nb;
    }
    edges.push_back({"kron:" + name + "~surplus", a, partner, sqrt(surplus) / d(i), Scalar(0)});
  }

  std::vector<Cell> cells;
  std::vector<Index> dims;
  for (CellIndex v : idx.cells) {
    cells.push_back(x.cell(v));
    dims.push_back(f.stalk_dim(v));
  }
  if (need_ground) {
    cells.push_back({"kron:ground", 0});
    dims.push_back(0);
  }
  std::vector<IncidenceSpec> incidences;
  std::vector<Matrix<Scalar>> maps;
  for (const auto& e : edges) {
    incidences.push_back({cells[e.tail].id, e.id, -1});
    incidences.push_back({cells[e.head].id, e.id, 1});
    maps.push_back(Matrix<Scalar>::Constant(1, dims[e.tail], e.at_tail));
    maps.push_back(Matrix<Scalar>::Constant(1, dims[e.head], e.at_head));
  }
  for (const auto& e : edges) {
    cells.push_back({e.id, 1});
    dims.push_back(1);
  }
  out.sheaf = CellularSheaf<Scalar>(CellComplex(std::move(cells), incidences), std::move(dims), std::move(maps));

  const Matrix<Scalar> realized = orthonormal_laplacian(out.sheaf, 0);
  const Index n = s.rows();
  const Matrix<Scalar> head = realized.topLeftCorner(n, n);
  const Scalar scale = std::max(Scalar(1), s.size() ? s.cwiseAbs().maxCoeff() : Scalar(0));
  out.residual = n ? (head - s).cwiseAbs().maxCoeff() / scale : Scalar(0);
  if (out.residual > tol)
    throw Error("realized sheaf does not reproduce the reduced Laplacian (residual " +
                std::to_string(static_cast<double>(out.residual)) + ")");
  return out;
}

template <typename Scalar>
MaxModulusReport<Scalar> check_max_modulus(const CellularSheaf<Scalar>& f, const std::vector<CellId>& boundary,
                                           const Cochain<Scalar>& x, Scalar tol) {
  const auto& g = f.base();
  if (!is_graph(g)) throw Error("maximum modulus check requires a graph base");
  if (!f.has_identity_inner_products()) throw Error("maximum modulus check requires identity inner products");
  if (!bundle_edge_scales(f))
    throw Error("sheaf is not an O(n)-bundle with one restriction scale per edge (constant vertex weights)");
  if (x.degree != 0 || x.values.size() != f.cochain_dim(0)) throw Error("x must be a 0-cochain of the sheaf");

  MaxModulusReport<Scalar> rep;
  std::vector<char> in_b(g.size(), 0);
  for (const auto& id : boundary) {
    CellIndex v = g.index_of(id);
    if (g.dim(v) != 0) throw Error("boundary cell '" + id + "' is not a vertex");
    in_b[v] = 1;
  }
  const Matrix<Scalar> l = orthonormal_laplacian(f, 0);
  const Vector<Scalar> lx = l * x.values;
  const Scalar scale = std::max(Scalar(1), l.norm() * x.values.norm());
  for (CellIndex v : g.cells_of_dim(0))
    if (!in_b[v])
      rep.harmonic_residual =
          std::max(rep.harmonic_residual, lx.segment(f.offset(v), f.stalk_dim(v)).norm() / scale);
  if (rep.harmonic_residual > tol) throw Error("x is not harmonic away from the boundary");

  rep.warnings = thinness_issues(g, boundary);
  rep.thin = rep.warnings.empty();

  Scalar lo = std::numeric_limits<Scalar>::infinity();
  for (CellIndex v : g.cells_of_dim(0)) {
    const Scalar m = x.values.segment(f.offset(v), f.stalk_dim(v)).norm();
    lo = std::min(lo, m);
    if (rep.argmax.empty() || m > rep.max_modulus) {
      rep.argmax = g.id(v);
      rep.max_modulus = m;
    }
    if (in_b[v])
      rep.max_on_boundary = std::max(rep.max_on_boundary, m);
    else
      rep.max_on_interior = std::max(rep.max_on_interior, m);
  }
  const Scalar slack = tol * std::max(Scalar(1), rep.max_modulus);
  rep.attained_on_boundary = rep.max_on_boundary >= rep.max_modulus - slack;
  rep.attained_on_interior = rep.max_on_interior >= rep.max_modulus - slack;
  rep.constant_modulus = g.cells_of_dim(0).empty() || rep.max_modulus - lo <= slack;
  rep.holds = rep.attained_on_boundary && (!rep.attained_on_interior || rep.constant_modulus);
  return rep;
}

}  // namespace cellsheaf
