#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "cellsheaf/hodge.hpp"
#include "cellsheaf/linalg.hpp"

namespace cellsheaf {

template <typename Scalar>
BlockIndex cochain_index(const CellularSheaf<Scalar>& f, int k) {
  BlockIndex idx;
  for (CellIndex c : f.base().cells_of_dim(k)) {
    idx.cells.push_back(c);
    idx.offsets.push_back(f.offset(c));
    idx.sizes.push_back(f.stalk_dim(c));
  }
  return idx;
}

template <typename Scalar>
Cochain<Scalar> make_cochain(const CellularSheaf<Scalar>& f, int k,
                             const std::map<CellId, Vector<Scalar>>& blocks) {
  Cochain<Scalar> x{k, Vector<Scalar>::Zero(f.cochain_dim(k))};
  for (const auto& [id, v] : blocks) {
    CellIndex c = f.base().index_of(id);
    if (f.base().dim(c) != k)
      throw Error("cochain block on '" + id + "' is not a " + std::to_string(k) + "-cell");
    if (v.size() != f.stalk_dim(c))
      throw Error("cochain block on '" + id + "' has length " + std::to_string(v.size()) +
                  ", stalk has dimension " + std::to_string(f.stalk_dim(c)));
    x.values.segment(f.offset(c), v.size()) = v;
  }
  return x;
}

template <typename Scalar>
Vector<Scalar> cochain_block(const CellularSheaf<Scalar>& f, const Cochain<Scalar>& x, CellIndex cell) {
  if (f.base().dim(cell) != x.degree) throw Error("cell '" + f.base().id(cell) + "' has wrong degree");
  return x.values.segment(f.offset(cell), f.stalk_dim(cell));
}

namespace detail {

template <typename Scalar, typename Fn>
Matrix<Scalar> stalk_block_diagonal(const CellularSheaf<Scalar>& f, int k, Fn fn) {
  std::vector<Matrix<Scalar>> blocks;
  for (CellIndex c : f.base().cells_of_dim(k)) blocks.push_back(fn(f.inner_product(c)));
  return linalg::block_diagonal(blocks);
}

template <typename Scalar>
Matrix<Scalar> inner_product_inverse(const CellularSheaf<Scalar>& f, int k) {
  return stalk_block_diagonal(f, k, [](const Matrix<Scalar>& m) -> Matrix<Scalar> {
    return m.ldlt().solve(Matrix<Scalar>::Identity(m.rows(), m.cols()));
  });
}

}  // namespace detail

template <typename Scalar>
Matrix<Scalar> inner_product_matrix(const CellularSheaf<Scalar>& f, int k) {
  return detail::stalk_block_diagonal(f, k, [](const Matrix<Scalar>& m) { return m; });
}

template <typename Scalar>
Matrix<Scalar> inner_product_root(const CellularSheaf<Scalar>& f, int k, int power) {
  if (f.has_identity_inner_products())
    return Matrix<Scalar>::Identity(f.cochain_dim(k), f.cochain_dim(k));
  if (power == 1)
    return detail::stalk_block_diagonal(f, k, [](const Matrix<Scalar>& m) { return linalg::spd_sqrt(m); });
  if (power == -1)
    return detail::stalk_block_diagonal(
        f, k, [](const Matrix<Scalar>& m) { return linalg::spd_inverse_sqrt(m); });
  throw Error("inner_product_root: power must be 1 or -1");
}

template <typename Scalar>
BlockOperator<Scalar> coboundary(const CellularSheaf<Scalar>& f, int k) {
  const auto& x = f.base();
  BlockOperator<Scalar> op{Matrix<Scalar>::Zero(f.cochain_dim(k + 1), f.cochain_dim(k)),
                           cochain_index(f, k + 1), cochain_index(f, k)};
  for (std::size_t i = 0; i < x.incidences().size(); ++i) {
    const auto& inc = x.incidences()[i];
    if (x.dim(inc.face) != k) continue;
    op.matrix.block(f.offset(inc.coface), f.offset(inc.face), f.stalk_dim(inc.coface),
                    f.stalk_dim(inc.face)) = Scalar(inc.sign) * f.restriction(i);
  }
  return op;
}

template <typename Scalar>
BlockOperator<Scalar> coboundary_adjoint(const CellularSheaf<Scalar>& f, int k) {
  auto d = coboundary(f, k);
  BlockOperator<Scalar> op{Matrix<Scalar>(), d.cols, d.rows};
  if (f.has_identity_inner_products())
    op.matrix = d.matrix.transpose();
  else
    op.matrix = detail::inner_product_inverse(f, k) * d.matrix.transpose() *
                inner_product_matrix(f, k + 1);
  return op;
}

template <typename Scalar>
Matrix<Scalar> orthonormal_coboundary(const CellularSheaf<Scalar>& f, int k) {
  auto d = coboundary(f, k);
  if (f.has_identity_inner_products()) return std::move(d.matrix);
  return inner_product_root(f, k + 1, 1) * d.matrix * inner_product_root(f, k, -1);
}

template <typename Scalar>
BlockOperator<Scalar> up_laplacian(const CellularSheaf<Scalar>& f, int k) {
  auto d = coboundary(f, k);
  auto idx = cochain_index(f, k);
  if (f.has_identity_inner_products())
    return {d.matrix.transpose() * d.matrix, idx, idx};
  return {detail::inner_product_inverse(f, k) * d.matrix.transpose() *
              inner_product_matrix(f, k + 1) * d.matrix,
          idx, idx};
}

template <typename Scalar>
BlockOperator<Scalar> down_laplacian(const CellularSheaf<Scalar>& f, int k) {
  auto idx = cochain_index(f, k);
  if (k <= 0) {
    const Index n = f.cochain_dim(k);
    return {Matrix<Scalar>::Zero(n, n), idx, idx};
  }
  auto d = coboundary(f, k - 1);
  if (f.has_identity_inner_products())
    return {d.matrix * d.matrix.transpose(), idx, idx};
  return {d.matrix * detail::inner_product_inverse(f, k - 1) * d.matrix.transpose() *
              inner_product_matrix(f, k),
          idx, idx};
}

template <typename Scalar>
BlockOperator<Scalar> hodge_laplacian(const CellularSheaf<Scalar>& f, int k) {
  auto up = up_laplacian(f, k);
  up.matrix += down_laplacian(f, k).matrix;
  return up;
}

template <typename Scalar>
BlockOperator<Scalar> laplacian(const CellularSheaf<Scalar>& f, int k, LaplacianPart part) {
  switch (part) {
    case LaplacianPart::up:
      return up_laplacian(f, k);
    case LaplacianPart::down:
      return down_laplacian(f, k);
    default:
      return hodge_laplacian(f, k);
  }
}

template <typename Scalar>
Matrix<Scalar> orthonormal_laplacian(const CellularSheaf<Scalar>& f, int k, LaplacianPart part) {
  const Index n = f.cochain_dim(k);
  Matrix<Scalar> out = Matrix<Scalar>::Zero(n, n);
  if (part != LaplacianPart::down) {
    const Matrix<Scalar> d = orthonormal_coboundary(f, k);
    out.noalias() += d.transpose() * d;
  }
  if (part != LaplacianPart::up && k > 0) {
    const Matrix<Scalar> d = orthonormal_coboundary(f, k - 1);
    out.noalias() += d * d.transpose();
  }
  return out;
}

namespace detail {

template <typename Scalar>
Scalar zero_cut(const Vector<Scalar>& eigenvalues, std::optional<Scalar> tol) {
  if (tol) return *tol;
  const Scalar top = eigenvalues.size() ? std::max(Scalar(0), eigenvalues.maxCoeff()) : Scalar(0);
  return linalg::default_zero_tolerance(eigenvalues.size(), top);
}

template <typename Scalar>
Matrix<Scalar> columns_where(const linalg::SymmetricEigen<Scalar>& eig, Scalar cut, bool zero) {
  std::vector<Index> keep;
  for (Index i = 0; i < eig.values.size(); ++i)
    if ((std::abs(eig.values(i)) <= cut) == zero) keep.push_back(i);
  Matrix<Scalar> out(eig.vectors.rows(), static_cast<Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.col(static_cast<Index>(j)) = eig.vectors.col(keep[j]);
  return out;
}

template <typename Scalar>
Index kernel_dim(const Matrix<Scalar>& sym, std::optional<Scalar> tol) {
  if (sym.rows() == 0) return 0;
  const Vector<Scalar> values = linalg::symmetric_eigenvalues(sym);
  const Scalar cut = zero_cut(values, tol);
  Index count = 0;
  for (Index i = 0; i < values.size(); ++i)
    if (std::abs(values(i)) <= cut) ++count;
  return count;
}

/// Entries of the degree-k cochain vector belonging to cells outside `excluded`.
template <typename Scalar>
std::vector<Index> entries_outside(const CellularSheaf<Scalar>& f, int k, const std::vector<char>& excluded) {
  std::vector<Index> out;
  for (CellIndex c : f.base().cells_of_dim(k)) {
    if (excluded[c]) continue;
    for (Index i = 0; i < f.stalk_dim(c); ++i) out.push_back(f.offset(c) + i);
  }
  return out;
}

template <typename Scalar>
Matrix<Scalar> submatrix(const Matrix<Scalar>& a, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  Matrix<Scalar> out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Index>(i), static_cast<Index>(j)) = a(rows[i], cols[j]);
  return out;
}

}  // namespace detail

template <typename Scalar>
HarmonicBasis<Scalar> harmonic_cochains(const CellularSheaf<Scalar>& f, int k, std::optional<Scalar> tol) {
  HarmonicBasis<Scalar> out;
  const Index n = f.cochain_dim(k);
  if (n == 0) {
    out.basis.resize(0, 0);
    return out;
  }
  const auto eig = linalg::symmetric_eigen(orthonormal_laplacian(f, k));
  out.zero_tol = detail::zero_cut(eig.values, tol);
  const Matrix<Scalar> u = detail::columns_where(eig, out.zero_tol, true);
  out.dimension = u.cols();
  out.basis = f.has_identity_inner_products() ? u : Matrix<Scalar>(inner_product_root(f, k, -1) * u);
  return out;
}

template <typename Scalar>
Index cohomology_dim(const CellularSheaf<Scalar>& f, int k, std::optional<Scalar> tol) {
  return detail::kernel_dim(orthonormal_laplacian(f, k), tol);
}

template <typename Scalar>
Index relative_cohomology_dim(const CellularSheaf<Scalar>& f, const std::vector<CellId>& subcomplex, int k,
                              std::optional<Scalar> tol) {
  const auto& x = f.base();
  std::vector<CellIndex> members;
  std::vector<char> in_a(x.size(), 0);
  for (const auto& id : subcomplex) {
    members.push_back(x.index_of(id));
    in_a[members.back()] = 1;
  }
  if (!x.is_subcomplex(members)) throw Error("relative cohomology: A is not a subcomplex");
  const auto cols = detail::entries_outside(f, k, in_a);
  if (cols.empty()) return 0;
  const auto above = detail::entries_outside(f, k + 1, in_a);
  Matrix<Scalar> lap = Matrix<Scalar>::Zero(static_cast<Index>(cols.size()), static_cast<Index>(cols.size()));
  {
    const Matrix<Scalar> d = detail::submatrix(orthonormal_coboundary(f, k), above, cols);
    lap.noalias() += d.transpose() * d;
  }
  if (k > 0) {
    const auto below = detail::entries_outside(f, k - 1, in_a);
    const Matrix<Scalar> d = detail::submatrix(orthonormal_coboundary(f, k - 1), cols, below);
    lap.noalias() += d * d.transpose();
  }
  return detail::kernel_dim(lap, tol);
}

template <typename Scalar>
Scalar coboundary_composition_residual(const CellularSheaf<Scalar>& f, int k) {
  if (f.cochain_dim(k + 2) == 0 || f.cochain_dim(k) == 0) return Scalar(0);
  return (coboundary(f, k + 1).matrix * coboundary(f, k).matrix).norm();
}

template <typename Scalar>
Scalar max_composition_residual(const CellularSheaf<Scalar>& f) {
  Scalar worst = 0;
  for (int k = 0; k + 2 <= f.base().dimension(); ++k)
    worst = std::max(worst, coboundary_composition_residual(f, k));
  return worst;
}

template <typename Scalar>
HodgeProjectors<Scalar> hodge_projectors(const CellularSheaf<Scalar>& f, int k, std::optional<Scalar> tol) {
  const Index n = f.cochain_dim(k);
  const Matrix<Scalar> up = orthonormal_laplacian(f, k, LaplacianPart::up);
  const Matrix<Scalar> down = orthonormal_laplacian(f, k, LaplacianPart::down);
  const auto full = linalg::symmetric_eigen<Scalar>(up + down);
  const Scalar cut = detail::zero_cut(full.values, tol);
  HodgeProjectors<Scalar> out;
  auto projector = [](const Matrix<Scalar>& u) -> Matrix<Scalar> { return u * u.transpose(); };
  if (n == 0) {
    out.harmonic = out.exact = out.coexact = Matrix<Scalar>(0, 0);
    return out;
  }
  out.harmonic = projector(detail::columns_where(full, cut, true));
  out.exact = projector(detail::columns_where(linalg::symmetric_eigen(down), cut, false));
  out.coexact = projector(detail::columns_where(linalg::symmetric_eigen(up), cut, false));
  return out;
}

template <typename Scalar>
HodgeDecomposition<Scalar> hodge_decomposition(const CellularSheaf<Scalar>& f, const Cochain<Scalar>& x,
                                               std::optional<Scalar> tol) {
  const int k = x.degree;
  if (x.values.size() != f.cochain_dim(k)) throw Error("cochain length does not match the sheaf");
  const auto p = hodge_projectors(f, k, tol);
  const bool plain = f.has_identity_inner_products();
  const Vector<Scalar> y = plain ? x.values : Vector<Scalar>(inner_product_root(f, k, 1) * x.values);
  auto back = [&](const Matrix<Scalar>& proj) -> Cochain<Scalar> {
    Vector<Scalar> v = proj * y;
    if (!plain) v = inner_product_root(f, k, -1) * v;
    return {k, v};
  };
  return {back(p.harmonic), back(p.exact), back(p.coexact)};
}

template <typename Scalar>
CellularSheaf<Scalar> normalize_sheaf(const CellularSheaf<Scalar>& f) {
  const auto& x = f.base();
  std::vector<Matrix<Scalar>> products = f.inner_products();
  for (int k = x.dimension() - 1; k >= 0; --k) {
    const auto current = f.with_inner_products(products);
    const Matrix<Scalar> d = coboundary(current, k).matrix;
    const Matrix<Scalar> m_up = inner_product_matrix(current, k + 1);
    for (CellIndex c : x.cells_of_dim(k)) {
      const Index n = f.stalk_dim(c);
      if (n == 0) continue;
      const Matrix<Scalar> col = d.middleCols(f.offset(c), n);
      const Matrix<Scalar>& m = products[c];
      Matrix<Scalar> normalized = col.transpose() * m_up * col;
      const Matrix<Scalar> kernel = linalg::null_space(col);
      if (kernel.cols() > 0) {
        const Matrix<Scalar> gram = kernel.transpose() * m * kernel;
        const Matrix<Scalar> proj = kernel * gram.ldlt().solve(kernel.transpose() * m);
        normalized += proj.transpose() * m * proj;
      }
      products[c] = (normalized + normalized.transpose()) / Scalar(2);
    }
  }
  return f.with_inner_products(std::move(products));
}

template <typename Scalar>
Scalar normalization_residual(const CellularSheaf<Scalar>& f) {
  const auto& x = f.base();
  Scalar worst = 0;
  for (int k = 0; k < x.dimension(); ++k) {
    const Matrix<Scalar> d = coboundary(f, k).matrix;
    const Matrix<Scalar> m_up = inner_product_matrix(f, k + 1);
    for (CellIndex c : x.cells_of_dim(k)) {
      const Index n = f.stalk_dim(c);
      if (n == 0) continue;
      const Matrix<Scalar> col = d.middleCols(f.offset(c), n);
      const Matrix<Scalar>& m = f.inner_product(c);
      const Matrix<Scalar> kernel = linalg::null_space(col);
      Matrix<Scalar> comp = kernel.cols() == 0 ? Matrix<Scalar>::Identity(n, n)
                                               : linalg::null_space<Scalar>(kernel.transpose() * m);
      if (comp.cols() == 0) continue;
      comp = comp * linalg::spd_inverse_sqrt<Scalar>(comp.transpose() * m * comp);
      const Matrix<Scalar> gram = comp.transpose() * col.transpose() * m_up * col * comp;
      worst = std::max(worst, (gram - Matrix<Scalar>::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

template <typename Scalar>
BlockOperator<Scalar> normalized_laplacian(const CellularSheaf<Scalar>& f, std::optional<Scalar> tol) {
  if (!is_graph(f.base())) throw Error("normalized Laplacian requires a graph base");
  auto idx = cochain_index(f, 0);
  const Matrix<Scalar> l = orthonormal_laplacian(f, 0);
  std::vector<Matrix<Scalar>> blocks;
  for (std::size_t i = 0; i < idx.cells.size(); ++i)
    blocks.push_back(linalg::pseudo_inverse_sqrt<Scalar>(
        l.block(idx.offsets[i], idx.offsets[i], idx.sizes[i], idx.sizes[i]), tol));
  const Matrix<Scalar> s = linalg::block_diagonal(blocks);
  Matrix<Scalar> out = s * l * s;
  out = (out + out.transpose()) / Scalar(2);
  return {std::move(out), idx, idx};
}

template <typename Scalar>
FactorWidthCertificate<Scalar> is_factor_width_two(const Matrix<Scalar>& l, Scalar tol, int max_iterations) {
  using std::abs;
  using std::sqrt;
  FactorWidthCertificate<Scalar> cert;
  const Index n = l.rows();
  if (l.rows() != l.cols()) {
    cert.witness = "matrix is not square";
    return cert;
  }
  cert.scaling = Vector<Scalar>::Ones(n);
  if (n == 0) {
    cert.value = true;
    return cert;
  }
  if (linalg::symmetry_residual(l) > tol) {
    cert.witness = "matrix is not symmetric";
    return cert;
  }
  const Vector<Scalar> eigenvalues = linalg::symmetric_eigenvalues(l);
  const Scalar scale = std::max(Scalar(1), eigenvalues.cwiseAbs().maxCoeff());
  if (eigenvalues(0) < -tol * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "matrix is indefinite: eigenvalue " << eigenvalues(0);
    cert.witness = msg.str();
    return cert;
  }

  // Off-diagonal magnitudes scaled by the diagonal; rows with a zero diagonal
  // are PSD-forced to be zero and are left out.
  const Scalar tiny = tol * scale;
  std::vector<char> active(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) active[static_cast<std::size_t>(i)] = l(i, i) > tiny;
  Matrix<Scalar> j = Matrix<Scalar>::Zero(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c)
      if (r != c && active[static_cast<std::size_t>(r)] && active[static_cast<std::size_t>(c)])
        j(r, c) = abs(l(r, c)) / l(r, r);

  std::vector<int> component(static_cast<std::size_t>(n), -1);
  int components = 0;
  for (Index s = 0; s < n; ++s) {
    if (!active[static_cast<std::size_t>(s)] || component[static_cast<std::size_t>(s)] >= 0) continue;
    std::vector<Index> stack{s};
    component[static_cast<std::size_t>(s)] = components;
    while (!stack.empty()) {
      Index r = stack.back();
      stack.pop_back();
      for (Index c = 0; c < n; ++c)
        if (j(r, c) > 0 && component[static_cast<std::size_t>(c)] < 0) {
          component[static_cast<std::size_t>(c)] = components;
          stack.push_back(c);
        }
    }
    ++components;
  }

  for (int comp = 0; comp < components; ++comp) {
    std::vector<Index> members;
    for (Index i = 0; i < n; ++i)
      if (component[static_cast<std::size_t>(i)] == comp) members.push_back(i);
    const Index m = static_cast<Index>(members.size());
    Matrix<Scalar> jc(m, m);
    for (Index a = 0; a < m; ++a)
      for (Index b = 0; b < m; ++b) jc(a, b) = j(members[static_cast<std::size_t>(a)], members[static_cast<std::size_t>(b)]);
    Vector<Scalar> d = Vector<Scalar>::Ones(m);
    bool decided = false;
    for (int it = 0; it <= max_iterations; ++it) {
      cert.iterations = std::max(cert.iterations, it);
      const Vector<Scalar> y = jc * d;
      const Vector<Scalar> ratio = y.cwiseQuotient(d);
      if (ratio.maxCoeff() <= Scalar(1) + tol) {
        decided = true;
        break;
      }
      if (ratio.minCoeff() > Scalar(1) + tol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "no diagonal scaling is dominant: scaled off-diagonal spectral radius >= "
            << ratio.minCoeff();
        cert.witness = msg.str();
        return cert;
      }
      d = d + y;
      d /= d.maxCoeff();
    }
    if (!decided) {
      cert.witness = "scaling iteration did not converge in " + std::to_string(max_iterations) + " steps";
      cert.value = false;
    } else if (m > 1) {
      // Polish with the exact Perron vector: jc is similar to the symmetric
      // G^{-1/2} |offdiag| G^{-1/2}, G the diagonal.
      Vector<Scalar> g(m);
      for (Index a = 0; a < m; ++a) g(a) = sqrt(l(members[static_cast<std::size_t>(a)], members[static_cast<std::size_t>(a)]));
      Matrix<Scalar> s(m, m);
      for (Index a = 0; a < m; ++a)
        for (Index b = 0; b < m; ++b) s(a, b) = jc(a, b) * g(a) / g(b);
      const auto eig = linalg::symmetric_eigen<Scalar>((s + s.transpose()) / Scalar(2));
      Vector<Scalar> p = eig.vectors.col(m - 1).cwiseAbs().cwiseQuotient(g);
      if (p.minCoeff() > 0) {
        p /= p.maxCoeff();
        const Scalar old_ratio = (jc * d).cwiseQuotient(d).maxCoeff();
        if ((jc * p).cwiseQuotient(p).maxCoeff() <= old_ratio) d = p;
      }
    }
    for (Index a = 0; a < m; ++a) cert.scaling(members[static_cast<std::size_t>(a)]) = d(a);
    if (!decided) break;
  }

  Scalar residual = 0;
  for (Index r = 0; r < n; ++r) {
    if (!active[static_cast<std::size_t>(r)]) continue;
    Scalar off = 0;
    for (Index c = 0; c < n; ++c)
      if (c != r && active[static_cast<std::size_t>(c)]) off += abs(l(r, c)) * cert.scaling(c);
    const Scalar diag = l(r, r) * cert.scaling(r);
    residual = std::max(residual, (off - diag) / diag);
  }
  cert.residual = std::max(Scalar(0), residual);
  cert.value = cert.witness.empty();
  return cert;
}

}  // namespace cellsheaf
