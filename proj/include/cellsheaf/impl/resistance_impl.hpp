#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "cellsheaf/linalg.hpp"
#include "cellsheaf/resistance.hpp"
#include "cellsheaf/spectral.hpp"

namespace cellsheaf {

namespace resistance_detail {

template <typename Scalar>
void check_cochain(const CellularSheaf<Scalar>& f, int k, const Cochain<Scalar>& x, const char* name) {
  if (x.degree != k) throw Error(std::string("effective resistance: ") + name + " is not a " + std::to_string(k) +
                                 "-chain");
  if (x.values.size() != f.cochain_dim(k))
    throw Error(std::string("effective resistance: ") + name + " has the wrong length");
}

// y in orthonormal coordinates: M^{1/2} y.
template <typename Scalar>
Vector<Scalar> to_orthonormal(const CellularSheaf<Scalar>& f, int k, const Vector<Scalar>& y) {
  if (f.has_identity_inner_products()) return y;
  return inner_product_root(f, k, 1) * y;
}

}  // namespace resistance_detail

template <typename Scalar>
Scalar least_norm_resistance(const CellularSheaf<Scalar>& f, int k, const Cochain<Scalar>& a,
                             const Cochain<Scalar>& b) {
  resistance_detail::check_cochain(f, k, a, "a");
  resistance_detail::check_cochain(f, k, b, "b");
  const Vector<Scalar> y = resistance_detail::to_orthonormal<Scalar>(f, k, b.values - a.values);
  const Matrix<Scalar> boundary = orthonormal_coboundary(f, k).transpose();
  if (boundary.cols() == 0) return Scalar(0);
  Eigen::CompleteOrthogonalDecomposition<Matrix<Scalar>> cod(boundary);
  const Vector<Scalar> c = cod.solve(y);
  return c.squaredNorm();
}

template <typename Scalar>
Scalar effective_resistance(const CellularSheaf<Scalar>& f, int k, const Cochain<Scalar>& a,
                            const Cochain<Scalar>& b, Scalar tol) {
  resistance_detail::check_cochain(f, k, a, "a");
  resistance_detail::check_cochain(f, k, b, "b");
  if (k > 0) {
    const Matrix<Scalar> lower = orthonormal_coboundary(f, k - 1).transpose();
    const Scalar scale = std::max(Scalar(1), lower.size() ? lower.cwiseAbs().maxCoeff() : Scalar(0));
    for (const auto* x : {&a, &b}) {
      const Vector<Scalar> xo = resistance_detail::to_orthonormal<Scalar>(f, k, x->values);
      if ((lower * xo).norm() > tol * scale * std::max(Scalar(1), xo.norm()))
        throw Error(std::string("effective resistance: ") + (x == &a ? "a" : "b") + " is not a cycle");
    }
  }
  const Vector<Scalar> y = resistance_detail::to_orthonormal<Scalar>(f, k, b.values - a.values);
  const Matrix<Scalar> l = orthonormal_laplacian(f, k, LaplacianPart::up);
  const auto eig = linalg::symmetric_eigen<Scalar>(l);
  const Scalar top = eig.values.size() ? std::max(Scalar(0), eig.values.maxCoeff()) : Scalar(0);
  const Scalar cut = linalg::default_zero_tolerance(eig.values.size(), top);

  Scalar value = 0;
  Vector<Scalar> kernel_part = Vector<Scalar>::Zero(y.size());
  for (Index i = 0; i < eig.values.size(); ++i) {
    const Scalar c = eig.vectors.col(i).dot(y);
    if (eig.values(i) <= cut)
      kernel_part += c * eig.vectors.col(i);
    else
      value += c * c / eig.values(i);
  }
  if (kernel_part.norm() > tol * y.norm())
    throw Error("effective resistance: a and b are not homologous");

  const Scalar direct = least_norm_resistance(f, k, a, b);
  if (std::abs(direct - value) > Scalar(1e-6) * std::max(Scalar(1), value))
    throw Error("effective resistance: pseudoinverse and least-norm solutions disagree");
  return value;
}

template <typename Scalar>
ResistanceForm<Scalar> cell_resistance(const CellularSheaf<Scalar>& f, CellIndex sigma) {
  const int k = f.base().dim(sigma) - 1;
  if (k < 0) throw Error("cell resistance needs a cell of dimension at least one");
  const Matrix<Scalar> d = orthonormal_coboundary(f, k);
  const Matrix<Scalar> lpinv = linalg::pseudo_inverse<Scalar>(Matrix<Scalar>(d.transpose() * d));
  const Index off = f.offset(sigma), n = f.stalk_dim(sigma);
  const Matrix<Scalar> rows = d.middleRows(off, n);
  Matrix<Scalar> operator_form = rows * lpinv * rows.transpose();
  operator_form = (operator_form + operator_form.transpose()) / Scalar(2);

  ResistanceForm<Scalar> r;
  r.cell = sigma;
  r.trace = operator_form.trace();
  if (f.has_identity_inner_products()) {
    r.matrix = std::move(operator_form);
  } else {
    const Matrix<Scalar> root = linalg::spd_sqrt<Scalar>(f.inner_product(sigma));
    r.matrix = root * operator_form * root;
  }
  return r;
}

template <typename Scalar>
Sparsification<Scalar> sparsify(const CellularSheaf<Scalar>& f, Scalar epsilon, std::uint64_t seed) {
  using std::sqrt;
  if (!(epsilon > 0 && epsilon < 1)) throw Error("sparsify: epsilon must lie in (0, 1)");
  const auto& x = f.base();
  const int d = x.dimension();
  if (d < 1) throw Error("sparsify: complex has no cells of positive dimension");
  SparsifyReport<Scalar> rep;
  rep.seed = seed;
  rep.epsilon = epsilon;
  rep.n = f.cochain_dim(d - 1);
  if (rep.n < 2) throw Error("sparsify: dim C^{d-1} must be at least 2");

  const Matrix<Scalar> delta = orthonormal_coboundary(f, d - 1);
  const Matrix<Scalar> l = delta.transpose() * delta;
  const auto eig = linalg::symmetric_eigen<Scalar>(l);
  const Scalar top = std::max(Scalar(0), eig.values.maxCoeff());
  const Scalar cut = linalg::default_zero_tolerance(eig.values.size(), top);
  std::vector<Index> range;
  for (Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > cut) range.push_back(i);
  Matrix<Scalar> whiten(l.rows(), static_cast<Index>(range.size()));
  Matrix<Scalar> lpinv = Matrix<Scalar>::Zero(l.rows(), l.cols());
  for (std::size_t j = 0; j < range.size(); ++j) {
    const Index i = range[j];
    whiten.col(static_cast<Index>(j)) = eig.vectors.col(i) / sqrt(eig.values(i));
    lpinv += eig.vectors.col(i) * eig.vectors.col(i).transpose() / eig.values(i);
  }

  const Scalar log_n = std::log(Scalar(rep.n));
  const auto& top_cells = x.cells_of_dim(d);
  rep.total_cells = top_cells.size();
  std::vector<CellId> dropped;
  std::vector<Scalar> scale(x.size(), Scalar(1));
  for (std::size_t j = 0; j < top_cells.size(); ++j) {
    const CellIndex s = top_cells[j];
    const Matrix<Scalar> rows = delta.middleRows(f.offset(s), f.stalk_dim(s));
    const Scalar trace = (rows * lpinv * rows.transpose()).trace();
    rep.trace_sum += trace;
    const Scalar p = std::min(Scalar(1), 4 * log_n * trace / (epsilon * epsilon));
    rep.probabilities.push_back(p);
    rep.expected_cells += p;
    const bool keep = p >= 1 || Scalar(uniform_from_counter(seed, j)) < p;
    rep.kept.push_back(keep);
    if (keep) {
      ++rep.kept_cells;
      scale[s] = Scalar(1) / sqrt(p);
    } else {
      dropped.push_back(x.id(s));
    }
  }

  CellularSheaf<Scalar> reduced = restrict_to_complement(f, dropped);
  std::vector<Matrix<Scalar>> maps = reduced.restrictions();
  const auto& y = reduced.base();
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const CellIndex c = y.incidences()[i].coface;
    if (y.dim(c) == d) {
      const Scalar s = scale[x.index_of(y.id(c))];
      if (s != Scalar(1)) maps[i] *= s;
    }
  }
  CellularSheaf<Scalar> out = reduced.with_restrictions(std::move(maps));

  const Matrix<Scalar> dprime = orthonormal_coboundary(out, d - 1);
  const Matrix<Scalar> relative = whiten.transpose() * dprime.transpose() * dprime * whiten;
  if (relative.rows() > 0) {
    const Vector<Scalar> values = linalg::symmetric_eigenvalues<Scalar>(relative);
    rep.lambda_min = values.minCoeff();
    rep.lambda_max = values.maxCoeff();
    rep.relative_error = std::max(Scalar(1) - rep.lambda_min, rep.lambda_max - Scalar(1));
  } else {
    rep.lambda_min = rep.lambda_max = Scalar(1);
  }
  rep.within_bound = rep.relative_error <= epsilon;
  return {std::move(out), std::move(rep)};
}

}  // namespace cellsheaf
