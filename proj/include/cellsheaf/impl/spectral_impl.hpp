#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include <Eigen/Dense>

#include "cellsheaf/linalg.hpp"
#include "cellsheaf/spectral.hpp"

namespace cellsheaf {

namespace spectral_detail {

template <typename Scalar>
Scalar max_abs(const Matrix<Scalar>& a) {
  return a.size() ? a.cwiseAbs().maxCoeff() : Scalar(0);
}

template <typename Scalar>
Scalar scale_of(const Vector<Scalar>& a) {
  return std::max(Scalar(1), a.size() ? a.cwiseAbs().maxCoeff() : Scalar(0));
}

template <typename Scalar>
Matrix<Scalar> spd_inverse(const Matrix<Scalar>& m) {
  return m.ldlt().solve(Matrix<Scalar>::Identity(m.rows(), m.cols()));
}

template <typename Scalar>
Vector<Scalar> sorted(Vector<Scalar> v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

template <typename Scalar>
Vector<Scalar> pad_zeros(const Vector<Scalar>& v, Index n) {
  Vector<Scalar> out = Vector<Scalar>::Zero(n);
  out.head(v.size()) = v;
  return sorted(out);
}

// <x, y> for 0-cochains in the stalk inner products of vertex blocks.
template <typename Scalar>
Scalar stalk_norm2(const CellularSheaf<Scalar>& f, CellIndex v, const Vector<Scalar>& block) {
  return block.dot(f.inner_product(v) * block);
}

template <typename Scalar>
Matrix<Scalar> degree0_energy(const CellularSheaf<Scalar>& f) {
  const Matrix<Scalar> d = coboundary(f, 0).matrix;
  return d.transpose() * inner_product_matrix(f, 1) * d;
}

}  // namespace spectral_detail

template <typename Scalar>
Index Spectrum<Scalar>::zero_count() const {
  Index n = 0;
  for (Index i = 0; i < eigenvalues.size(); ++i)
    if (std::abs(eigenvalues(i)) <= zero_tol) ++n;
  return n;
}

template <typename Scalar>
Spectrum<Scalar> spectrum(const Matrix<Scalar>& a, std::optional<Scalar> tol) {
  if (a.rows() != a.cols()) throw Error("spectrum: matrix is not square");
  if (linalg::symmetry_residual(a) > Scalar(1e-8)) throw Error("spectrum: matrix is not symmetric");
  Spectrum<Scalar> s;
  s.eigenvalues = linalg::symmetric_eigenvalues(a);
  const Scalar top = s.eigenvalues.size() ? std::max(Scalar(0), s.eigenvalues.maxCoeff()) : Scalar(0);
  s.zero_tol = tol ? *tol : linalg::default_zero_tolerance(s.eigenvalues.size(), top);
  return s;
}

template <typename Scalar>
Spectrum<Scalar> laplacian_spectrum(const CellularSheaf<Scalar>& f, int k, LaplacianPart part,
                                    std::optional<Scalar> tol) {
  return spectrum<Scalar>(orthonormal_laplacian(f, k, part), tol);
}

template <typename Scalar>
Scalar padded_spectrum_distance(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  const Index n = std::max(a.size(), b.size());
  Vector<Scalar> x = spectral_detail::pad_zeros(a, n);
  Vector<Scalar> y = spectral_detail::pad_zeros(b, n);
  return n ? (x - y).cwiseAbs().maxCoeff() : Scalar(0);
}

template <typename Scalar>
bool spectrum_contains(const Vector<Scalar>& super, const Vector<Scalar>& sub, Scalar tol) {
  const Vector<Scalar> big = spectral_detail::sorted(super);
  const Vector<Scalar> small = spectral_detail::sorted(sub);
  Index j = 0;
  for (Index i = 0; i < small.size(); ++i) {
    while (j < big.size() && big(j) < small(i) - tol) ++j;
    if (j == big.size() || std::abs(big(j) - small(i)) > tol) return false;
    ++j;
  }
  return true;
}

template <typename Scalar>
HodgeSpectralReport<Scalar> check_hodge_spectral_relations(const CellularSheaf<Scalar>& f, int k, Scalar tol) {
  HodgeSpectralReport<Scalar> r;
  const Vector<Scalar> full = linalg::symmetric_eigenvalues<Scalar>(orthonormal_laplacian(f, k));
  const Vector<Scalar> up = linalg::symmetric_eigenvalues<Scalar>(orthonormal_laplacian(f, k, LaplacianPart::up));
  const Vector<Scalar> down =
      linalg::symmetric_eigenvalues<Scalar>(orthonormal_laplacian(f, k, LaplacianPart::down));
  const Vector<Scalar> next_down =
      linalg::symmetric_eigenvalues<Scalar>(orthonormal_laplacian(f, k + 1, LaplacianPart::down));
  Vector<Scalar> both(up.size() + down.size());
  both << up, down;
  r.union_error = padded_spectrum_distance(full, both);
  r.adjacent_error = padded_spectrum_distance(up, next_down);
  r.tolerance = tol * std::max({spectral_detail::scale_of(full), spectral_detail::scale_of(next_down)});
  r.holds = r.union_error <= r.tolerance && r.adjacent_error <= r.tolerance;
  return r;
}

template <typename Scalar>
bool check_interlacing(const Vector<Scalar>& lambda, const Vector<Scalar>& mu, int p, int q,
                       std::optional<Scalar> tol) {
  if (lambda.size() != mu.size())
    throw Error("interlacing: spectra have lengths " + std::to_string(lambda.size()) + " and " +
                std::to_string(mu.size()));
  if (p < 0 || q < 0) throw Error("interlacing: p and q must be nonnegative");
  const Index n = lambda.size();
  if (n == 0) return true;
  const Scalar slack = tol ? *tol : Scalar(1e-9) * spectral_detail::scale_of(lambda);
  // 1-based index k.
  for (Index k = 1; k <= n; ++k) {
    if (k - p >= 1 && lambda(k - p - 1) > mu(k - 1) + slack) return false;
    if (k + q <= n && mu(k - 1) > lambda(k + q - 1) + slack) return false;
  }
  return true;
}

template <typename Scalar>
CellularSheaf<Scalar> restrict_to_complement(const CellularSheaf<Scalar>& f, const std::vector<CellId>& deleted) {
  const auto& x = f.base();
  CellComplex y = delete_upward_closed(x, deleted);
  std::vector<Index> dims;
  std::vector<Matrix<Scalar>> products;
  for (CellIndex c = 0; c < y.size(); ++c) {
    CellIndex src = x.index_of(y.id(c));
    dims.push_back(f.stalk_dim(src));
    products.push_back(f.inner_product(src));
  }
  std::vector<Matrix<Scalar>> maps;
  for (const auto& inc : y.incidences())
    maps.push_back(f.restriction(x.index_of(y.id(inc.face)), x.index_of(y.id(inc.coface))));
  return CellularSheaf<Scalar>(std::move(y), std::move(dims), std::move(maps), std::move(products));
}

template <typename Scalar>
DeletionReport<Scalar> deletion_interlacing(const CellularSheaf<Scalar>& f, const std::vector<CellId>& deleted,
                                            int k) {
  const auto& x = f.base();
  std::vector<CellIndex> cells;
  std::vector<char> in_c(x.size(), 0);
  for (const auto& id : deleted) {
    cells.push_back(x.index_of(id));
    in_c[cells.back()] = 1;
  }
  if (!x.is_upward_closed(cells)) throw Error("deletion interlacing: the deleted set is not upward closed");

  DeletionReport<Scalar> r;
  const Index n = f.cochain_dim(k);
  const CellularSheaf<Scalar> rest = restrict_to_complement(f, deleted);

  std::vector<Matrix<Scalar>> kept = f.restrictions();
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (!in_c[x.incidences()[i].coface]) kept[i].setZero();
  const CellularSheaf<Scalar> g = f.with_restrictions(std::move(kept));
  r.t = n - cohomology_dim(g, k);

  r.lambda = linalg::symmetric_eigenvalues<Scalar>(orthonormal_laplacian(f, k));
  r.mu = spectral_detail::pad_zeros<Scalar>(linalg::symmetric_eigenvalues<Scalar>(orthonormal_laplacian(rest, k)), n);
  r.interlaced = check_interlacing<Scalar>(r.lambda, r.mu, static_cast<int>(r.t), 0);

  if (k == 0 && is_graph(x)) {
    r.normalized_checked = true;
    r.normalized_lambda = linalg::symmetric_eigenvalues<Scalar>(normalized_laplacian(f).matrix);
    r.normalized_mu =
        spectral_detail::pad_zeros<Scalar>(linalg::symmetric_eigenvalues<Scalar>(normalized_laplacian(rest).matrix), n);
    r.normalized_interlaced = check_interlacing<Scalar>(r.normalized_lambda, r.normalized_mu,
                                                        static_cast<int>(r.t), static_cast<int>(r.t));
  }
  return r;
}

template <typename Scalar>
ConjugationReport<Scalar> morphism_conjugation_check(const SheafMorphism<Scalar>& phi, int k, Scalar tol) {
  using spectral_detail::max_abs;
  using spectral_detail::spd_inverse;
  const auto& f = phi.source();
  const auto& g = phi.target();
  ConjugationReport<Scalar> r;

  const Matrix<Scalar> next = cochain_map(phi, k + 1);
  const Matrix<Scalar> gram = spd_inverse<Scalar>(inner_product_matrix(f, k + 1)) * next.transpose() *
                              inner_product_matrix(g, k + 1) * next;
  r.isometry_residual = max_abs<Scalar>(gram - Matrix<Scalar>::Identity(gram.rows(), gram.cols()));
  r.unitary = r.isometry_residual <= tol && next.rows() == next.cols();

  const Matrix<Scalar> here = cochain_map(phi, k);
  const Matrix<Scalar> lf = up_laplacian(f, k).matrix;
  const Matrix<Scalar> conj = spd_inverse<Scalar>(inner_product_matrix(f, k)) * here.transpose() *
                              inner_product_matrix(g, k) * up_laplacian(g, k).matrix * here;
  r.conjugation_residual = max_abs<Scalar>(lf - conj) / std::max(Scalar(1), max_abs(lf));
  r.holds = r.conjugation_residual <= tol;
  return r;
}

template <typename Scalar>
SpectrumComparison<Scalar> pushforward_isospectral_check(const CellMap& f, const CellularSheaf<Scalar>& sheaf, int k,
                                                         Scalar tol) {
  const CellularSheaf<Scalar> pushed = pushforward(f, sheaf);
  SpectrumComparison<Scalar> r;
  r.source = linalg::symmetric_eigenvalues<Scalar>(orthonormal_laplacian(sheaf, k, LaplacianPart::up));
  r.target = linalg::symmetric_eigenvalues<Scalar>(orthonormal_laplacian(pushed, k, LaplacianPart::up));
  r.error = r.source.size() == r.target.size() ? padded_spectrum_distance(r.source, r.target)
                                               : std::numeric_limits<Scalar>::infinity();
  r.holds = r.error <= tol * spectral_detail::scale_of(r.source);
  return r;
}

template <typename Scalar>
SpectrumComparison<Scalar> covering_containment_check(const CellMap& f, const CellularSheaf<Scalar>& sheaf, int k,
                                                      Scalar tol) {
  if (auto why = covering_violation(f)) throw Error("not a covering map: " + *why);
  if (!(f.target == sheaf.base())) throw Error("covering map target differs from the sheaf's base");
  const CellularSheaf<Scalar> lifted = pullback(f, sheaf);
  SpectrumComparison<Scalar> r;
  r.source = linalg::symmetric_eigenvalues<Scalar>(orthonormal_laplacian(sheaf, k, LaplacianPart::up));
  r.target = linalg::symmetric_eigenvalues<Scalar>(orthonormal_laplacian(lifted, k, LaplacianPart::up));
  for (Index i = 0; i < r.source.size(); ++i) {
    Scalar nearest = std::numeric_limits<Scalar>::infinity();
    for (Index j = 0; j < r.target.size(); ++j) nearest = std::min(nearest, std::abs(r.source(i) - r.target(j)));
    r.error = std::max(r.error, nearest);
  }
  r.holds = spectrum_contains(r.target, r.source, tol * spectral_detail::scale_of(r.target));
  return r;
}

template <typename Scalar>
FiberBoundReport<Scalar> fiber_bound_check(const CellMap& f, const CellularSheaf<Scalar>& sheaf, int d, Scalar tol) {
  if (auto why = cell_map_violation(f)) throw Error("fiber bound: " + *why);
  if (!(f.target == sheaf.base())) throw Error("fiber bound: map target differs from the sheaf's base");
  for (CellIndex c = 0; c < f.source.size(); ++c)
    if (f.source.dim(c) != f.target.dim(f.image[c]))
      throw Error("fiber bound: map does not preserve the dimension of '" + f.source.id(c) + "'");

  const auto sizes = fiber_sizes(f);
  auto common = [&](int k) -> std::size_t {
    const auto& cells = f.target.cells_of_dim(k);
    if (cells.empty()) return 0;
    for (CellIndex c : cells)
      if (sizes[c] != sizes[cells.front()])
        throw Error("fiber bound: fibers over " + std::to_string(k) + "-cells do not have constant size");
    return sizes[cells.front()];
  };

  FiberBoundReport<Scalar> r;
  r.fiber_d = common(d);
  r.fiber_d1 = common(d + 1);
  const auto base = laplacian_spectrum(sheaf, d, LaplacianPart::up);
  r.kernel_dim = base.zero_count();
  if (r.kernel_dim == base.size()) {
    r.vacuous = true;
    r.holds = true;
    return r;
  }
  if (r.fiber_d == 0 || r.fiber_d1 == 0) throw Error("fiber bound: map is not surjective");
  const auto lifted = laplacian_spectrum(pullback(f, sheaf), d, LaplacianPart::up);
  r.lambda_base = base.eigenvalues(r.kernel_dim);
  r.lambda_pullback = lifted.eigenvalues(r.kernel_dim);
  const Scalar bound = Scalar(r.fiber_d) / Scalar(r.fiber_d1) * r.lambda_pullback;
  r.holds = r.lambda_base >= bound - tol * std::max(Scalar(1), bound);
  return r;
}

template <typename Scalar>
ProductSpectrumReport<Scalar> product_spectrum_check(const CellularSheaf<Scalar>& f, const CellularSheaf<Scalar>& g,
                                                     Scalar tol) {
  using spectral_detail::max_abs;
  const auto& x = f.base();
  const auto& y = g.base();
  const CellularSheaf<Scalar> p = product_sheaf(f, g);
  const auto& xy = p.base();
  ProductSpectrumReport<Scalar> r;

  const Index nf = f.cochain_dim(0), ng = g.cochain_dim(0);
  const Matrix<Scalar> lf = orthonormal_laplacian(f, 0);
  const Matrix<Scalar> lg = orthonormal_laplacian(g, 0);
  const Matrix<Scalar> sum = linalg::kron<Scalar>(Matrix<Scalar>::Identity(nf, nf), lg) +
                             linalg::kron<Scalar>(lf, Matrix<Scalar>::Identity(ng, ng));
  const Matrix<Scalar> lp = orthonormal_laplacian(p, 0);

  // Cochain order of the product is (v, w, i, j); Kronecker order is (v, i, w, j).
  std::vector<Index> to_kron(static_cast<std::size_t>(lp.rows()));
  for (CellIndex v : x.cells_of_dim(0))
    for (CellIndex w : y.cells_of_dim(0)) {
      const CellIndex c = xy.index_of(product_cell_id(x.id(v), y.id(w)));
      const Index b = g.stalk_dim(w);
      for (Index i = 0; i < f.stalk_dim(v); ++i)
        for (Index j = 0; j < b; ++j)
          to_kron[static_cast<std::size_t>(p.offset(c) + i * b + j)] = (f.offset(v) + i) * ng + g.offset(w) + j;
    }
  Matrix<Scalar> permuted(lp.rows(), lp.cols());
  for (Index i = 0; i < lp.rows(); ++i)
    for (Index j = 0; j < lp.cols(); ++j)
      permuted(to_kron[static_cast<std::size_t>(i)], to_kron[static_cast<std::size_t>(j)]) = lp(i, j);
  r.sum_formula_residual = max_abs<Scalar>(permuted - sum) / std::max(Scalar(1), max_abs(sum));

  const auto ef = linalg::symmetric_eigen<Scalar>(lf);
  const auto eg = linalg::symmetric_eigen<Scalar>(lg);
  Vector<Scalar> sums(nf * ng);
  for (Index i = 0; i < nf; ++i)
    for (Index j = 0; j < ng; ++j) sums(i * ng + j) = ef.values(i) + eg.values(j);
  const Vector<Scalar> lp_values = linalg::symmetric_eigenvalues<Scalar>(lp);
  r.sum_spectrum_error = padded_spectrum_distance(lp_values, sums);
  const Scalar scale = spectral_detail::scale_of(sums);
  bool ok = r.sum_formula_residual <= tol && r.sum_spectrum_error <= tol * scale;

  if (is_graph(x) && is_graph(y)) {
    r.degree1_checked = true;
    const Matrix<Scalar> df = orthonormal_coboundary(f, 0);
    const Matrix<Scalar> dg = orthonormal_coboundary(g, 0);
    const Matrix<Scalar> up = orthonormal_laplacian(p, 1, LaplacianPart::up);
    const Scalar zf = linalg::default_zero_tolerance(nf, ef.values.size() ? ef.values.maxCoeff() : Scalar(0));
    const Scalar zg = linalg::default_zero_tolerance(ng, eg.values.size() ? eg.values.maxCoeff() : Scalar(0));
    for (Index i = 0; i < nf; ++i)
      for (Index j = 0; j < ng; ++j) {
        const Scalar lambda = ef.values(i), mu = eg.values(j);
        if (lambda <= zf || mu <= zg) {
          ++r.degree1_skipped;
          continue;
        }
        const Vector<Scalar> vf = ef.vectors.col(i), vg = eg.vectors.col(j);
        const Vector<Scalar> dvf = df * vf, dvg = dg * vg;
        const Scalar a = std::sqrt(lambda / mu), b = -std::sqrt(mu / lambda);
        Vector<Scalar> v = Vector<Scalar>::Zero(p.cochain_dim(1));
        auto fill = [&](CellIndex s, CellIndex t, Scalar coeff, const Vector<Scalar>& left, Index left_off,
                        const Vector<Scalar>& right, Index right_off) {
          const CellIndex c = xy.index_of(product_cell_id(x.id(s), y.id(t)));
          const Index bsz = g.stalk_dim(t);
          for (Index ii = 0; ii < f.stalk_dim(s); ++ii)
            for (Index jj = 0; jj < bsz; ++jj)
              v(p.offset(c) + ii * bsz + jj) = coeff * left(left_off + ii) * right(right_off + jj);
        };
        for (CellIndex s : x.cells_of_dim(0))
          for (CellIndex t : y.cells_of_dim(1)) fill(s, t, a, vf, f.offset(s), dvg, g.offset(t));
        for (CellIndex s : x.cells_of_dim(1))
          for (CellIndex t : y.cells_of_dim(0)) fill(s, t, b, dvf, f.offset(s), vg, g.offset(t));
        const Vector<Scalar> uv = up * v;
        const Scalar norm2 = v.squaredNorm();
        ProductEigenpair<Scalar> pair{lambda, mu, v.dot(uv) / norm2,
                                      (uv - (lambda + mu) * v).norm() / std::sqrt(norm2)};
        ok = ok && pair.residual <= tol * scale;
        r.degree1_pairs.push_back(pair);
      }
  }
  r.holds = ok;
  return r;
}

template <typename Scalar>
Scalar frustration(const CellularSheaf<Scalar>& f, const Cochain<Scalar>& x) {
  if (x.degree != 0) throw Error("frustration is defined for 0-cochains");
  if (x.values.size() != f.cochain_dim(0)) throw Error("frustration: cochain has the wrong length");
  const Matrix<Scalar> l = spectral_detail::degree0_energy(f);
  Scalar den = 0;
  for (CellIndex v : f.base().cells_of_dim(0)) {
    const Index o = f.offset(v), n = f.stalk_dim(v);
    den += x.values.segment(o, n).dot(l.block(o, o, n, n) * x.values.segment(o, n));
  }
  if (!(den > std::numeric_limits<Scalar>::min())) throw Error("frustration: <x, D x> vanishes");
  return x.values.dot(l * x.values) / den;
}

template <typename Scalar>
Cochain<Scalar> threshold_round(const CellularSheaf<Scalar>& f, const Cochain<Scalar>& x, Scalar kappa) {
  if (x.degree != 0) throw Error("threshold rounding is defined for 0-cochains");
  Cochain<Scalar> out{0, Vector<Scalar>::Zero(x.values.size())};
  for (CellIndex v : f.base().cells_of_dim(0)) {
    const Index o = f.offset(v), n = f.stalk_dim(v);
    const Vector<Scalar> block = x.values.segment(o, n);
    const Scalar norm2 = spectral_detail::stalk_norm2(f, v, block);
    if (norm2 > 0 && norm2 >= kappa) out.values.segment(o, n) = block / std::sqrt(norm2);
  }
  return out;
}

template <typename Scalar>
RoundingResult<Scalar> best_rounding(const CellularSheaf<Scalar>& f, const Cochain<Scalar>& x,
                                     std::optional<std::vector<Scalar>> grid) {
  if (x.degree != 0) throw Error("threshold rounding is defined for 0-cochains");
  std::vector<Scalar> kappas;
  if (grid) {
    kappas = *grid;
  } else {
    std::set<Scalar> breaks;
    for (CellIndex v : f.base().cells_of_dim(0)) {
      const Scalar norm2 = spectral_detail::stalk_norm2<Scalar>(f, v, x.values.segment(f.offset(v), f.stalk_dim(v)));
      if (norm2 > 0) breaks.insert(norm2);
    }
    kappas.assign(breaks.begin(), breaks.end());
  }
  RoundingResult<Scalar> best;
  bool found = false;
  for (Scalar kappa : kappas) {
    Cochain<Scalar> rounded = threshold_round(f, x, kappa);
    Scalar eta;
    try {
      eta = frustration(f, rounded);
    } catch (const Error&) {
      continue;
    }
    best.evaluated.emplace_back(kappa, eta);
    if (!found || eta < best.eta) {
      found = true;
      best.kappa = kappa;
      best.eta = eta;
      best.rounded = std::move(rounded);
    }
  }
  if (!found) throw Error("threshold rounding: every threshold gives a cochain with <x, D x> = 0");
  return best;
}

template <typename Scalar>
CheegerReport<Scalar> structural_cheeger_lower_bound(const CellularSheaf<Scalar>& f,
                                                     const CellularSheaf<Scalar>& perturbed, Scalar tol) {
  if (!(f.base() == perturbed.base())) throw Error("structural Cheeger bound: sheaves have different bases");
  if (f.stalk_dims() != perturbed.stalk_dims())
    throw Error("structural Cheeger bound: sheaves have different stalk dimensions");
  CheegerReport<Scalar> r;
  r.sections = cohomology_dim(f, 0);
  r.perturbed_sections = cohomology_dim(perturbed, 0);
  r.applicable = r.perturbed_sections > r.sections;
  r.perturbation = (orthonormal_coboundary(f, 0) - orthonormal_coboundary(perturbed, 0)).squaredNorm();
  const auto s = laplacian_spectrum(f, 0);
  const Index m = s.zero_count();
  r.lambda_1 = m < s.size() ? s.eigenvalues(m) : Scalar(0);
  r.holds = r.perturbation >= r.lambda_1 - tol * std::max(Scalar(1), r.lambda_1);
  return r;
}

}  // namespace cellsheaf
