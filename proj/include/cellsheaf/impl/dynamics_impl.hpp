#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <Eigen/Dense>

#include "cellsheaf/dynamics.hpp"
#include "cellsheaf/linalg.hpp"

namespace cellsheaf {

namespace dynamics_detail {

// Vertex indices reachable from `start` without crossing edges in `removed`.
inline std::vector<char> reachable(const CellComplex& g, CellIndex start, const std::vector<char>& removed) {
  std::vector<char> seen(g.size(), 0);
  std::vector<CellIndex> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    CellIndex v = stack.back();
    stack.pop_back();
    for (std::size_t k : g.cofaces(v)) {
      CellIndex e = g.incidences()[k].coface;
      if (removed[e]) continue;
      for (std::size_t j : g.faces(e)) {
        CellIndex w = g.incidences()[j].face;
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
  }
  return seen;
}

inline bool connected_without(const CellComplex& g, const std::vector<char>& removed) {
  const auto& verts = g.cells_of_dim(0);
  if (verts.empty()) return true;
  const auto seen = reachable(g, verts.front(), removed);
  return std::all_of(verts.begin(), verts.end(), [&](CellIndex v) { return seen[v] != 0; });
}

template <typename Scalar>
Index intersection_dim(const std::vector<const Matrix<Scalar>*>& spaces) {
  if (spaces.empty()) return 0;
  Matrix<Scalar> basis = *spaces.front();
  for (std::size_t i = 1; i < spaces.size() && basis.cols() > 0; ++i) {
    const Matrix<Scalar>& k = *spaces[i];
    if (k.cols() == 0) return 0;
    Matrix<Scalar> stacked(basis.rows(), basis.cols() + k.cols());
    stacked << basis, -k;
    const Matrix<Scalar> null = linalg::null_space<Scalar>(stacked);
    basis = basis * null.topRows(basis.cols());
  }
  return basis.cols();
}

template <typename Scalar>
void require_graph(const CellComplex& g) {
  if (!is_graph(g)) throw Error("constant-sheaf approximations are built on graphs");
}

}  // namespace dynamics_detail

template <typename Scalar>
Cochain<Scalar> harmonic_projection(const CellularSheaf<Scalar>& f, const Cochain<Scalar>& x0) {
  if (x0.values.size() != f.cochain_dim(x0.degree)) throw Error("harmonic projection: cochain has the wrong length");
  const auto h = harmonic_cochains(f, x0.degree);
  Vector<Scalar> weighted = f.has_identity_inner_products() ? x0.values
                                                            : Vector<Scalar>(inner_product_matrix(f, x0.degree) * x0.values);
  return {x0.degree, h.basis * (h.basis.transpose() * weighted)};
}

template <typename Scalar>
Diffusion<Scalar> diffuse(const CellularSheaf<Scalar>& f, const Cochain<Scalar>& x0, Scalar dt, int steps) {
  using std::exp;
  const int k = x0.degree;
  if (x0.values.size() != f.cochain_dim(k)) throw Error("diffuse: cochain has the wrong length");
  if (steps < 0) throw Error("diffuse: steps must be nonnegative");
  if (!(dt > 0)) throw Error("diffuse: dt must be positive");

  const bool plain = f.has_identity_inner_products();
  const Matrix<Scalar> root = plain ? Matrix<Scalar>() : inner_product_root(f, k, 1);
  const Matrix<Scalar> inv_root = plain ? Matrix<Scalar>() : inner_product_root(f, k, -1);
  auto to_ortho = [&](const Vector<Scalar>& x) -> Vector<Scalar> { return plain ? x : Vector<Scalar>(root * x); };
  auto from_ortho = [&](const Vector<Scalar>& x) -> Vector<Scalar> { return plain ? x : Vector<Scalar>(inv_root * x); };

  const Matrix<Scalar> l = orthonormal_laplacian(f, k);
  const auto eig = linalg::symmetric_eigen<Scalar>(l);
  Diffusion<Scalar> out;
  const Index n = eig.values.size();
  out.lambda_max = n ? std::max(Scalar(0), eig.values.maxCoeff()) : Scalar(0);
  const Scalar cut = linalg::default_zero_tolerance(n, out.lambda_max);
  for (Index i = 0; i < n; ++i)
    if (eig.values(i) > cut) {
      out.lambda_min_nonzero = eig.values(i);
      break;
    }
  if (out.lambda_max > 0 && dt >= Scalar(2) / out.lambda_max)
    throw Error("diffuse: dt must be below 2 / lambda_max = " + std::to_string(double(Scalar(2) / out.lambda_max)));

  Vector<Scalar> x = to_ortho(x0.values);
  const Vector<Scalar> x_start = x;
  out.trajectory.reserve(static_cast<std::size_t>(steps) + 1);
  for (int t = 0; t <= steps; ++t) {
    const Vector<Scalar> lx = l * x;
    const Scalar energy = x.dot(lx);
    // Rounding in x^T L x is of order n eps lambda_max |x|^2.
    const Scalar slack = Scalar(16) * Scalar(n + 1) * std::numeric_limits<Scalar>::epsilon() * out.lambda_max * x.squaredNorm();
    if (!out.energies.empty() && energy > out.energies.back() * (1 + Scalar(1e-12)) + slack)
      out.energy_nonincreasing = false;
    out.energies.push_back(energy);
    out.trajectory.push_back({k, from_ortho(x)});
    if (t < steps) x -= dt * lx;
  }

  out.projection = harmonic_projection(f, x0);
  const Vector<Scalar> proj = to_ortho(out.projection.values);
  out.final_distance = (x - proj).norm();
  const Scalar total = dt * Scalar(steps);
  out.predicted_distance =
      x_start.norm() * exp(-out.lambda_min_nonzero * total * (1 - dt * out.lambda_max / 2));
  Vector<Scalar> decay(n);
  for (Index i = 0; i < n; ++i) decay(i) = exp(-total * std::max(Scalar(0), eig.values(i)));
  const Vector<Scalar> exact = eig.vectors * decay.asDiagonal() * (eig.vectors.transpose() * x_start);
  out.exact = {k, from_ortho(exact)};
  out.exact_distance = (x - exact).norm();
  return out;
}

template <typename Scalar>
ConstantApproximation<Scalar> approximate_constant_sheaf(const ApproximationSpec<Scalar>& spec,
                                                         const std::map<CellId, Scalar>& edge_weights) {
  const auto& g = spec.graph;
  dynamics_detail::require_graph<Scalar>(g);
  if (spec.dim_v < 0) throw Error("approximation: dim V must be nonnegative");
  const Index dv = spec.dim_v;
  for (const auto& [id, k] : spec.subspaces) {
    const auto c = g.find(id);
    if (!c || g.dim(*c) != 1) throw Error("approximation: subspace given for non-edge '" + id + "'");
    if (k.rows() != dv)
      throw Error("approximation: subspace on '" + id + "' has " + std::to_string(k.rows()) + " rows, expected " +
                  std::to_string(dv));
    if (linalg::numerical_rank<Scalar>(k) != k.cols())
      throw Error("approximation: subspace basis on '" + id + "' has dependent columns");
  }
  for (const auto& [id, w] : edge_weights) {
    const auto c = g.find(id);
    if (!c || g.dim(*c) != 1) throw Error("approximation: weight given for non-edge '" + id + "'");
    if (!(w > 0)) throw Error("approximation: weight on '" + id + "' must be positive");
  }

  std::vector<Index> dims(g.size(), dv);
  std::vector<Matrix<Scalar>> quotient(g.size());
  for (CellIndex e : g.cells_of_dim(1)) {
    auto it = spec.subspaces.find(g.id(e));
    if (it == spec.subspaces.end() || it->second.cols() == 0)
      quotient[e] = Matrix<Scalar>::Identity(dv, dv);
    else
      quotient[e] = linalg::orthonormal_complement<Scalar>(it->second, dv).transpose();
    dims[e] = quotient[e].rows();
  }
  std::vector<Matrix<Scalar>> maps;
  for (const auto& inc : g.incidences()) {
    auto w = edge_weights.find(g.id(inc.coface));
    const Scalar alpha = w == edge_weights.end() ? Scalar(1) : w->second;
    maps.push_back(alpha * quotient[inc.coface]);
  }
  CellularSheaf<Scalar> f(g, dims, std::move(maps));

  std::vector<Matrix<Scalar>> components(g.size());
  for (CellIndex c = 0; c < g.size(); ++c)
    components[c] = g.dim(c) == 0 ? Matrix<Scalar>(Matrix<Scalar>::Identity(dv, dv)) : quotient[c];
  CellularSheaf<Scalar> constant = constant_sheaf(g, dv, edge_weights);
  const Index expected = cohomology_dim(constant, 0);
  ConstantApproximation<Scalar> out{f, SheafMorphism<Scalar>(std::move(constant), f, std::move(components)), 0,
                                    false};
  out.sections = cohomology_dim(out.sheaf, 0);
  out.is_valid = out.sections == expected;
  return out;
}

template <typename Scalar>
CutsetReport check_cutset_condition(const ApproximationSpec<Scalar>& spec, int cap) {
  const auto& g = spec.graph;
  dynamics_detail::require_graph<Scalar>(g);
  std::vector<char> none(g.size(), 0);
  if (!dynamics_detail::connected_without(g, none)) throw Error("cutset check: graph is disconnected");

  const Matrix<Scalar> zero(spec.dim_v, 0);
  auto subspace = [&](CellIndex e) -> const Matrix<Scalar>* {
    auto it = spec.subspaces.find(g.id(e));
    return it == spec.subspaces.end() ? &zero : &it->second;
  };

  std::set<std::vector<CellIndex>> cutsets;
  for (CellIndex e : g.cells_of_dim(1)) {
    std::vector<char> removed(g.size(), 0);
    removed[e] = 1;
    if (!dynamics_detail::connected_without(g, removed)) cutsets.insert({e});
  }

  const auto& verts = g.cells_of_dim(0);
  std::set<std::vector<CellIndex>> level;
  for (CellIndex v : verts) level.insert({v});
  for (int size = 1; size <= cap && !level.empty(); ++size) {
    std::set<std::vector<CellIndex>> next;
    for (const auto& s : level) {
      if (s.size() == verts.size()) continue;
      std::vector<char> in(g.size(), 0);
      for (CellIndex v : s) in[v] = 1;
      std::vector<CellIndex> crossing;
      for (CellIndex e : g.cells_of_dim(1)) {
        int inside = 0;
        for (std::size_t j : g.faces(e)) inside += in[g.incidences()[j].face];
        if (inside == 1) crossing.push_back(e);
      }
      if (!crossing.empty()) cutsets.insert(crossing);
      for (CellIndex v : s)
        for (std::size_t k : g.cofaces(v))
          for (std::size_t j : g.faces(g.incidences()[k].coface)) {
            CellIndex w = g.incidences()[j].face;
            if (in[w]) continue;
            auto grown = s;
            grown.insert(std::upper_bound(grown.begin(), grown.end(), w), w);
            next.insert(std::move(grown));
          }
    }
    level = std::move(next);
  }

  CutsetReport report;
  report.cap = cap;
  report.checked = cutsets.size();
  for (const auto& c : cutsets) {
    std::vector<const Matrix<Scalar>*> spaces;
    for (CellIndex e : c) spaces.push_back(subspace(e));
    const Index dim = dynamics_detail::intersection_dim<Scalar>(spaces);
    if (dim > 0) {
      Cutset bad;
      for (CellIndex e : c) bad.edges.push_back(g.id(e));
      bad.intersection_dim = dim;
      report.violations.push_back(std::move(bad));
    }
  }
  report.passes = report.violations.empty();
  return report;
}

template <typename Scalar>
ApproximationBound<Scalar> approximation_spectral_bound_check(const SheafMorphism<Scalar>& a, Scalar tol) {
  const auto& constant = a.source();
  const auto& f = a.target();
  const auto& g = constant.base();
  dynamics_detail::require_graph<Scalar>(g);
  if (!(g == f.base())) throw Error("hypotheses unmet: source and target have different bases");
  if (!validate_morphism(a, tol).empty()) throw Error("hypotheses unmet: a is not a sheaf morphism");

  const auto& verts = g.cells_of_dim(0);
  const auto& edges = g.cells_of_dim(1);
  ApproximationBound<Scalar> r;
  r.dim_v = verts.empty() ? 0 : constant.stalk_dim(verts.front());
  for (CellIndex v : verts) {
    if (constant.stalk_dim(v) != r.dim_v) throw Error("hypotheses unmet: source is not a constant sheaf");
    const Matrix<Scalar>& c = a.component(v);
    if (c.rows() != r.dim_v || c.cols() != r.dim_v || !c.isIdentity(tol))
      throw Error("hypotheses unmet: vertex components must be identities");
  }
  for (std::size_t i = 0; i < g.incidences().size(); ++i) {
    const Matrix<Scalar>& m = constant.restriction(i);
    const Scalar alpha = m.rows() ? m(0, 0) : Scalar(0);
    if (m.rows() != r.dim_v || !(m - alpha * Matrix<Scalar>::Identity(r.dim_v, r.dim_v)).isZero(tol) ||
        !(alpha > 0))
      throw Error("hypotheses unmet: source restrictions must be positive multiples of the identity");
  }
  for (CellIndex e : edges) {
    const auto& fs = g.faces(e);
    if (fs.size() == 2 && std::abs(constant.restriction(fs[0])(0, 0) - constant.restriction(fs[1])(0, 0)) >
                              tol * std::max(Scalar(1), std::abs(constant.restriction(fs[0])(0, 0))))
      throw Error("hypotheses unmet: vertex weights of the constant sheaf must be 1");
  }
  r.k = edges.empty() ? 0 : f.stalk_dim(edges.front());
  for (CellIndex e : edges) {
    if (f.stalk_dim(e) != r.k) throw Error("hypotheses unmet: edge stalks do not have constant dimension");
    const Matrix<Scalar>& q = a.component(e);
    if (!(q * q.transpose()).isIdentity(tol))
      throw Error("hypotheses unmet: edge components are not orthogonal projections");
  }
  if (!constant.has_identity_inner_products() || !f.has_identity_inner_products())
    throw Error("hypotheses unmet: stalk inner products must be standard");
  if (cohomology_dim(f, 0) != cohomology_dim(constant, 0))
    throw Error("hypotheses unmet: not a valid 0-approximation");

  auto smallest_nonzero = [](const Vector<Scalar>& values) {
    const Scalar top = values.size() ? std::max(Scalar(0), values.maxCoeff()) : Scalar(0);
    const Scalar cut = linalg::default_zero_tolerance(values.size(), top);
    for (Index i = 0; i < values.size(); ++i)
      if (values(i) > cut) return values(i);
    return Scalar(0);
  };
  const Vector<Scalar> lf = linalg::symmetric_eigenvalues<Scalar>(orthonormal_laplacian(f, 0));
  const Vector<Scalar> lc = linalg::symmetric_eigenvalues<Scalar>(orthonormal_laplacian(constant, 0));
  const Scalar ratio = r.dim_v ? Scalar(r.k) / Scalar(r.dim_v) : Scalar(0);
  r.lambda_f = smallest_nonzero(lf);
  r.lambda_const = smallest_nonzero(lc);
  r.bound = ratio * r.lambda_const;
  r.holds = r.lambda_f <= r.bound + tol * std::max(Scalar(1), r.bound);
  r.lambda_f_max = lf.size() ? lf.maxCoeff() : Scalar(0);
  r.lambda_const_max = lc.size() ? lc.maxCoeff() : Scalar(0);
  r.max_bound = ratio * r.lambda_const_max;
  r.max_holds = r.lambda_f_max >= r.max_bound - tol * std::max(Scalar(1), r.max_bound);
  return r;
}

}  // namespace cellsheaf
