#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cellsheaf/hodge.hpp"
#include "cellsheaf/spectral.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cellsheaf;
using fixtures::mat;
using fixtures::row;
using testgen::Mat;
using testgen::Vec;

namespace {

double gap(const Mat& a, const Mat& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  return a.size() ? (a - b).cwiseAbs().maxCoeff() : 0.0;
}

Vec sorted_eigenvalues(const Mat& a) { return oracle::sorted(oracle::eigenvalues(a)); }

}  // namespace

TEST_CASE("coboundary of small constant sheaves", "[hodge]") {
  const auto p2 = constant_sheaf<double>(testgen::path_graph(2), 1);
  CHECK(gap(coboundary(p2, 0).matrix, row({-1, 1})) == 0.0);
  CHECK(gap(up_laplacian(p2, 0).matrix, mat(2, 2, {1, -1, -1, 1})) == 0.0);

  // Edges e0_1, e0_2, e1_2, each oriented from the lower index.
  const auto k3 = constant_sheaf<double>(testgen::complete_graph(3), 1);
  const Mat incidence = mat(3, 3, {-1, 1, 0, -1, 0, 1, 0, -1, 1});
  CHECK(gap(coboundary(k3, 0).matrix, incidence) == 0.0);
  const Mat l = up_laplacian(k3, 0).matrix;
  CHECK(gap(l, incidence.transpose() * incidence) == 0.0);
  for (Index i = 0; i < 3; ++i) CHECK(l(i, i) == 2.0);

  const auto tri = constant_sheaf<double>(fixtures::filled_triangle(), 1);
  CHECK((coboundary(tri, 1).matrix * coboundary(tri, 0).matrix).cwiseAbs().maxCoeff() == 0.0);
  CHECK(coboundary_composition_residual(tri, 0) == 0.0);
}

TEST_CASE("degree-0 Laplacian blocks of the two-vertex frustration sheaf", "[hodge]") {
  const auto f = fixtures::frustration_sheaf();
  const auto l = up_laplacian(f, 0);
  const double s = std::sqrt(3.0);
  const auto v1 = *l.rows.find(f.base().index_of("v1"));
  const auto v2 = *l.rows.find(f.base().index_of("v2"));
  CHECK(gap(l.block(v1, v1), mat(2, 2, {1, 0, 0, 0})) < 1e-15);
  CHECK(gap(l.block(v2, v2), mat(2, 2, {0.25, s / 4, s / 4, 0.75})) < 1e-15);
  CHECK(gap(l.block(v1, v2), -row({1, 0}).transpose() * row({0.5, s / 2})) < 1e-15);
  CHECK(gap(l.block(v2, v1), l.block(v1, v2).transpose()) == 0.0);
}

TEST_CASE("nonisomorphic sheaves can share a Laplacian", "[hodge]") {
  // Three one-dimensional edges, two of them attached to one vertex only.
  const auto triple = build_graph({"a", "b"}, {{"e", "a", "b"}, {"f", "a", "b"}, {"g", "a", "b"}});
  const auto first = make_sheaf<double>(
      triple, {{"a", 1}, {"b", 1}, {"e", 1}, {"f", 1}, {"g", 1}},
      {{{"a", "e"}, row({1})}, {{"b", "e"}, row({1})}, {{"a", "f"}, row({1})}, {{"b", "f"}, row({0})},
       {{"a", "g"}, row({0})}, {{"b", "g"}, row({1})}});
  // One two-dimensional edge.
  const auto single = build_graph({"a", "b"}, {{"e", "a", "b"}});
  const Mat fa = mat(2, 1, {1, 1});
  const Mat fb = mat(2, 1, {(1 + std::sqrt(3.0)) / 2, (1 - std::sqrt(3.0)) / 2});
  const auto second = make_sheaf<double>(single, {{"a", 1}, {"b", 1}, {"e", 2}}, {{{"a", "e"}, fa}, {{"b", "e"}, fb}});

  const Mat expected = mat(2, 2, {2, -1, -1, 2});
  CHECK(gap(up_laplacian(first, 0).matrix, expected) < 1e-15);
  CHECK(gap(up_laplacian(second, 0).matrix, expected) < 1e-15);
  CHECK(first.cochain_dim(1) != second.cochain_dim(1));
}

TEST_CASE("harmonic cochains and cohomology", "[hodge]") {
  testgen::Rng rng(31);
  const auto g = testgen::random_graph(rng, 7, 4);
  const auto h = harmonic_cochains(constant_sheaf<double>(g, 1), 0);
  REQUIRE(h.dimension == 1);
  CHECK(gap(h.basis.cwiseAbs(), Mat::Constant(7, 1, 1 / std::sqrt(7.0))) < 1e-12);

  // Hollow triangle: dim C^1 - rank delta^0.
  const auto k3 = constant_sheaf<double>(testgen::complete_graph(3), 1);
  const Index expected = k3.cochain_dim(1) - oracle::rank(oracle::coboundary(k3, 0));
  CHECK(expected == 1);
  CHECK(cohomology_dim(k3, 1) == expected);
  CHECK(cohomology_dim(constant_sheaf<double>(fixtures::filled_triangle(), 1), 1) == 0);

  const auto star = fixtures::star_sheaf();
  const auto hs = harmonic_cochains(star, 0);
  REQUIRE(hs.dimension == 2);
  Mat traces(3, 2);
  int i = 0;
  for (const char* v : {"v1", "v2", "v3"}) traces.row(i++) = hs.basis.row(star.offset(star.base().index_of(v)));
  Mat both(3, 4);
  both << traces, mat(3, 2, {1, 1, 1, 0, 0, 1});
  CHECK(oracle::rank(traces, 1e-10) == 2);
  CHECK(oracle::rank(both, 1e-10) == 2);
}

TEST_CASE("kernel dimensions agree with rank-nullity", "[hodge][property]") {
  testgen::Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = trial % 2 ? testgen::random_small_complex_sheaf(rng, 40, 3)
                       : testgen::random_graph_sheaf(rng, testgen::random_graph(rng, 6, 4), 3);
    if (trial % 3 == 0) f = testgen::with_random_inner_products(rng, f);
    for (int k = 0; k <= f.base().dimension(); ++k) {
      const Mat d = oracle::coboundary(f, k);
      const Index expected = d.cols() - oracle::rank(d) - (k ? oracle::rank(oracle::coboundary(f, k - 1)) : 0);
      CHECK(cohomology_dim(f, k) == expected);
    }
    CHECK(max_composition_residual(f) < 1e-10);
  }
}

TEST_CASE("Laplacians are self-adjoint and split into up and down parts", "[hodge][property]") {
  testgen::Rng rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = testgen::with_random_inner_products(rng, testgen::random_small_complex_sheaf(rng, 40, 3));
    for (int k = 0; k <= f.base().dimension(); ++k) {
      const Mat m = oracle::inner_products(f, k);
      const Mat up = up_laplacian(f, k).matrix, down = down_laplacian(f, k).matrix;
      const Mat full = hodge_laplacian(f, k).matrix;
      const double scale = std::max(1.0, oracle::max_abs(full));
      CHECK(gap(full, up + down) <= 1e-12 * scale);
      const Mat form = m * full;
      CHECK(gap(form, form.transpose()) <= 1e-10 * scale * oracle::max_abs(m));
      const Vec ev = sorted_eigenvalues(orthonormal_laplacian(f, k));
      CHECK((ev.size() == 0 || ev.minCoeff() >= -1e-10 * scale));

      const Mat d = oracle::coboundary(f, k);
      CHECK(gap(coboundary_adjoint(f, k).matrix, m.inverse() * d.transpose() * oracle::inner_products(f, k + 1)) <=
            1e-9 * std::max(1.0, oracle::max_abs(d)));
    }
  }
}

TEST_CASE("relative cohomology", "[hodge]") {
  const auto p3 = constant_sheaf<double>(testgen::path_graph(3), 1);
  std::vector<CellId> all;
  for (CellIndex c = 0; c < p3.base().size(); ++c) all.push_back(p3.base().id(c));
  CHECK(relative_cohomology_dim(p3, all, 0) == 0);
  CHECK(relative_cohomology_dim(p3, all, 1) == 0);

  // Only v1 is free; its restricted Laplacian is [2].
  CHECK(relative_cohomology_dim(p3, {"v0", "v2"}, 0) == 0);
  CHECK(relative_cohomology_dim(p3, {}, 0) == cohomology_dim(p3, 0));
  CHECK(relative_cohomology_dim(p3, {}, 1) == cohomology_dim(p3, 1));
  CHECK_THROWS_AS(relative_cohomology_dim(p3, {"e0"}, 0), Error);

  // Relative to one endpoint, H^1 of a path is still zero and H^0 drops to zero.
  CHECK(relative_cohomology_dim(p3, {"v0"}, 0) == 0);
  CHECK(relative_cohomology_dim(p3, {"v0"}, 1) == 0);
}

TEST_CASE("Hodge decomposition", "[hodge][property]") {
  testgen::Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = testgen::random_small_complex_sheaf(rng, 40, 3);
    if (trial % 2) f = testgen::with_random_inner_products(rng, f);
    for (int k = 0; k <= f.base().dimension(); ++k) {
      const Index n = f.cochain_dim(k);
      if (n == 0) continue;
      const auto p = hodge_projectors(f, k);
      CHECK(gap(p.harmonic + p.exact + p.coexact, Mat::Identity(n, n)) < 1e-9);
      CHECK((p.exact * p.coexact).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((p.harmonic * p.exact).cwiseAbs().maxCoeff() < 1e-9);
      CHECK(std::lround(p.harmonic.trace()) == cohomology_dim(f, k));

      const Cochain<double> x{k, testgen::gaussian_vector(rng, n)};
      const auto parts = hodge_decomposition(f, x);
      CHECK((parts.harmonic.values + parts.exact.values + parts.coexact.values - x.values).norm() < 1e-9 * x.values.norm());
      const Mat l = hodge_laplacian(f, k).matrix;
      CHECK((l * parts.harmonic.values).norm() < 1e-8 * std::max(1.0, l.norm()) * x.values.norm());
      if (k > 0) {
        // The exact part lies in the image of delta^{k-1}.
        const Mat d = oracle::coboundary(f, k - 1);
        Mat aug(n, d.cols() + 1);
        aug << d, parts.exact.values;
        CHECK(oracle::rank(aug, 1e-8) == oracle::rank(d, 1e-8));
      }
    }
  }
}

TEST_CASE("normalized sheaves", "[hodge]") {
  // K3: I - A/2 has eigenvalues 1 - 2/2 and 1 + 1/2 twice.
  const Vec expected = fixtures::vec({0, 1.5, 1.5});
  const auto k3 = constant_sheaf<double>(testgen::complete_graph(3), 1);
  CHECK(oracle::max_abs(sorted_eigenvalues(normalized_laplacian(k3).matrix) - expected) < 1e-12);
  CHECK(oracle::max_abs(laplacian_spectrum(normalize_sheaf(k3), 0, LaplacianPart::up).eigenvalues - expected) < 1e-12);

  const auto p2 = constant_sheaf<double>(testgen::path_graph(2), 1);
  CHECK(gap(normalized_laplacian(p2).matrix, mat(2, 2, {1, -1, -1, 1})) < 1e-15);

  // Weighted graph: D^{-1/2} L D^{-1/2}.
  testgen::Rng rng(35);
  const auto g = testgen::random_graph(rng, 6, 5);
  const auto w = constant_sheaf<double>(g, 1, testgen::random_edge_weights(rng, g));
  const Mat l = oracle::laplacian0(w);
  const Mat d = l.diagonal().cwiseSqrt().cwiseInverse().asDiagonal();
  CHECK(gap(normalized_laplacian(w).matrix, d * l * d) < 1e-12);
  CHECK(gap(orthonormal_laplacian(normalize_sheaf(w), 0, LaplacianPart::up), d * l * d) < 1e-12);
}

TEST_CASE("normalization condition and idempotence", "[hodge][property]") {
  testgen::Rng rng(36);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = trial % 2 ? testgen::random_small_complex_sheaf(rng, 40, 3)
                             : testgen::random_graph_sheaf(rng, testgen::random_graph(rng, 6, 3), 3, 1);
    const auto n1 = normalize_sheaf(f);
    CHECK(normalization_residual(n1) < 1e-9);
    const auto n2 = normalize_sheaf(n1);
    CHECK(gap(orthonormal_laplacian(n2, 0, LaplacianPart::up), orthonormal_laplacian(n1, 0, LaplacianPart::up)) < 1e-9);
    for (int k = 0; k <= f.base().dimension(); ++k) CHECK(cohomology_dim(n1, k) == cohomology_dim(f, k));
  }
  CHECK(normalization_residual(constant_sheaf<double>(testgen::path_graph(2), 1)) < 1e-15);
  CHECK(normalization_residual(constant_sheaf<double>(testgen::complete_graph(3), 1)) > 0.5);
}

TEST_CASE("normalized degree-0 spectra are at most 2", "[hodge][property]") {
  testgen::Rng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = testgen::random_graph_sheaf(rng, testgen::random_graph(rng, 7, 5), 3);
    const Vec s = sorted_eigenvalues(normalized_laplacian(f).matrix);
    if (s.size()) CHECK(s.maxCoeff() <= 2 + 1e-9);
  }
}

TEST_CASE("factor width two", "[hodge]") {
  const Mat k3 = oracle::laplacian0(constant_sheaf<double>(testgen::complete_graph(3), 1));
  const auto c = is_factor_width_two(k3);
  CHECK(c.value);
  CHECK(gap(c.scaling, Vec::Ones(3)) < 1e-12);
  CHECK(c.residual <= 1e-12);

  CHECK(is_factor_width_two(mat(2, 2, {2, -1, -1, 2})).value);

  // Eigenvalues 3 and -1.
  CHECK(sorted_eigenvalues(mat(2, 2, {1, 2, 2, 1}))(0) < 0);
  const auto bad = is_factor_width_two(mat(2, 2, {1, 2, 2, 1}));
  CHECK_FALSE(bad.value);
  CHECK(bad.witness.find("indefinite") != std::string::npos);

  // PSD of rank one, but every diagonal is outweighed by the other two rows.
  const auto ones = is_factor_width_two<double>(Mat::Ones(3, 3));
  CHECK_FALSE(ones.value);
  CHECK_FALSE(ones.witness.empty());

  CHECK_FALSE(is_factor_width_two(mat(2, 2, {1, 0, 1, 1})).value);
  CHECK(is_factor_width_two(Mat(0, 0)).value);
}

TEST_CASE("Laplacians of one-dimensional stalk sheaves have factor width two", "[hodge][property]") {
  testgen::Rng rng(38);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = testgen::random_graph(rng, 6, 4);
    std::vector<Index> dims(g.size(), 1);
    std::vector<Mat> maps;
    for (std::size_t i = 0; i < g.incidences().size(); ++i) maps.push_back(testgen::gaussian(rng, 1, 1));
    const CellularSheaf<double> f(g, dims, maps);
    const auto cert = is_factor_width_two(oracle::laplacian0(f));
    CHECK(cert.value);
    CHECK(cert.residual < 1e-9);
  }
}
