// Acceptance suite: one PASS/FAIL line per criterion, exit status = number
// of failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cellsheaf/cli/commands.hpp"
#include "cellsheaf/cli/document.hpp"
#include "cellsheaf/dynamics.hpp"
#include "cellsheaf/harmonic.hpp"
#include "cellsheaf/resistance.hpp"
#include "cellsheaf/spectral.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cellsheaf;
using namespace testgen;
using namespace fixtures;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const std::string kRoot = CELLSHEAF_SOURCE_DIR;

// Largest eigenvalue of delta^T M1 delta relative to M0, i.e. of the
// self-adjoint up-Laplacian, from a generalized eigenproblem.
double oracle_up_max(const CellularSheaf<double>& f, int k) {
  const Mat d = oracle::coboundary(f, k);
  if (d.cols() == 0) return 0.0;
  const Mat a = d.transpose() * oracle::inner_products(f, k + 1) * d;
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(a, oracle::inner_products(f, k), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

// Same for the full Hodge Laplacian, whose down part is
// M_k delta_{k-1} M_{k-1}^{-1} delta_{k-1}^T M_k in the M_k-weighted form.
double oracle_hodge_max(const CellularSheaf<double>& f, int k) {
  const Mat mk = oracle::inner_products(f, k);
  if (mk.rows() == 0) return 0.0;
  Mat a = Mat::Zero(mk.rows(), mk.cols());
  const Mat up = oracle::coboundary(f, k);
  if (up.rows() > 0) a += up.transpose() * oracle::inner_products(f, k + 1) * up;
  if (k > 0) {
    const Mat down = oracle::coboundary(f, k - 1);
    if (down.cols() > 0) a += mk * down * oracle::inner_products(f, k - 1).inverse() * down.transpose() * mk;
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(a, mk, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

bool oracle_interlaced(const Vec& lambda, const Vec& mu, int p, int q, double tol) {
  const Index n = lambda.size();
  for (Index k = 1; k <= n; ++k) {
    if (k - p >= 1 && mu(k - 1) < lambda(k - p - 1) - tol) return false;
    if (k + q <= n && mu(k - 1) > lambda(k + q - 1) + tol) return false;
  }
  return true;
}

// Max gap between the nonzero parts of two PSD spectra (descending, padded).
double nonzero_gap(Vec a, Vec b) {
  a = -oracle::sorted(-a);
  b = -oracle::sorted(-b);
  const Index n = std::max(a.size(), b.size());
  double gap = 0;
  for (Index i = 0; i < n; ++i) gap = std::max(gap, std::abs((i < a.size() ? a(i) : 0.0) - (i < b.size() ? b(i) : 0.0)));
  return gap;
}

Vec concat(const Vec& a, const Vec& b) {
  Vec out(a.size() + b.size());
  out << a, b;
  return out;
}

// 1. Hodge kernels against rank-nullity, and delta^2 = 0.
Outcome hodge_correctness() {
  Rng rng(1001);
  const auto start = Clock::now();
  int mismatches = 0, degrees = 0;
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    CellularSheaf<double> f;
    if (trial % 2 == 0) {
      const int n = uniform_int(rng, 2, 12);
      const int extra = uniform_int(rng, 0, std::min(41 - 2 * n, n * (n - 1) / 2 - (n - 1)));
      f = random_graph_sheaf(rng, random_graph(rng, n, extra), 4);
    } else {
      f = random_small_complex_sheaf(rng, 40, 4);
    }
    if (trial % 3 == 0) f = with_random_inner_products(rng, f);
    for (int k = 0; k <= f.base().dimension(); ++k) {
      const Mat dk = oracle::coboundary(f, k);
      const Index nullity = dk.cols() - oracle::rank(dk);
      const Index expected = nullity - (k > 0 ? oracle::rank(oracle::coboundary(f, k - 1)) : 0);
      if (cohomology_dim(f, k) != expected) ++mismatches;
      ++degrees;
    }
    worst = std::max(worst, max_composition_residual(f));
  }
  const double elapsed = seconds_since(start);
  return {mismatches == 0 && worst <= 1e-10 && elapsed < 10.0,
          fmt("%d degrees, %d kernel mismatches, max |dd| = %.2e, %.2f s", degrees, mismatches, worst, elapsed)};
}

// 2. Star sheaf: sections, their boundary traces, and the Kron obstruction.
Outcome star_fixture() {
  const auto f = star_sheaf();
  const auto h = harmonic_cochains(f, 0);
  Mat traces(3, h.basis.cols());
  int i = 0;
  for (const char* v : {"v1", "v2", "v3"}) traces.row(i++) = h.basis.row(f.offset(f.base().index_of(v)));
  Mat expected(3, 2);
  expected << 1, 1, 1, 0, 0, 1;
  Mat both(3, traces.cols() + 2);
  both << traces, expected;
  const Index oracle_h0 = f.cochain_dim(0) - oracle::rank(oracle::coboundary(f, 0), 1e-10);
  const bool span_ok = oracle::rank(traces, 1e-10) == 2 && oracle::rank(both, 1e-10) == 2;
  bool obstruction = false;
  try {
    kron_reduce_sheaf(f, {"v1", "v2", "v3"});
  } catch (const KronObstruction&) {
    obstruction = true;
  }
  return {h.dimension == 2 && oracle_h0 == 2 && span_ok && obstruction,
          fmt("dim H0 = %ld (oracle %ld), trace span %s, Kron %s", static_cast<long>(h.dimension),
              static_cast<long>(oracle_h0), span_ok ? "matches" : "differs",
              obstruction ? "obstructed" : "not obstructed")};
}

double oracle_eta(const CellularSheaf<double>& f, const Vec& x) {
  const Mat l = oracle::laplacian0(f);
  Mat d = Mat::Zero(l.rows(), l.cols());
  for (CellIndex v : f.base().cells_of_dim(0)) {
    const Index o = f.offset(v), n = f.stalk_dim(v);
    d.block(o, o, n, n) = l.block(o, o, n, n);
  }
  return x.dot(l * x) / x.dot(d * x);
}

// 3. Frustration counterexample: a section whose threshold roundings all
// carry positive frustration.
Outcome frustration_fixture() {
  const auto f = frustration_sheaf();
  const auto x = make_cochain<double>(f, 0, {{"v1", vec({0.5, 0})}, {"v2", vec({1, 0})}});
  const double eta = frustration(f, x);
  const auto best = best_rounding(f, x);
  // Breakpoints |x_v|^2 are 1/4 and 1; roundings normalize the kept blocks.
  const double low = oracle_eta(f, vec({1, 0, 1, 0}));
  const double high = oracle_eta(f, vec({0, 0, 1, 0}));
  const double oracle_min = std::min(low, high);
  return {std::abs(eta) <= 1e-12 && best.eta > 0.01 && std::abs(best.eta - oracle_min) <= 1e-12,
          fmt("eta(x) = %.3g, min over grid = %.6g (oracle %.6g, %zu thresholds)", eta, best.eta, oracle_min,
              best.evaluated.size())};
}

// 4. Edge deletion interlacing on constant sheaves.
Outcome interlacing() {
  Rng rng(4004);
  int reported_false = 0, oracle_false = 0, t_mismatch = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = uniform_int(rng, 3, 8);
    const auto g = random_graph(rng, n, uniform_int(rng, 0, n));
    const auto f = constant_sheaf<double>(g, 1);
    std::vector<CellId> deleted;
    std::vector<Index> rows;
    for (CellIndex e : g.cells_of_dim(1))
      if (uniform_int(rng, 0, 1)) deleted.push_back(g.id(e));
    if (deleted.empty()) deleted.push_back(g.id(g.cells_of_dim(1).front()));
    const auto rep = deletion_interlacing(f, deleted, 0);
    if (!rep.interlaced) ++reported_false;

    const Mat d = oracle::coboundary(f, 0);
    Mat d_deleted(0, d.cols());
    for (const auto& id : deleted) {
      const Index r = static_cast<Index>(g.position_in_dim(g.index_of(id)));
      d_deleted.conservativeResize(d_deleted.rows() + 1, Eigen::NoChange);
      d_deleted.row(d_deleted.rows() - 1) = d.row(r);
    }
    const Index t = oracle::rank(d_deleted);
    const auto rest = constant_sheaf<double>(delete_upward_closed(g, deleted), 1);
    const Vec lambda = oracle::eigenvalues(oracle::laplacian0(f));
    const Vec mu = oracle::eigenvalues(oracle::laplacian0(rest));
    if (rep.t != t) ++t_mismatch;
    if (!oracle_interlaced(lambda, mu, static_cast<int>(t), 0, 1e-9 * std::max(1.0, lambda.maxCoeff()))) ++oracle_false;
  }
  const auto k3 = constant_sheaf<double>(complete_graph(3), 1);
  const auto rep = deletion_interlacing(k3, {"e1_2"}, 0);
  const bool k3_ok = rep.t == 1 && (rep.lambda - vec({0, 3, 3})).cwiseAbs().maxCoeff() <= 1e-9 &&
                     (rep.mu - vec({0, 1, 3})).cwiseAbs().maxCoeff() <= 1e-9 && rep.interlaced;
  return {reported_false == 0 && oracle_false == 0 && t_mismatch == 0 && k3_ok,
          fmt("100 deletions: %d not interlaced (oracle %d), %d t mismatches; K3->P3 t = %ld %s", reported_false,
              oracle_false, t_mismatch, static_cast<long>(rep.t), k3_ok ? "as expected" : "WRONG")};
}

// 5. Spectra of normalized sheaves are bounded by k + 2.
Outcome normalized_bound() {
  Rng rng(5005);
  double worst0 = 0, worst1 = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = uniform_int(rng, 2, 8);
    const auto f = random_graph_sheaf(rng, random_graph(rng, n, uniform_int(rng, 0, n)), 3);
    const auto nf = normalize_sheaf(f);
    worst0 = std::max({worst0, laplacian_spectrum(nf, 0, LaplacianPart::up).max(), oracle_up_max(nf, 0)});
  }
  for (int trial = 0; trial < 50; ++trial) {
    const auto nf = normalize_sheaf(random_small_complex_sheaf(rng, 60, 3));
    worst1 = std::max({worst1, laplacian_spectrum(nf, 1, LaplacianPart::up).max(), oracle_up_max(nf, 1)});
  }
  return {worst0 <= 2 + 1e-9 && worst1 <= 3 + 1e-9,
          fmt("max degree-0 eigenvalue %.12g, max degree-1 up eigenvalue %.12g", worst0, worst1)};
}

// 6. Nonzero spectra: Delta = Delta+ disjoint-union Delta-, and Delta^k_+ ~ Delta^{k+1}_-.
Outcome spectral_relations() {
  Rng rng(6006);
  int failures = 0;
  double worst_oracle = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto f = random_small_complex_sheaf(rng, 60, 3);
    for (int k = 0; k <= 2; ++k) {
      const auto rep = check_hodge_spectral_relations(f, k, 1e-8);
      if (!rep.holds) ++failures;
    }
    const auto weighted = with_random_inner_products(rng, f);
    for (int k = 0; k <= 2; ++k)
      if (!check_hodge_spectral_relations(weighted, k, 1e-8).holds) ++failures;
    // Identity inner products: compare against plain delta products.
    for (int k = 0; k <= 2; ++k) {
      const Mat up = k < 2 ? Mat(oracle::coboundary(f, k).transpose() * oracle::coboundary(f, k))
                           : Mat::Zero(f.cochain_dim(k), f.cochain_dim(k));
      const Mat down = k > 0 ? Mat(oracle::coboundary(f, k - 1) * oracle::coboundary(f, k - 1).transpose())
                             : Mat::Zero(f.cochain_dim(k), f.cochain_dim(k));
      const Vec s_up = oracle::eigenvalues(up), s_down = oracle::eigenvalues(down);
      const double scale = std::max({1.0, oracle::max_abs(s_up), oracle::max_abs(s_down)});
      double gap = nonzero_gap(oracle::eigenvalues(up + down), concat(s_up, s_down)) / scale;
      if (k < 2) {
        const Mat d = oracle::coboundary(f, k);
        gap = std::max(gap, nonzero_gap(s_up, oracle::eigenvalues(d * d.transpose())) / scale);
      }
      worst_oracle = std::max(worst_oracle, gap);
    }
  }
  return {failures == 0 && worst_oracle <= 1e-8,
          fmt("300 degree checks, %d failures; oracle gap %.2e", failures, worst_oracle)};
}

// 7. Product sheaf spectra are pairwise sums.
Outcome product_formula() {
  const auto p2 = constant_sheaf<double>(path_graph(2), 1);
  const Vec l2 = oracle::eigenvalues(oracle::laplacian0(p2));
  Vec sums(4);
  sums << l2(0) + l2(0), l2(0) + l2(1), l2(1) + l2(0), l2(1) + l2(1);
  const Vec expected = oracle::sorted(sums);
  const Vec got = laplacian_spectrum(product_sheaf(p2, p2), 0).eigenvalues;
  const bool p2_ok = got.size() == 4 && (got - expected).cwiseAbs().maxCoeff() <= 1e-9 &&
                     (expected - vec({0, 2, 2, 4})).cwiseAbs().maxCoeff() <= 1e-9;
  Rng rng(7007);
  double worst = 0;
  int check_failures = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_graph_sheaf(rng, random_graph(rng, uniform_int(rng, 2, 4), 1), 2, 1);
    const auto g = random_graph_sheaf(rng, random_graph(rng, uniform_int(rng, 2, 4), 1), 2, 1);
    const Vec lf = oracle::eigenvalues(oracle::laplacian0(f)), lg = oracle::eigenvalues(oracle::laplacian0(g));
    Vec all(lf.size() * lg.size());
    for (Index i = 0; i < lf.size(); ++i)
      for (Index j = 0; j < lg.size(); ++j) all(i * lg.size() + j) = lf(i) + lg(j);
    const Vec want = oracle::sorted(all);
    const Vec have = laplacian_spectrum(product_sheaf(f, g), 0).eigenvalues;
    worst = std::max(worst, have.size() == want.size() ? (have - want).cwiseAbs().maxCoeff() / std::max(1.0, want.maxCoeff())
                                                       : 1.0);
    if (!product_spectrum_check(f, g).holds) ++check_failures;
  }
  return {p2_ok && worst <= 1e-8 && check_failures == 0,
          fmt("P2xP2 spectrum %s; 20 random pairs, max gap %.2e, %d degree-1 check failures",
              p2_ok ? "{0,2,2,4}" : "WRONG", worst, check_failures)};
}

// 8. Effective resistance: K3 value, two solvers, and the trace bound.
Outcome effective_resistance_criterion() {
  const auto k3 = constant_sheaf<double>(complete_graph(3), 1);
  const Mat lp = oracle::pinv(oracle::laplacian0(k3));
  const Vec y = vec({-1, 1, 0});
  const double oracle_r = y.dot(lp * y);
  const double form = cell_resistance(k3, k3.base().index_of("e0_1")).matrix(0, 0);
  const double pair = effective_resistance(k3, 0, make_cochain<double>(k3, 0, {{"v0", vec({1})}}),
                                           make_cochain<double>(k3, 0, {{"v1", vec({1})}}));
  const bool k3_ok = std::abs(oracle_r - 2.0 / 3.0) <= 1e-12 && std::abs(form - oracle_r) <= 1e-10 &&
                     std::abs(pair - oracle_r) <= 1e-10;

  Rng rng(8008);
  double worst_rel = 0, worst_oracle = 0, worst_foster = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const bool graph = trial < 60;
    CellularSheaf<double> f = graph ? random_graph_sheaf(rng, random_graph(rng, uniform_int(rng, 2, 7), 3), 3, 1)
                                    : random_small_complex_sheaf(rng, 60, 3);
    const bool weighted = trial % 2 == 1;
    if (weighted) f = with_random_inner_products(rng, f);
    const int k = graph ? 0 : 1;
    const Mat m_k = oracle::inner_products(f, k), m_up = oracle::inner_products(f, k + 1);
    const Mat dk = oracle::coboundary(f, k);
    Vec z = gaussian_vector(rng, f.cochain_dim(k));
    if (k > 0) {
      const Mat below = oracle::coboundary(f, k - 1);
      if (below.cols() > 0 && oracle::rank(below) > 0) {
        Eigen::JacobiSVD<Mat> svd(below, Eigen::ComputeThinU);
        const Mat q = svd.matrixU().leftCols(oracle::rank(below));
        z -= q * (q.transpose() * z);
      }
    }
    const Vec a = m_k.ldlt().solve(z);
    const Vec c = gaussian_vector(rng, f.cochain_dim(k + 1));
    const Vec b = a + m_k.ldlt().solve(dk.transpose() * (m_up * c));
    const Cochain<double> ca{k, a}, cb{k, b};
    const double r1 = effective_resistance(f, k, ca, cb);
    const double r2 = least_norm_resistance(f, k, ca, cb);
    worst_rel = std::max(worst_rel, std::abs(r1 - r2) / std::max({std::abs(r1), std::abs(r2), 1e-300}));
    if (!weighted) {
      const Vec yy = b - a;
      const double r0 = yy.dot(oracle::pinv(dk.transpose() * dk) * yy);
      worst_oracle = std::max(worst_oracle, std::abs(r1 - r0) / std::max(std::abs(r0), 1e-300));
    }
    double traces = 0;
    for (CellIndex s : f.base().cells_of_dim(k + 1)) traces += cell_resistance(f, s).trace;
    worst_foster = std::max(worst_foster, traces / static_cast<double>(f.cochain_dim(k)));
  }
  return {k3_ok && worst_rel <= 1e-9 && worst_oracle <= 1e-8 && worst_foster <= 1 + 1e-9,
          fmt("K3 edge R = %.15g (oracle %.15g); 100 instances: solver gap %.2e, oracle gap %.2e, max sum tr/n = %.6f",
              form, oracle_r, worst_rel, worst_oracle, worst_foster)};
}

// 9. Sparsifier on K20 over 100 seeds.
Outcome sparsifier() {
  const auto start = Clock::now();
  const auto f = constant_sheaf<double>(complete_graph(20), 1);
  const double eps = 0.5, n = 20;
  const double p_oracle = std::min(1.0, 4.0 / (eps * eps) * std::log(n) * (2.0 / n));
  const double budget = 4.0 / (eps * eps) * n * std::log(n);
  int within = 0, count_outliers = 0, p_mismatch = 0;
  double worst_err = 0, expected = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = sparsify(f, eps, seed);
    const auto& r = s.report;
    if (r.within_bound) ++within;
    worst_err = std::max(worst_err, r.relative_error);
    double mean = 0, var = 0;
    for (double p : r.probabilities) {
      mean += p;
      var += p * (1 - p);
      if (std::abs(p - p_oracle) > 1e-12) ++p_mismatch;
    }
    expected = mean;
    if (std::abs(static_cast<double>(r.kept_cells) - mean) > 3 * std::sqrt(var) + 1e-9 || mean > budget) ++count_outliers;
  }
  const double elapsed = seconds_since(start);
  return {within >= 90 && count_outliers == 0 && p_mismatch == 0 && elapsed < 60.0,
          fmt("%d/100 within eps (worst %.3g); expected cells %.1f <= %.1f, %d count outliers; p = %.4g; %.2f s",
              within, worst_err, expected, budget, count_outliers, p_oracle, elapsed)};
}

// 10. Kron reduction agrees with harmonic extension.
Outcome kron_consistency() {
  Rng rng(10010);
  double worst = 0, worst_realized = 0, worst_reported = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = uniform_int(rng, 3, 8);
    auto f = random_graph_sheaf(rng, random_graph(rng, n, uniform_int(rng, 0, n)), 3);
    if (trial % 3 == 0) f = with_random_inner_products(rng, f);
    const auto& x = f.base();
    std::vector<CellId> ids;
    std::vector<CellIndex> bnd;
    for (CellIndex v : x.cells_of_dim(0))
      if (uniform_int(rng, 0, 1)) ids.push_back(x.id(v)), bnd.push_back(v);
    if (ids.empty()) ids.push_back(x.id(x.cells_of_dim(0).front())), bnd.push_back(x.cells_of_dim(0).front());
    const auto l = energy_form(f, 0);
    const auto reduced = kron_reduce_matrix(l, bnd);
    for (Index j = 0; j < reduced.rows.total(); ++j) {
      std::map<CellId, Vec> blocks;
      for (std::size_t b = 0; b < reduced.rows.cells.size(); ++b) {
        const CellIndex c = reduced.rows.cells[b];
        Vec block = Vec::Zero(f.stalk_dim(c));
        const Index local = j - reduced.rows.offsets[b];
        if (local >= 0 && local < reduced.rows.sizes[b]) block(local) = 1;
        blocks[x.id(c)] = block;
      }
      const auto ext = harmonic_extension(f, BoundaryProblem<double>{0, ids, make_cochain(f, 0, blocks)});
      const Vec le = l.matrix * ext.cochain.values;
      Vec projected(reduced.rows.total());
      for (std::size_t b = 0; b < reduced.rows.cells.size(); ++b) {
        const auto pos = l.rows.find(reduced.rows.cells[b]);
        projected.segment(reduced.rows.offsets[b], reduced.rows.sizes[b]) =
            le.segment(l.rows.offsets[*pos], l.rows.sizes[*pos]);
      }
      worst = std::max(worst, (reduced.matrix.col(j) - projected).norm());
    }
  }
  for (int trial = 0; trial < 25; ++trial) {
    const int n = uniform_int(rng, 3, 8);
    const auto f = random_graph_sheaf(rng, random_graph(rng, n, uniform_int(rng, 0, n)), 1, 1);
    std::vector<CellId> ids;
    for (CellIndex v : f.base().cells_of_dim(0))
      if (uniform_int(rng, 0, 1)) ids.push_back(f.base().id(v));
    if (ids.empty()) ids.push_back("v0");
    const auto red = kron_reduce_sheaf(f, ids);
    const Mat realized = oracle::laplacian0(red.sheaf);
    const auto& out = red.sheaf.base();
    Mat aligned = Mat::Zero(red.schur.matrix.rows(), red.schur.matrix.cols());
    std::vector<Index> row_of;
    for (CellIndex c : red.schur.rows.cells) {
      const CellIndex r = out.index_of(f.base().id(c));
      row_of.push_back(red.sheaf.offset(r));
    }
    for (std::size_t a = 0; a < row_of.size(); ++a)
      for (std::size_t b = 0; b < row_of.size(); ++b) aligned(a, b) = realized(row_of[a], row_of[b]);
    const double scale = std::max(1.0, red.schur.matrix.cwiseAbs().maxCoeff());
    worst_realized = std::max(worst_realized, (aligned - red.schur.matrix).cwiseAbs().maxCoeff() / scale);
    worst_reported = std::max(worst_reported, red.residual);
  }
  return {worst <= 1e-8 && worst_realized <= 1e-8 && worst_reported <= 1e-8,
          fmt("max |L'x - pi_B L E(x)| = %.2e over unit boundary vectors; realized sheaf gap %.2e (reported %.2e)",
              worst, worst_realized, worst_reported)};
}

bool energies_nonincreasing(const std::vector<double>& e) {
  for (std::size_t t = 1; t < e.size(); ++t)
    if (e[t] > e[t - 1] + 1e-12 * std::max(1.0, std::abs(e[t - 1]))) return false;
  return true;
}

// 11. Diffusion reaches the harmonic projection with decreasing energy.
Outcome diffusion() {
  const auto k3 = constant_sheaf<double>(complete_graph(3), 1);
  const auto x0 = make_cochain<double>(k3, 0, {{"v0", vec({1})}});
  const auto run = diffuse(k3, x0, 0.1, 500);
  const double average = x0.values.mean();
  const double gap = (run.trajectory.back().values.array() - average).abs().maxCoeff();
  bool monotone = run.energy_nonincreasing && energies_nonincreasing(run.energies);
  Rng rng(11011);
  int runs = 1;
  for (int trial = 0; trial < 20; ++trial, ++runs) {
    auto f = trial % 2 ? random_small_complex_sheaf(rng, 60, 3)
                       : random_graph_sheaf(rng, random_graph(rng, uniform_int(rng, 2, 8), 3), 3);
    if (trial % 3 == 0) f = with_random_inner_products(rng, f);
    const int k = trial % 2;
    const double top = std::max(oracle_hodge_max(f, k), 1e-12);
    const auto d = diffuse(f, Cochain<double>{k, gaussian_vector(rng, f.cochain_dim(k))}, 0.9 / top, 200);
    monotone = monotone && d.energy_nonincreasing && energies_nonincreasing(d.energies);
  }
  return {gap <= 1e-6 && monotone,
          fmt("K3 final gap to average %.2e; energy monotone in all %d runs: %s", gap, runs, monotone ? "yes" : "no")};
}

// 12. Approximations of the constant sheaf and their eigenvalue bounds.
Outcome approximation_bound() {
  Rng rng(12012);
  int valid = 0, tries = 0, lib_failures = 0, oracle_failures = 0;
  double worst_agreement = 0;
  while (valid < 50 && tries < 5000) {
    ++tries;
    const int n = uniform_int(rng, 3, 7);
    const auto g = random_graph(rng, n, uniform_int(rng, n / 2, 2 * n));
    const Index dim_v = uniform_int(rng, 2, 4);
    const Index k = uniform_int(rng, 1, static_cast<int>(dim_v));
    const auto weights = random_edge_weights(rng, g);
    const auto app = approximate_constant_sheaf(random_approximation(rng, g, dim_v, k), weights);
    if (!app.is_valid) continue;
    ++valid;
    const auto rep = approximation_spectral_bound_check(app.morphism);
    if (!rep.holds || !rep.max_holds) ++lib_failures;

    const Vec lf = oracle::eigenvalues(oracle::laplacian0(app.sheaf));
    Mat lc = Mat::Zero(n, n);
    for (CellIndex e : g.cells_of_dim(1)) {
      const auto faces = g.faces(e);
      const Index u = g.position_in_dim(g.incidences()[faces[0]].face);
      const Index v = g.position_in_dim(g.incidences()[faces[1]].face);
      const double w = weights.at(g.id(e)) * weights.at(g.id(e));
      lc(u, u) += w, lc(v, v) += w, lc(u, v) -= w, lc(v, u) -= w;
    }
    const Vec lcs = oracle::eigenvalues(lc);
    const double ratio = static_cast<double>(k) / static_cast<double>(dim_v);
    const double lambda_f = lf(dim_v), lambda_c = lcs(1);
    if (lambda_f > ratio * lambda_c + 1e-9 || lf.maxCoeff() < ratio * lcs.maxCoeff() - 1e-9) ++oracle_failures;
    worst_agreement = std::max({worst_agreement, std::abs(rep.lambda_f - lambda_f), std::abs(rep.lambda_const - lambda_c),
                                std::abs(rep.lambda_f_max - lf.maxCoeff()), std::abs(rep.lambda_const_max - lcs.maxCoeff())});
  }
  return {valid == 50 && lib_failures == 0 && oracle_failures == 0 && worst_agreement <= 1e-9,
          fmt("%d valid of %d sampled; %d reported violations, %d oracle violations, eigenvalue gap %.2e", valid, tries,
              lib_failures, oracle_failures, worst_agreement)};
}

// 13. Maximum modulus for harmonic extensions on O(2)-bundles over grids.
Outcome max_modulus() {
  Rng rng(13013);
  int failures = 0, oracle_failures = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = uniform_int(rng, 2, 4), cols = uniform_int(rng, 3, 5);
    const auto g = grid_graph(rows, cols);
    const auto f = on_bundle<double>(g, 2, random_rotations(rng, g, 2), random_edge_weights(rng, g));
    std::vector<CellId> boundary;
    std::map<CellId, Vec> values;
    for (int r = 0; r < rows; ++r)
      for (int c : {0, cols - 1}) {
        const CellId id = "g" + std::to_string(r) + "_" + std::to_string(c);
        boundary.push_back(id);
        values[id] = gaussian_vector(rng, 2);
      }
    const auto ext = harmonic_extension(f, BoundaryProblem<double>{0, boundary, make_cochain(f, 0, values)});
    const auto rep = check_max_modulus(f, boundary, ext.cochain, 1e-9);
    if (!rep.thin || !rep.attained_on_boundary || !rep.holds) ++failures;

    const Vec& xv = ext.cochain.values;
    const Vec lx = oracle::laplacian0(f) * xv;
    double on_b = 0, inside = 0, residual = 0;
    for (CellIndex v : g.cells_of_dim(0)) {
      const bool is_b = std::find(boundary.begin(), boundary.end(), g.id(v)) != boundary.end();
      const double norm = xv.segment(f.offset(v), 2).norm();
      (is_b ? on_b : inside) = std::max(is_b ? on_b : inside, norm);
      if (!is_b) residual = std::max(residual, lx.segment(f.offset(v), 2).norm());
    }
    if (on_b < inside - 1e-9 || residual > 1e-9 * std::max(1.0, xv.norm())) ++oracle_failures;
  }
  return {failures == 0 && oracle_failures == 0,
          fmt("50 grids, B = first and last columns: %d report failures, %d oracle failures", failures, oracle_failures)};
}

int run_cli(const std::vector<std::string>& args, std::string& out) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  out = o.str();
  return code;
}

// 14. CLI: canonical round trips, pinned reports, deterministic sparsify.
Outcome cli_criterion() {
  int failures = 0;
  std::string notes;
  for (const char* name : {"p2-constant", "star-sheaf", "frustration"}) {
    const auto d = cli::parse_document(read_text(kRoot + "/docs/examples/" + name + ".json"));
    const std::string s = cli::serialize_document(d);
    const auto d2 = cli::parse_document(s);
    const std::string golden = read_text(kRoot + "/tests/golden/" + name + ".canonical.json");
    if (!(d2 == d) || cli::serialize_document(d2) != s || s != golden) {
      ++failures;
      notes += std::string(" round-trip:") + name;
    }
  }
  const std::string k3 = kRoot + "/tests/data/k3-constant.json";
  std::string out;
  const int code = run_cli({"spectrum", "--degree", "0", k3}, out);
  const auto report = cli::Json::parse(out);
  std::vector<double> eig = report.at("eigenvalues").get<std::vector<double>>();
  const bool eig_ok = eig.size() == 3 && std::abs(eig[0]) <= 1e-9 && std::abs(eig[1] - 3) <= 1e-9 && std::abs(eig[2] - 3) <= 1e-9;
  if (code != 0 || !eig_ok || out != read_text(kRoot + "/tests/golden/spectrum-k3.json")) {
    ++failures;
    notes += " spectrum-report";
  }
  std::string bad;
  if (run_cli({"validate", kRoot + "/tests/data/bad-signs.json"}, bad) != cli::kExitFailed) {
    ++failures;
    notes += " validate-exit";
  }
  std::string first, second;
  const std::string k4 = kRoot + "/tests/data/k4-weighted.json";
  const int c1 = run_cli({"sparsify", "--eps", "0.5", "--seed", "7", k4}, first);
  const int c2 = run_cli({"sparsify", "--eps", "0.5", "--seed", "7", k4}, second);
  if (c1 != 0 || c2 != 0 || first != second || first != read_text(kRoot + "/tests/golden/sparsify-k4-seed7.json")) {
    ++failures;
    notes += " sparsify";
  }
  return {failures == 0, failures == 0 ? "3 round trips, spectrum and sparsify goldens, exit codes" : "failed:" + notes};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"hodge-correctness", hodge_correctness},
      {"star-sheaf-fixture", star_fixture},
      {"frustration-fixture", frustration_fixture},
      {"deletion-interlacing", interlacing},
      {"normalized-bound", normalized_bound},
      {"hodge-spectral-relations", spectral_relations},
      {"product-formula", product_formula},
      {"effective-resistance", effective_resistance_criterion},
      {"sparsifier", sparsifier},
      {"kron-consistency", kron_consistency},
      {"diffusion", diffusion},
      {"approximation-bound", approximation_bound},
      {"maximum-modulus", max_modulus},
      {"cli", cli_criterion},
  };
  int failed = 0, index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed;
}
