#include "cellsheaf/cli/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cellsheaf/cli/document.hpp"
#include "cellsheaf/dynamics.hpp"
#include "cellsheaf/harmonic.hpp"
#include "cellsheaf/resistance.hpp"
#include "cellsheaf/spectral.hpp"

namespace cellsheaf::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

// A command's report fields and whether its check passed.
struct Outcome {
  Json report;
  bool ok = true;
};

std::string read_file(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  buf << in.rdbuf();
  return buf.str();
}

const CellularSheaf<double>& need_sheaf(const Document& d) {
  if (!d.sheaf) throw Error("document has no sheaf section");
  return *d.sheaf;
}

const Cochain<double>& need_cochain(const Document& d, const std::string& name) {
  auto it = d.cochains.find(name);
  if (it == d.cochains.end()) throw Error("document has no cochain named '" + name + "'");
  return it->second;
}

LaplacianPart part_from(bool up, bool down) {
  if (up) return LaplacianPart::up;
  if (down) return LaplacianPart::down;
  return LaplacianPart::full;
}

const char* part_name(LaplacianPart p) {
  switch (p) {
    case LaplacianPart::up: return "up";
    case LaplacianPart::down: return "down";
    default: return "full";
  }
}

Json sheaf_document(const CellularSheaf<double>& f) { return document_to_json(Document{f.base(), f, {}}); }

struct Options {
  std::string document;
  std::optional<double> tol;
  int degree = 0;
  bool normalized = false, up = false, down = false, full = false;
  std::vector<std::string> boundary;
  std::string values;
  std::string cell;
  std::vector<std::string> between;
  double eps = 0.5;
  std::uint64_t seed = 0;
  double dt = 0.1;
  int steps = 0;
  std::string x0;
  bool trajectory = false;
  std::string spec;
  bool cutset = false, bound = false;
  int cap = 4;
  std::vector<std::string> interlace;
  std::string product;
  bool hodge_relations = false;
};

Outcome cmd_validate(const Options& o) {
  Outcome r;
  Document d;
  try {
    d = parse_document(read_file(o.document));
  } catch (const SchemaError& e) {
    r.report["errors"] = Json::array({e.what()});
    r.ok = false;
    return r;
  }
  r.report["cells"] = d.complex.size();
  r.report["incidences"] = d.complex.incidences().size();
  r.report["dimension"] = d.complex.dimension();
  Json bad = Json::array();
  for (const auto& v : validate_incidence(d.complex))
    bad.push_back(Json{{"face", v.face}, {"coface", v.coface}, {"sum", v.sum}});
  r.ok = bad.empty();
  r.report["incidence_violations"] = std::move(bad);
  if (d.sheaf) {
    Json dims = Json::array();
    for (int k = 0; k <= d.complex.dimension(); ++k) dims.push_back(d.sheaf->cochain_dim(k));
    r.report["cochain_dims"] = std::move(dims);
    double scale = 1;
    for (const auto& m : d.sheaf->restrictions()) scale = std::max(scale, m.squaredNorm());
    const double residual = max_composition_residual(*d.sheaf);
    r.report["composition_residual"] = residual;
    if (residual > o.tol.value_or(kCheckTolerance) * scale) r.ok = false;
  }
  Json names = Json::array();
  for (const auto& [name, x] : d.cochains) names.push_back(name);
  r.report["cochains"] = std::move(names);
  return r;
}

Outcome cmd_spectrum(const Options& o) {
  const Document d = parse_document(read_file(o.document));
  const auto& f = need_sheaf(d);
  const LaplacianPart part = part_from(o.up, o.down);
  const Spectrum<double> s = o.normalized ? spectrum<double>(normalized_laplacian(f, o.tol).matrix, o.tol)
                                          : laplacian_spectrum(f, o.degree, part, o.tol);
  Outcome r;
  r.report["degree"] = o.degree;
  r.report["part"] = o.normalized ? "normalized" : part_name(part);
  r.report["eigenvalues"] = vector_to_json(s.eigenvalues);
  r.report["zero_tol"] = s.zero_tol;
  r.report["kernel_dim"] = s.zero_count();
  return r;
}

Outcome cmd_harmonic(const Options& o) {
  const Document d = parse_document(read_file(o.document));
  const auto& f = need_sheaf(d);
  const auto h = harmonic_cochains(f, o.degree, o.tol);
  Outcome r;
  r.report["degree"] = o.degree;
  r.report["dimension"] = h.dimension;
  r.report["zero_tol"] = h.zero_tol;
  Json basis = Json::array();
  for (Index j = 0; j < h.basis.cols(); ++j) basis.push_back(cochain_to_json(f, {o.degree, h.basis.col(j)}));
  r.report["basis"] = std::move(basis);
  return r;
}

Outcome cmd_extend(const Options& o) {
  const Document d = parse_document(read_file(o.document));
  const auto& f = need_sheaf(d);
  const auto& values = need_cochain(d, o.values);
  BoundaryProblem<double> problem{values.degree, o.boundary, values, part_from(o.up, o.down)};
  const auto ext = harmonic_extension(f, problem, o.tol);
  Outcome r;
  r.report["boundary"] = o.boundary;
  r.report["unique"] = ext.unique;
  r.report["residual"] = ext.residual;
  r.report["cochain"] = cochain_to_json(f, ext.cochain);
  return r;
}

Outcome cmd_kron(const Options& o) {
  const Document d = parse_document(read_file(o.document));
  const auto& f = need_sheaf(d);
  Outcome r;
  r.report["boundary"] = o.boundary;
  try {
    const auto k = kron_reduce_sheaf(f, o.boundary, o.tol.value_or(kCheckTolerance));
    r.report["residual"] = k.residual;
    r.report["scaling"] = vector_to_json(k.certificate.scaling);
    r.report["schur"] = matrix_to_json(k.schur.matrix);
    r.report["sheaf"] = sheaf_document(k.sheaf);
  } catch (const KronObstruction& e) {
    r.report["obstruction"] = e.what();
    r.ok = false;
  }
  return r;
}

Outcome cmd_resistance(const Options& o) {
  const Document d = parse_document(read_file(o.document));
  const auto& f = need_sheaf(d);
  Outcome r;
  if (!o.cell.empty()) {
    const auto q = cell_resistance(f, f.base().index_of(o.cell));
    r.report["cell"] = o.cell;
    r.report["form"] = matrix_to_json(q.matrix);
    r.report["trace"] = q.trace;
  } else {
    const auto& a = need_cochain(d, o.between.at(0));
    const auto& b = need_cochain(d, o.between.at(1));
    r.report["between"] = o.between;
    r.report["degree"] = a.degree;
    r.report["resistance"] = effective_resistance(f, a.degree, a, b, o.tol.value_or(kHomologyTolerance));
  }
  return r;
}

Outcome cmd_sparsify(const Options& o) {
  const Document d = parse_document(read_file(o.document));
  const auto& f = need_sheaf(d);
  const auto s = sparsify(f, o.eps, o.seed);
  const auto& rep = s.report;
  const auto& top = f.base().cells_of_dim(f.base().dimension());
  Json cells = Json::array();
  for (std::size_t j = 0; j < top.size(); ++j)
    cells.push_back(Json{{"cell", f.base().id(top[j])}, {"probability", rep.probabilities[j]}, {"kept", bool(rep.kept[j])}});
  Outcome r;
  r.report["seed"] = rep.seed;
  r.report["epsilon"] = rep.epsilon;
  r.report["n"] = rep.n;
  r.report["total_cells"] = rep.total_cells;
  r.report["kept_cells"] = rep.kept_cells;
  r.report["expected_cells"] = rep.expected_cells;
  r.report["trace_sum"] = rep.trace_sum;
  r.report["lambda_min"] = rep.lambda_min;
  r.report["lambda_max"] = rep.lambda_max;
  r.report["relative_error"] = rep.relative_error;
  r.report["within_bound"] = rep.within_bound;
  r.report["cells"] = std::move(cells);
  r.report["sheaf"] = sheaf_document(s.sheaf);
  return r;
}

Outcome cmd_diffuse(const Options& o) {
  const Document d = parse_document(read_file(o.document));
  const auto& f = need_sheaf(d);
  const auto& x0 = need_cochain(d, o.x0);
  if (x0.degree != o.degree)
    throw Error("cochain '" + o.x0 + "' has degree " + std::to_string(x0.degree) + ", expected " +
                std::to_string(o.degree));
  const auto run = diffuse(f, x0, o.dt, o.steps);
  Outcome r;
  r.report["degree"] = o.degree;
  r.report["dt"] = o.dt;
  r.report["steps"] = o.steps;
  r.report["lambda_max"] = run.lambda_max;
  r.report["lambda_min_nonzero"] = run.lambda_min_nonzero;
  r.report["energy_nonincreasing"] = run.energy_nonincreasing;
  r.report["energies"] = run.energies;
  r.report["final"] = cochain_to_json(f, run.trajectory.back());
  r.report["projection"] = cochain_to_json(f, run.projection);
  r.report["final_distance"] = run.final_distance;
  r.report["predicted_distance"] = run.predicted_distance;
  r.report["exact_distance"] = run.exact_distance;
  if (o.trajectory) {
    Json traj = Json::array();
    for (const auto& x : run.trajectory) traj.push_back(cochain_to_json(f, x));
    r.report["trajectory"] = std::move(traj);
  }
  r.ok = run.energy_nonincreasing;
  return r;
}

Outcome cmd_approx(const Options& o) {
  const ApproximationDocument doc = parse_approximation(read_file(o.spec));
  const auto approx = approximate_constant_sheaf(doc.spec, doc.weights);
  Outcome r;
  r.report["dim_v"] = doc.spec.dim_v;
  r.report["sections"] = approx.sections;
  r.report["is_valid"] = approx.is_valid;
  r.report["sheaf"] = sheaf_document(approx.sheaf);
  if (o.cutset) {
    const auto c = check_cutset_condition(doc.spec, o.cap);
    Json bad = Json::array();
    for (const auto& v : c.violations) bad.push_back(Json{{"edges", v.edges}, {"intersection_dim", v.intersection_dim}});
    r.report["cutset"] = Json{{"cap", c.cap}, {"checked", c.checked}, {"passes", c.passes}, {"violations", std::move(bad)}};
  }
  if (o.bound) {
    const auto b = approximation_spectral_bound_check(approx.morphism, o.tol.value_or(kCheckTolerance));
    r.report["bound"] = Json{{"k", b.k},
                             {"lambda_f", b.lambda_f},
                             {"lambda_const", b.lambda_const},
                             {"bound", b.bound},
                             {"holds", b.holds},
                             {"lambda_f_max", b.lambda_f_max},
                             {"lambda_const_max", b.lambda_const_max},
                             {"max_bound", b.max_bound},
                             {"max_holds", b.max_holds}};
    r.ok = b.holds && b.max_holds;
  }
  return r;
}

Outcome cmd_check(const Options& o) {
  const Document d = parse_document(read_file(o.document));
  const auto& f = need_sheaf(d);
  Outcome r;
  const double tol = o.tol.value_or(kSpectrumTolerance);
  if (!o.interlace.empty()) {
    const auto rep = deletion_interlacing(f, o.interlace, o.degree);
    Json j{{"deleted", o.interlace},
           {"degree", o.degree},
           {"t", rep.t},
           {"lambda", vector_to_json(rep.lambda)},
           {"mu", vector_to_json(rep.mu)},
           {"interlaced", rep.interlaced}};
    if (rep.normalized_checked) {
      j["normalized_lambda"] = vector_to_json(rep.normalized_lambda);
      j["normalized_mu"] = vector_to_json(rep.normalized_mu);
      j["normalized_interlaced"] = rep.normalized_interlaced;
    }
    r.report["interlace"] = std::move(j);
    r.ok = rep.interlaced;
  } else if (!o.product.empty()) {
    const Document other = parse_document(read_file(o.product));
    const auto rep = product_spectrum_check(f, need_sheaf(other), tol);
    Json pairs = Json::array();
    for (const auto& p : rep.degree1_pairs)
      pairs.push_back(Json{{"lambda", p.lambda}, {"mu", p.mu}, {"rayleigh", p.rayleigh}, {"residual", p.residual}});
    r.report["product"] = Json{{"sum_formula_residual", rep.sum_formula_residual},
                               {"sum_spectrum_error", rep.sum_spectrum_error},
                               {"degree1_checked", rep.degree1_checked},
                               {"degree1_pairs", std::move(pairs)},
                               {"degree1_skipped", rep.degree1_skipped},
                               {"holds", rep.holds}};
    r.ok = rep.holds;
  } else {
    const auto rep = check_hodge_spectral_relations(f, o.degree, tol);
    r.report["hodge_relations"] = Json{{"degree", o.degree},
                                       {"union_error", rep.union_error},
                                       {"adjacent_error", rep.adjacent_error},
                                       {"tolerance", rep.tolerance},
                                       {"holds", rep.holds}};
    r.ok = rep.holds;
  }
  return r;
}

Json header(const std::string& command) {
  return Json{{"format", "report"}, {"version", kFormatVersion}, {"command", command}};
}

void emit(std::ostream& out, Json report, const char* status) {
  report["status"] = status;
  out << write_json(report);
}

std::optional<double> env_tolerance() {
  const char* raw = std::getenv(kToleranceVariable);
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (*end != '\0' || !(v > 0)) throw UsageError(std::string(kToleranceVariable) + " is not a positive number");
  return v;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cellular sheaf Laplacians from the command line", "sheafctl"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  double tol_flag = 0;
  auto* tol_opt = app.add_option("--tol", tol_flag, "Numerical tolerance (overrides CELLSHEAF_TOL)");

  auto add_doc = [&](CLI::App* sub) { sub->add_option("document", o.document, "Input document, - for stdin")->required(); };

  auto* validate = app.add_subcommand("validate", "Check a document's schema, signs, and delta^2 = 0");
  add_doc(validate);

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Eigenvalues of a sheaf Laplacian");
  add_doc(spectrum_cmd);
  spectrum_cmd->add_option("--degree", o.degree, "Cochain degree");
  spectrum_cmd->add_flag("--normalized", o.normalized, "Normalized degree-0 Laplacian of a graph sheaf");
  auto* up = spectrum_cmd->add_flag("--up", o.up, "Up-Laplacian");
  auto* down = spectrum_cmd->add_flag("--down", o.down, "Down-Laplacian");
  auto* full = spectrum_cmd->add_flag("--full", o.full, "Hodge Laplacian (default)");
  up->excludes(down)->excludes(full);
  down->excludes(full);

  auto* harmonic = app.add_subcommand("harmonic", "Basis of harmonic cochains");
  add_doc(harmonic);
  harmonic->add_option("--degree", o.degree, "Cochain degree");

  auto* extend = app.add_subcommand("extend", "Harmonic extension of boundary values");
  add_doc(extend);
  extend->add_option("--boundary", o.boundary, "Boundary cell ids")->required()->delimiter(',');
  extend->add_option("--values", o.values, "Name of the cochain holding the boundary values")->required();

  auto* kron = app.add_subcommand("kron", "Kron reduction onto boundary vertices");
  add_doc(kron);
  kron->add_option("--boundary", o.boundary, "Boundary vertex ids")->required()->delimiter(',');

  auto* resistance = app.add_subcommand("resistance", "Effective resistance");
  add_doc(resistance);
  auto* cell = resistance->add_option("--cell", o.cell, "Resistance form of one cell");
  auto* between = resistance->add_option("--between", o.between, "Two cochain names")->expected(2);
  cell->excludes(between);

  auto* sparsify_cmd = app.add_subcommand("sparsify", "Randomized spectral sparsification");
  add_doc(sparsify_cmd);
  sparsify_cmd->add_option("--eps", o.eps, "Target accuracy in (0, 1)")->required();
  sparsify_cmd->add_option("--seed", o.seed, "64-bit seed")->required();

  auto* diffuse_cmd = app.add_subcommand("diffuse", "Explicit Euler heat flow");
  add_doc(diffuse_cmd);
  diffuse_cmd->add_option("--degree", o.degree, "Cochain degree");
  diffuse_cmd->add_option("--dt", o.dt, "Step size")->required();
  diffuse_cmd->add_option("--steps", o.steps, "Number of steps")->required();
  diffuse_cmd->add_option("--x0", o.x0, "Name of the initial cochain")->required();
  diffuse_cmd->add_flag("--trajectory", o.trajectory, "Include every iterate");

  auto* approx = app.add_subcommand("approx-const", "Approximation to a constant sheaf");
  approx->add_option("--spec", o.spec, "Approximation document")->required();
  approx->add_flag("--cutset", o.cutset, "Check the cutset condition");
  approx->add_option("--cap", o.cap, "Largest vertex set enumerated for cutsets");
  approx->add_flag("--bound", o.bound, "Check the spectral bound");

  auto* check = app.add_subcommand("check", "Spectral property checks");
  add_doc(check);
  check->add_option("--degree", o.degree, "Cochain degree");
  auto* interlace = check->add_option("--interlace", o.interlace, "Deleted cell ids")->delimiter(',');
  auto* product = check->add_option("--product", o.product, "Second document for the product sheaf");
  auto* relations = check->add_flag("--hodge-relations", o.hodge_relations, "Hodge spectral relations");
  interlace->excludes(product)->excludes(relations);
  product->excludes(relations);

  std::string command;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    command = app.get_subcommands().front()->get_name();
    if (check->parsed() && !interlace->count() && !product->count() && !relations->count())
      throw CLI::ValidationError("check needs --interlace, --product, or --hodge-relations");
    if (resistance->parsed() && !cell->count() && !between->count())
      throw CLI::ValidationError("resistance needs --cell or --between");
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    Json r = header(command);
    r["message"] = e.what();
    emit(out, std::move(r), "usage-error");
    return kExitUsage;
  }

  Json report = header(command);
  try {
    o.tol = tol_opt->count() ? std::optional<double>(tol_flag) : env_tolerance();
    if (o.tol && !(*o.tol > 0)) throw UsageError("--tol must be positive");
    Outcome result;
    if (command == "validate") result = cmd_validate(o);
    else if (command == "spectrum") result = cmd_spectrum(o);
    else if (command == "harmonic") result = cmd_harmonic(o);
    else if (command == "extend") result = cmd_extend(o);
    else if (command == "kron") result = cmd_kron(o);
    else if (command == "resistance") result = cmd_resistance(o);
    else if (command == "sparsify") result = cmd_sparsify(o);
    else if (command == "diffuse") result = cmd_diffuse(o);
    else if (command == "approx-const") result = cmd_approx(o);
    else result = cmd_check(o);
    for (auto& [key, value] : result.report.items()) report[key] = value;
    emit(out, std::move(report), result.ok ? "ok" : "failed");
    return result.ok ? kExitOk : kExitFailed;
  } catch (const UsageError& e) {
    err << "sheafctl: " << e.what() << "\n";
    report["message"] = e.what();
    emit(out, std::move(report), "usage-error");
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "sheafctl: " << e.what() << "\n";
    report["message"] = e.what();
    emit(out, std::move(report), "failed");
    return kExitFailed;
  }
}

}  // namespace cellsheaf::cli
