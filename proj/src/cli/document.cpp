#include "cellsheaf/cli/document.hpp"

#include <set>

namespace cellsheaf::cli {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SchemaError((path.empty() ? std::string("/") : path) + ": " + what);
}

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, "missing field '" + key + "'");
  return *it;
}

const Json* optional_field(const Json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

long long as_int(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (v == static_cast<double>(static_cast<long long>(v))) return static_cast<long long>(v);
  }
  fail(path, "expected an integer");
}

double as_double(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

void check_header(const Json& j, const std::string& format) {
  if (!j.is_object()) fail("", "expected an object");
  const std::string got = as_string(field(j, "format", ""), "/format");
  if (got != format) fail("/format", "expected \"" + format + "\", got \"" + got + "\"");
  const long long version = as_int(field(j, "version", ""), "/version");
  if (version != kFormatVersion) fail("/version", "unsupported version " + std::to_string(version));
}

Matrix<double> matrix_from_json(const Json& j, const std::string& path) {
  const long long rows = as_int(field(j, "rows", path), path + "/rows");
  const long long cols = as_int(field(j, "cols", path), path + "/cols");
  if (rows < 0 || cols < 0) fail(path, "negative matrix dimension");
  const Json& data = as_array(field(j, "data", path), path + "/data");
  if (static_cast<long long>(data.size()) != rows * cols)
    fail(path + "/data", "has " + std::to_string(data.size()) + " entries, expected " + std::to_string(rows * cols));
  Matrix<double> m(rows, cols);
  for (long long i = 0; i < rows; ++i)
    for (long long c = 0; c < cols; ++c) {
      const auto k = static_cast<std::size_t>(i * cols + c);
      m(i, c) = as_double(data[k], path + "/data/" + std::to_string(k));
    }
  return m;
}

Vector<double> vector_from_json(const Json& j, const std::string& path) {
  as_array(j, path);
  Vector<double> v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = as_double(j[i], path + "/" + std::to_string(i));
  return v;
}

CellComplex complex_from_json(const Json& j, const std::string& path) {
  std::vector<Cell> cells;
  const Json& cj = as_array(field(j, "cells", path), path + "/cells");
  for (std::size_t i = 0; i < cj.size(); ++i) {
    const std::string p = path + "/cells/" + std::to_string(i);
    cells.push_back({as_string(field(cj[i], "id", p), p + "/id"), static_cast<int>(as_int(field(cj[i], "dim", p), p + "/dim"))});
  }
  std::vector<IncidenceSpec> incs;
  const Json& ij = as_array(field(j, "incidences", path), path + "/incidences");
  for (std::size_t i = 0; i < ij.size(); ++i) {
    const std::string p = path + "/incidences/" + std::to_string(i);
    incs.push_back({as_string(field(ij[i], "face", p), p + "/face"), as_string(field(ij[i], "coface", p), p + "/coface"),
                    static_cast<int>(as_int(field(ij[i], "sign", p), p + "/sign"))});
  }
  try {
    return CellComplex(std::move(cells), incs);
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

CellularSheaf<double> sheaf_from_json(const CellComplex& x, const Json& j, const std::string& path) {
  std::map<CellId, Index> stalks;
  const Json& sj = field(j, "stalks", path);
  if (!sj.is_object()) fail(path + "/stalks", "expected an object");
  for (const auto& [id, dim] : sj.items()) {
    const long long d = as_int(dim, path + "/stalks/" + id);
    if (d < 0) fail(path + "/stalks/" + id, "negative stalk dimension");
    stalks[id] = static_cast<Index>(d);
  }
  std::map<std::pair<CellId, CellId>, Matrix<double>> maps;
  const Json& rj = as_array(field(j, "restrictions", path), path + "/restrictions");
  for (std::size_t i = 0; i < rj.size(); ++i) {
    const std::string p = path + "/restrictions/" + std::to_string(i);
    std::pair<CellId, CellId> key{as_string(field(rj[i], "face", p), p + "/face"),
                                  as_string(field(rj[i], "coface", p), p + "/coface")};
    if (maps.count(key)) fail(p, "duplicate restriction (" + key.first + ", " + key.second + ")");
    maps[key] = matrix_from_json(field(rj[i], "matrix", p), p + "/matrix");
  }
  std::map<CellId, Matrix<double>> products;
  if (const Json* pj = optional_field(j, "inner_products")) {
    as_array(*pj, path + "/inner_products");
    for (std::size_t i = 0; i < pj->size(); ++i) {
      const std::string p = path + "/inner_products/" + std::to_string(i);
      const std::string id = as_string(field((*pj)[i], "cell", p), p + "/cell");
      if (products.count(id)) fail(p, "duplicate inner product for '" + id + "'");
      products[id] = matrix_from_json(field((*pj)[i], "matrix", p), p + "/matrix");
    }
  }
  for (const auto& [id, d] : stalks)
    if (!x.find(id)) fail(path + "/stalks/" + id, "unknown cell '" + id + "'");
  try {
    return make_sheaf<double>(x, stalks, maps, products);
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

Cochain<double> cochain_from_json(const CellularSheaf<double>& f, const Json& j, const std::string& path) {
  const long long degree = as_int(field(j, "degree", path), path + "/degree");
  std::map<CellId, Vector<double>> blocks;
  const Json& bj = as_array(field(j, "blocks", path), path + "/blocks");
  for (std::size_t i = 0; i < bj.size(); ++i) {
    const std::string p = path + "/blocks/" + std::to_string(i);
    const std::string id = as_string(field(bj[i], "cell", p), p + "/cell");
    if (!f.base().find(id)) fail(p + "/cell", "unknown cell '" + id + "'");
    if (blocks.count(id)) fail(p, "duplicate block for '" + id + "'");
    blocks[id] = vector_from_json(field(bj[i], "values", p), p + "/values");
  }
  try {
    return make_cochain(f, static_cast<int>(degree), blocks);
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("parse error: ") + e.what());
  }
}

}  // namespace

bool operator==(const Document& a, const Document& b) {
  if (!(a.complex == b.complex) || a.sheaf.has_value() != b.sheaf.has_value()) return false;
  if (a.sheaf) {
    const auto& f = *a.sheaf;
    const auto& g = *b.sheaf;
    if (f.stalk_dims() != g.stalk_dims()) return false;
    for (std::size_t i = 0; i < f.restrictions().size(); ++i)
      if (f.restriction(i) != g.restriction(i)) return false;
    for (CellIndex c = 0; c < f.base().size(); ++c)
      if (f.inner_product(c) != g.inner_product(c)) return false;
  }
  if (a.cochains.size() != b.cochains.size()) return false;
  for (const auto& [name, x] : a.cochains) {
    auto it = b.cochains.find(name);
    if (it == b.cochains.end() || it->second.degree != x.degree || it->second.values != x.values) return false;
  }
  return true;
}

Json matrix_to_json(const Matrix<double>& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index c = 0; c < m.cols(); ++c) data.push_back(m(i, c));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Json vector_to_json(const Vector<double>& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json complex_to_json(const CellComplex& x) {
  Json cells = Json::array();
  for (const auto& c : x.cells()) cells.push_back(Json{{"id", c.id}, {"dim", c.dim}});
  Json incs = Json::array();
  for (const auto& inc : x.incidences())
    incs.push_back(Json{{"face", x.id(inc.face)}, {"coface", x.id(inc.coface)}, {"sign", inc.sign}});
  return Json{{"cells", std::move(cells)}, {"incidences", std::move(incs)}};
}

Json sheaf_to_json(const CellularSheaf<double>& f) {
  const auto& x = f.base();
  Json stalks = Json::object();
  for (CellIndex c = 0; c < x.size(); ++c) stalks[x.id(c)] = f.stalk_dim(c);
  Json maps = Json::array();
  for (std::size_t i = 0; i < x.incidences().size(); ++i) {
    const auto& inc = x.incidences()[i];
    maps.push_back(Json{{"face", x.id(inc.face)}, {"coface", x.id(inc.coface)}, {"matrix", matrix_to_json(f.restriction(i))}});
  }
  Json out{{"stalks", std::move(stalks)}, {"restrictions", std::move(maps)}};
  if (!f.has_identity_inner_products()) {
    Json products = Json::array();
    for (CellIndex c = 0; c < x.size(); ++c)
      products.push_back(Json{{"cell", x.id(c)}, {"matrix", matrix_to_json(f.inner_product(c))}});
    out["inner_products"] = std::move(products);
  }
  return out;
}

Json cochain_to_json(const CellularSheaf<double>& f, const Cochain<double>& x) {
  Json blocks = Json::array();
  for (CellIndex c : f.base().cells_of_dim(x.degree))
    blocks.push_back(Json{{"cell", f.base().id(c)}, {"values", vector_to_json(cochain_block(f, x, c))}});
  return Json{{"degree", x.degree}, {"blocks", std::move(blocks)}};
}

Document document_from_json(const Json& j) {
  check_header(j, "cellular-sheaf");
  Document d;
  d.complex = complex_from_json(field(j, "complex", ""), "/complex");
  if (const Json* sj = optional_field(j, "sheaf")) d.sheaf = sheaf_from_json(d.complex, *sj, "/sheaf");
  if (const Json* cj = optional_field(j, "cochains")) {
    if (!cj->is_object()) fail("/cochains", "expected an object");
    if (!d.sheaf && !cj->empty()) fail("/cochains", "cochains need a sheaf section");
    for (const auto& [name, value] : cj->items())
      d.cochains[name] = cochain_from_json(*d.sheaf, value, "/cochains/" + name);
  }
  return d;
}

Document parse_document(const std::string& text) { return document_from_json(parse_json(text)); }

Json document_to_json(const Document& d) {
  Json out{{"format", "cellular-sheaf"}, {"version", kFormatVersion}, {"complex", complex_to_json(d.complex)}};
  if (d.sheaf) out["sheaf"] = sheaf_to_json(*d.sheaf);
  if (!d.cochains.empty()) {
    Json cochains = Json::object();
    for (const auto& [name, x] : d.cochains) cochains[name] = cochain_to_json(*d.sheaf, x);
    out["cochains"] = std::move(cochains);
  }
  return out;
}

std::string serialize_document(const Document& d) { return write_json(document_to_json(d)); }

ApproximationDocument parse_approximation(const std::string& text) {
  const Json j = parse_json(text);
  check_header(j, "constant-sheaf-approximation");
  ApproximationDocument d;
  d.spec.graph = complex_from_json(field(j, "complex", ""), "/complex");
  const long long dim_v = as_int(field(j, "dim_v", ""), "/dim_v");
  if (dim_v < 0) fail("/dim_v", "must be nonnegative");
  d.spec.dim_v = static_cast<Index>(dim_v);
  if (const Json* sj = optional_field(j, "subspaces")) {
    if (!sj->is_object()) fail("/subspaces", "expected an object");
    for (const auto& [id, m] : sj->items()) d.spec.subspaces[id] = matrix_from_json(m, "/subspaces/" + id);
  }
  if (const Json* wj = optional_field(j, "weights")) {
    if (!wj->is_object()) fail("/weights", "expected an object");
    for (const auto& [id, w] : wj->items()) d.weights[id] = as_double(w, "/weights/" + id);
  }
  return d;
}

Json approximation_to_json(const ApproximationDocument& d) {
  Json subspaces = Json::object();
  for (const auto& [id, m] : d.spec.subspaces) subspaces[id] = matrix_to_json(m);
  Json out{{"format", "constant-sheaf-approximation"},
           {"version", kFormatVersion},
           {"complex", complex_to_json(d.spec.graph)},
           {"dim_v", d.spec.dim_v},
           {"subspaces", std::move(subspaces)}};
  if (!d.weights.empty()) {
    Json weights = Json::object();
    for (const auto& [id, w] : d.weights) weights[id] = w;
    out["weights"] = std::move(weights);
  }
  return out;
}

}  // namespace cellsheaf::cli
