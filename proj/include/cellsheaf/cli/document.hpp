#pragma once

#include <map>
#include <optional>
#include <string>

#include "cellsheaf/cli/json_writer.hpp"
#include "cellsheaf/dynamics.hpp"
#include "cellsheaf/hodge.hpp"

namespace cellsheaf::cli {

inline constexpr int kFormatVersion = 1;

/// Malformed input. The message starts with the JSON pointer of the
/// offending field, or with the parser's line and column.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A "cellular-sheaf" document: a complex, optionally a sheaf on it, and
/// named cochains of that sheaf.
struct Document {
  CellComplex complex;
  std::optional<CellularSheaf<double>> sheaf;
  std::map<std::string, Cochain<double>> cochains;
};

/// Exact equality of every stored number.
bool operator==(const Document& a, const Document& b);

Document parse_document(const std::string& text);
Document document_from_json(const Json& j);
Json document_to_json(const Document& d);
std::string serialize_document(const Document& d);

Json matrix_to_json(const Matrix<double>& m);
Json complex_to_json(const CellComplex& x);
Json sheaf_to_json(const CellularSheaf<double>& f);
/// {"degree", "blocks": [{"cell", "values"}]} over every cell of the degree.
Json cochain_to_json(const CellularSheaf<double>& f, const Cochain<double>& x);
Json vector_to_json(const Vector<double>& v);

/// A "constant-sheaf-approximation" document: a graph, dim V, edge
/// subspaces as basis matrices, and optional edge weights.
struct ApproximationDocument {
  ApproximationSpec<double> spec;
  std::map<CellId, double> weights;
};

ApproximationDocument parse_approximation(const std::string& text);
Json approximation_to_json(const ApproximationDocument& d);

}  // namespace cellsheaf::cli
