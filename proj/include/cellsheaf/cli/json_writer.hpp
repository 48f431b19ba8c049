#pragma once

#include <string>

#include <json.hpp>

namespace cellsheaf::cli {

using Json = nlohmann::ordered_json;

/// %.17g, so every double survives a round trip. Non-finite values have no
/// JSON spelling and are written as null.
std::string format_number(double value);

/// Indented JSON with keys in insertion order and numbers via format_number.
std::string write_json(const Json& value, int indent = 2);

}  // namespace cellsheaf::cli
