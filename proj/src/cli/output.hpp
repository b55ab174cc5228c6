#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bcspec/algebra.hpp"

namespace bcspec::cli {

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr const char* kToolVersion = "1.0.0";

using Json = nlohmann::ordered_json;

/// %.17g for every double, null for non-finite ones, keys in insertion
/// order, two-space indentation, trailing newline.
std::string dump_json(const Json& j);

/// %.17g, or "nan" / "inf" / "-inf".
std::string format_double(double v);

/// RFC 4180: quote fields containing comma, quote, CR or LF; double quotes.
std::string csv_field(const std::string& s);
std::string csv_row(const std::vector<std::string>& fields);

Json matrix_json(const Mat2& m);
Json params_json(const BoundaryParams& p);

} // namespace bcspec::cli
