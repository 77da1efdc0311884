#pragma once

#include <string>

#include <json.hpp>

#include "npsl/lure.hpp"
#include "npsl/slemma.hpp"

namespace npsl {

using Json = nlohmann::ordered_json;

/// Numbers pass through; ±∞ and NaN become the strings "inf", "-inf", "nan".
Json number_to_json(double v);
double number_from_json(const Json& j, const std::string& what);

Json matrix_to_json(const Matrix& m);
Json vector_to_json(const Vector& v);
Matrix matrix_from_json(const Json& j, const std::string& what);
Vector vector_from_json(const Json& j, const std::string& what);

/// Parse errors are reported as ErrorCode::parse with the source name and line/column.
Json parse_json(const std::string& text, const std::string& source);
Json load_json_file(const std::string& path);

/// {"A": [[..]], "B": [[..]] or [..] (column), "C": [[..]] or [..] (row),
///  "zeta": scalar or list (default 0), "kappa": scalar or list}
LureSystem system_from_json(const Json& j);
Json system_to_json(const LureSystem& sys);

/// {"p": 1 | 2 | "inf" | real, "conic": bool, "weight": [[..]] (optional),
///  "forms": [P0, P1, ..], "rho": [..]}
FormFamily family_from_json(const Json& j);
Json family_to_json(const FormFamily& f);

/// {"A": [[..]]} or a bare nested list.
Matrix matrix_file_from_json(const Json& j);

Json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);

}  // namespace npsl
