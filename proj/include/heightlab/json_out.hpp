#pragma once

#include <string>

#include <json.hpp>

namespace heightlab {

/// Deterministic serialization: object keys sorted, floating numbers with 17
/// significant digits, non-finite numbers as the strings "inf", "-inf", "nan".
std::string canonical_dump(const nlohmann::json& j, int indent = 2);

} // namespace heightlab
