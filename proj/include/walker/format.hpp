#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace walker {

/// Shortest-free, locale-independent rendering with 17 significant digits.
std::string format_double(double v);

/// Serializes `j` with every floating-point number printed via format_double,
/// so identical documents always produce identical bytes.
std::string dump_json(const nlohmann::json& j, int indent = 2);

}  // namespace walker
