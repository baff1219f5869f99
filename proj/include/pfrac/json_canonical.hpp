#pragma once

#include <string>

#include "json.hpp"

namespace pfrac {

using Json = nlohmann::ordered_json;

/// Serializes with insertion-ordered keys and every floating-point number
/// printed with 17 significant digits, so equal documents give equal bytes
/// and doubles survive a round trip exactly. indent < 0 yields one line.
std::string dump_canonical(const Json& doc, int indent = 2);

/// Reads a double that may have been stored as an integer literal.
double json_number(const Json& value);

}  // namespace pfrac
