#pragma once

#include <string>

#include <json.hpp>

namespace langest {

/// Parses the subset of TOML used by experiment configs into JSON: [tables],
/// [[arrays of tables]], dotted keys, basic and literal strings, integers,
/// floats, booleans, arrays and inline tables. Throws DomainError with the
/// offending line number on malformed input.
nlohmann::json parse_toml(const std::string& text);

}  // namespace langest
