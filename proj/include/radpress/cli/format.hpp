#pragma once

// Locale-independent output: numbers with 15 significant digits, JSON with a
// fixed key order, CSV with a fixed header.

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace radpress::cli {

using Json = nlohmann::ordered_json;

// Shortest of fixed/scientific with 15 significant digits; "null" for
// non-finite values.
std::string format_number(double value);

// Pretty-printed JSON (two-space indent, trailing newline) whose numbers go
// through format_number.
std::string to_json_text(const Json &value);

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

std::string to_csv_text(const Table &table);

// Two-column key,value table from the scalar leaves of a JSON object, with
// nested keys joined by '.'.
Table flatten(const Json &value);

} // namespace radpress::cli
