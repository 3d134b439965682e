#include "radpress/cli/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string_view>

namespace radpress::cli {

namespace {

void indent(std::string &out, int depth) { out.append(static_cast<std::size_t>(2 * depth), ' '); }

void write(std::string &out, const Json &value, int depth) {
  switch (value.type()) {
  case Json::value_t::object: {
    if (value.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = value.begin(); it != value.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      indent(out, depth + 1);
      out += Json(it.key()).dump();
      out += ": ";
      write(out, it.value(), depth + 1);
    }
    out += '\n';
    indent(out, depth);
    out += '}';
    return;
  }
  case Json::value_t::array: {
    if (value.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (i > 0) out += ",\n";
      indent(out, depth + 1);
      write(out, value[i], depth + 1);
    }
    out += '\n';
    indent(out, depth);
    out += ']';
    return;
  }
  case Json::value_t::number_float:
    out += format_number(value.get<double>());
    return;
  default:
    // Strings (escaped), integers, booleans and null.
    out += value.dump();
    return;
  }
}

std::string csv_field(const std::string &text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void flatten_into(Table &table, const Json &value, const std::string &prefix) {
  if (value.is_object()) {
    for (auto it = value.begin(); it != value.end(); ++it) {
      flatten_into(table, it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
    }
    return;
  }
  if (value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i) {
      flatten_into(table, value[i], prefix + "." + std::to_string(i));
    }
    return;
  }
  if (value.is_number()) {
    table.rows.push_back({prefix, value.get<double>()});
  } else if (value.is_string()) {
    table.rows.push_back({prefix, value.get<std::string>()});
  } else {
    table.rows.push_back({prefix, value.dump()});
  }
}

} // namespace

std::string format_number(double value) {
  if (!std::isfinite(value)) return "null";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 15);
  return std::string(buf.data(), res.ptr);
}

std::string to_json_text(const Json &value) {
  std::string out;
  write(out, value, 0);
  out += '\n';
  return out;
}

std::string to_csv_text(const Table &table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_field(table.header[i]);
  }
  out += '\n';
  for (const auto &row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      if (const double *d = std::get_if<double>(&row[i])) {
        out += format_number(*d);
      } else {
        out += csv_field(std::get<std::string>(row[i]));
      }
    }
    out += '\n';
  }
  return out;
}

Table flatten(const Json &value) {
  Table table;
  table.header = {"key", "value"};
  flatten_into(table, value, "");
  return table;
}

} // namespace radpress::cli
