#pragma once

/// \file table.hpp
/// Row-oriented result tables written as CSV or JSON. Both writers render
/// reals through the same 15-significant-digit formatting, so re-parsing
/// either output yields identical doubles.

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "gpsrad/format.hpp"

namespace gpsrad {

using Cell = std::variant<std::monostate, std::int64_t, double, bool, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != header.size()) throw std::logic_error("Table: row width mismatch");
    rows.push_back(std::move(row));
  }
};

enum class OutputFormat { csv, json };

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

struct CsvCell {
  std::string operator()(std::monostate) const { return {}; }
  std::string operator()(std::int64_t v) const { return std::to_string(v); }
  std::string operator()(double v) const { return format_15g(v); }
  std::string operator()(bool v) const { return v ? "true" : "false"; }
  std::string operator()(const std::string& v) const { return csv_escape(v); }
};

struct JsonCell {
  nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
  nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
  nlohmann::ordered_json operator()(double v) const {
    const auto text = format_15g(v);
    if (text == "nan" || text == "inf" || text == "-inf") return text;
    return parse_double(text);
  }
  nlohmann::ordered_json operator()(bool v) const { return v; }
  nlohmann::ordered_json operator()(const std::string& v) const { return v; }
};

}  // namespace detail

inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    os << (i ? "," : "") << t.header[i];
  }
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << std::visit(detail::CsvCell{}, row[i]);
    }
    os << '\n';
  }
}

inline nlohmann::ordered_json to_json(const Table& t) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      obj[t.header[i]] = std::visit(detail::JsonCell{}, row[i]);
    }
    arr.push_back(std::move(obj));
  }
  return arr;
}

inline void write_table(std::ostream& os, const Table& t, OutputFormat format) {
  if (format == OutputFormat::csv) {
    write_csv(os, t);
  } else {
    os << to_json(t).dump(2) << '\n';
  }
}

}  // namespace gpsrad
