#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace fracbinom {

using Cell = std::variant<std::int64_t, double>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Report {
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  Table table;
  std::string version;
  double runtime_ms = 0.0;
};

// NaN compares equal to NaN so that round trips of non-finite cells hold.
bool cells_equal(const Cell& a, const Cell& b);
bool operator==(const Table& a, const Table& b);
bool operator==(const Report& a, const Report& b);

// Header row then one line per row, LF endings, doubles as %.12g.
std::string to_csv(const Table& table);

// {"config": ..., "rows": [{column: value, ...}], "meta": {"version",
// "runtime_ms", "columns"}}. Doubles use the shortest round-trip form; inf, -inf and
// nan are written as strings.
std::string to_json(const Report& report);

// Inverse of to_json. Throws std::invalid_argument on malformed input.
Report parse_json(const std::string& text);

}  // namespace fracbinom
