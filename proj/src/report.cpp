#include "fracbinom/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace fracbinom {

namespace {

using nlohmann::ordered_json;

std::string format_csv_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  const double v = std::get<double>(cell);
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

ordered_json cell_to_json(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  const double v = std::get<double>(cell);
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Cell cell_from_json(const ordered_json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("parse_json: unsupported cell " + j.dump());
}

}  // namespace

bool cells_equal(const Cell& a, const Cell& b) {
  if (a.index() != b.index()) return false;
  if (const auto* i = std::get_if<std::int64_t>(&a)) {
    return *i == std::get<std::int64_t>(b);
  }
  const double x = std::get<double>(a);
  const double y = std::get<double>(b);
  return (std::isnan(x) && std::isnan(y)) || x == y;
}

bool operator==(const Table& a, const Table& b) {
  if (a.columns != b.columns || a.rows.size() != b.rows.size()) return false;
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    if (a.rows[r].size() != b.rows[r].size()) return false;
    for (std::size_t c = 0; c < a.rows[r].size(); ++c) {
      if (!cells_equal(a.rows[r][c], b.rows[r][c])) return false;
    }
  }
  return true;
}

bool operator==(const Report& a, const Report& b) {
  return a.config == b.config && a.table == b.table && a.version == b.version &&
         a.runtime_ms == b.runtime_ms;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      out += format_csv_cell(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Report& report) {
  ordered_json doc = ordered_json::object();
  doc["config"] = report.config;
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.table.rows) {
    if (row.size() != report.table.columns.size()) {
      throw std::invalid_argument("to_json: row width does not match columns");
    }
    ordered_json obj = ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      obj[report.table.columns[c]] = cell_to_json(row[c]);
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  doc["meta"] = {{"version", report.version},
                 {"runtime_ms", report.runtime_ms},
                 {"columns", report.table.columns}};
  return doc.dump(2) + "\n";
}

Report parse_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw std::invalid_argument(std::string("parse_json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("config") || !doc.contains("rows") ||
      !doc.contains("meta")) {
    throw std::invalid_argument("parse_json: missing config, rows or meta");
  }
  Report report;
  report.config = doc["config"];
  const auto& meta = doc["meta"];
  report.version = meta.at("version").get<std::string>();
  report.runtime_ms = meta.at("runtime_ms").get<double>();
  report.table.columns = meta.at("columns").get<std::vector<std::string>>();
  for (const auto& row : doc["rows"]) {
    if (!row.is_object()) throw std::invalid_argument("parse_json: row is not an object");
    std::vector<Cell> cells;
    for (const auto& name : report.table.columns) {
      if (!row.contains(name)) {
        throw std::invalid_argument("parse_json: row lacks column " + name);
      }
      cells.push_back(cell_from_json(row[name]));
    }
    if (row.size() != cells.size()) {
      throw std::invalid_argument("parse_json: row has extra columns");
    }
    report.table.rows.push_back(std::move(cells));
  }
  return report;
}

}  // namespace fracbinom
