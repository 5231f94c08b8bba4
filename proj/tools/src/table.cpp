#include "tsdantzig_cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "tsdantzig/error.hpp"

namespace tsdantzig::cli {

namespace {

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  return quote_csv(std::get<std::string>(cell));
}

Json json_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  if (const auto* d = std::get_if<double>(&cell)) {
    if (!std::isfinite(*d)) return nullptr;
    // Round through the CSV text so both formats carry the same value.
    return std::stod(format_number(*d));
  }
  return std::get<std::string>(cell);
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw tsdantzig::Error("table row has the wrong number of cells");
  rows.push_back(std::move(row));
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("--format", "expected csv or json");
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  std::string out = buf;
  return out == "-0" ? "0" : out;
}

std::string render_csv(const Table& table, const Provenance& provenance) {
  std::string out = format_provenance(provenance) + "\n";
  for (std::size_t j = 0; j < table.columns.size(); ++j) out += (j ? "," : "") + quote_csv(table.columns[j]);
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + render_cell(row[j]);
    out += "\n";
  }
  return out;
}

std::string render_json(const Table& table, const Provenance& provenance) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(provenance.hash));
  Json doc;
  doc["provenance"] = {{"command", provenance.command},
                       {"seed", provenance.seed},
                       {"config_hash", hex},
                       {"config", provenance.config}};
  doc["columns"] = table.columns;
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json r = Json::array();
    for (const auto& cell : row) r.push_back(json_cell(cell));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(1) + "\n";
}

void emit_table(const Table& table, OutputFormat format, const Provenance& provenance, const std::string& path,
                std::ostream& fallback) {
  if (table.rows.empty()) throw tsdantzig::Error("empty result set; no output written");
  const std::string text = format == OutputFormat::csv ? render_csv(table, provenance) : render_json(table, provenance);
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw tsdantzig::Error("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw tsdantzig::Error("failed writing '" + path + "'");
}

}  // namespace tsdantzig::cli
