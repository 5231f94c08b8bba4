#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "tsdantzig_cli/config.hpp"

namespace tsdantzig::cli {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

enum class OutputFormat { csv, json };

OutputFormat parse_format(const std::string& name);

/// Six significant digits; nan and inf spelled out.
std::string format_number(double value);

std::string render_csv(const Table& table, const Provenance& provenance);
std::string render_json(const Table& table, const Provenance& provenance);

/// Renders the table and writes it to `path` ("-" or empty = `fallback`).
/// An empty table is an error and nothing is written.
void emit_table(const Table& table, OutputFormat format, const Provenance& provenance, const std::string& path,
                std::ostream& fallback);

}  // namespace tsdantzig::cli
