#include "tsdantzig/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>

#include "tsdantzig/error.hpp"

namespace tsdantzig {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (quoted) throw InvalidArgument("csv: unterminated quote");
  cells.push_back(trim(cell));
  return cells;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return in;
}

DenseMatrix numeric_block(const CsvTable& table, std::size_t first_col) {
  const std::size_t p = table.header.size() - first_col;
  DenseMatrix m(table.rows.size(), p);
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    for (std::size_t j = 0; j < p; ++j) {
      try {
        m(i, j) = parse_double(table.rows[i][first_col + j]);
      } catch (const InvalidArgument& e) {
        throw InvalidArgument("csv: row " + std::to_string(i + 1) + ", column '" + table.header[first_col + j] +
                              "': " + e.what());
      }
    }
  return m;
}

}  // namespace

double parse_double(const std::string& cell) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || begin == end) throw InvalidArgument("not a number: '" + cell + "'");
  return value;
}

CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto cells = split_line(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size())
      throw InvalidArgument("csv: line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                            " cells, header has " + std::to_string(table.header.size()));
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw InvalidArgument("csv: missing header row");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_csv(in);
}

ReturnsData parse_returns_csv(std::istream& in) {
  const CsvTable table = parse_csv(in);
  if (table.header.size() < 2) throw InvalidArgument("returns csv: need a date column and at least one asset");
  ReturnsData out;
  out.assets.assign(table.header.begin() + 1, table.header.end());
  for (const auto& row : table.rows) out.dates.push_back(row[0]);
  out.returns.data = numeric_block(table, 1);
  return out;
}

ReturnsData read_returns_csv(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_returns_csv(in);
}

LabeledData parse_labeled_csv(std::istream& in) {
  const CsvTable table = parse_csv(in);
  if (table.header.size() < 2) throw InvalidArgument("labeled csv: need a label column and at least one feature");
  LabeledData out;
  out.features.assign(table.header.begin() + 1, table.header.end());
  for (const auto& row : table.rows) out.labels.push_back(parse_label(row[0]));
  out.data.data = numeric_block(table, 1);
  return out;
}

LabeledData read_labeled_csv(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_labeled_csv(in);
}

SampleMatrix parse_numeric_csv(std::istream& in) {
  const CsvTable table = parse_csv(in);
  return SampleMatrix{numeric_block(table, 0)};
}

SampleMatrix read_numeric_csv(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_numeric_csv(in);
}

}  // namespace tsdantzig
