#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tsdantzig/classify.hpp"
#include "tsdantzig/process_sim.hpp"

namespace tsdantzig {

/// Header plus raw string cells. Lines starting with '#' and blank lines are skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// Daily returns: first column a date (kept verbatim), the rest one column per asset.
struct ReturnsData {
  std::vector<std::string> dates;
  std::vector<std::string> assets;
  SampleMatrix returns;
};

ReturnsData parse_returns_csv(std::istream& in);
ReturnsData read_returns_csv(const std::filesystem::path& path);

/// First column a class label (P/S), the rest features.
struct LabeledData {
  std::vector<Label> labels;
  std::vector<std::string> features;
  SampleMatrix data;
};

LabeledData parse_labeled_csv(std::istream& in);
LabeledData read_labeled_csv(const std::filesystem::path& path);

/// All-numeric table (header required); used for samples and matrices.
SampleMatrix parse_numeric_csv(std::istream& in);
SampleMatrix read_numeric_csv(const std::filesystem::path& path);

double parse_double(const std::string& cell);

}  // namespace tsdantzig
