#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chebcov {

/// Numeric CSV contents: comma separators, decimal points, an optional single
/// header row (detected when any first-row field is non-numeric).
struct CsvTable {
  std::vector<std::string> header;  // empty when the file has no header row
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::vector<double> values;  // row-major
};

/// Throws InvalidInput with the file line and column on ragged or
/// non-numeric input. Fully blank lines are skipped.
CsvTable read_csv(std::istream& in, const std::string& source_name);
CsvTable read_csv_file(const std::string& path);

}  // namespace chebcov
