#include "chebcov/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "chebcov/errors.hpp"

namespace chebcov {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return fields;
}

bool parse_number(std::string_view field, double& out) {
  if (field.empty()) return false;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && std::isfinite(out);
}

}  // namespace

CsvTable read_csv(std::istream& in, const std::string& source_name) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool saw_first = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);

    if (!saw_first) {
      saw_first = true;
      table.cols = fields.size();
      std::vector<double> parsed(fields.size());
      bool numeric = true;
      for (std::size_t c = 0; c < fields.size(); ++c) {
        if (!parse_number(fields[c], parsed[c])) {
          numeric = false;
          break;
        }
      }
      if (numeric) {
        table.values.insert(table.values.end(), parsed.begin(), parsed.end());
        ++table.rows;
      } else {
        for (auto f : fields) table.header.emplace_back(f);
      }
      continue;
    }

    if (fields.size() != table.cols) {
      throw InvalidInput(source_name + ": row " + std::to_string(line_no) + " has " +
                         std::to_string(fields.size()) + " fields, expected " +
                         std::to_string(table.cols));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      if (!parse_number(fields[c], v)) {
        throw InvalidInput(source_name + ": row " + std::to_string(line_no) + ", column " +
                           std::to_string(c + 1) + ": '" + std::string(fields[c]) +
                           "' is not a finite number");
      }
      table.values.push_back(v);
    }
    ++table.rows;
  }

  if (!saw_first) throw InvalidInput(source_name + ": empty CSV");
  if (table.rows == 0) throw InvalidInput(source_name + ": header but no data rows");
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open CSV file '" + path + "'");
  return read_csv(in, path);
}

}  // namespace chebcov
