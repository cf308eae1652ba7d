#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "qhj/wavefunction.hpp"

namespace qhj {

struct CsvRow {
  std::size_t line = 0;  // 1-based line number in the file
  std::vector<double> values;
};

/// Reads a numeric CSV with exactly `columns` fields per row. Blank lines and
/// lines starting with '#' are skipped; a non-numeric first row is taken as a
/// header. Throws std::runtime_error with file:line on malformed rows.
std::vector<CsvRow> read_numeric_csv(const std::filesystem::path& path, std::size_t columns);

/// (x, re, im) rows on a uniform grid.
WaveFunction read_wavefunction_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal form, so CSV and JSON agree bit for bit.
std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::span<const std::string> header);

  void row(std::span<const double> values);
  void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t columns_;
};

}  // namespace qhj
