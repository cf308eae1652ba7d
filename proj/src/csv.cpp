#include "qhj/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qhj {

namespace {

bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::stringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    if (first == std::string::npos) return false;
    const char* b = field.data() + first;
    const char* e = field.data() + last + 1;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e) return false;
    out.push_back(v);
  }
  return true;
}

}  // namespace

std::vector<CsvRow> read_numeric_csv(const std::filesystem::path& path, std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::vector<CsvRow> rows;
  std::string line;
  std::size_t number = 0;
  bool seen_content = false;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    const bool ok = parse_row(line, values);
    if (!ok && !seen_content) {
      seen_content = true;  // header
      continue;
    }
    seen_content = true;
    const std::string where = path.string() + ":" + std::to_string(number) + ": ";
    if (!ok) throw std::runtime_error(where + "non-numeric field");
    if (values.size() != columns) {
      throw std::runtime_error(where + "expected " + std::to_string(columns) + " columns, found " +
                               std::to_string(values.size()));
    }
    rows.push_back({number, values});
  }
  if (rows.empty()) throw std::runtime_error("'" + path.string() + "' has no data rows");
  return rows;
}

WaveFunction read_wavefunction_csv(const std::filesystem::path& path) {
  const auto rows = read_numeric_csv(path, 3);
  if (rows.size() < 3) throw std::runtime_error("'" + path.string() + "' needs at least 3 rows");
  const Grid1D grid = build_grid(rows.front().values[0], rows.back().values[0], rows.size());
  ComplexField psi(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::abs(rows[i].values[0] - grid.x(i)) > 1e-9 * grid.dx()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(rows[i].line) + ": x is not on a uniform grid");
    }
    psi[i] = {rows[i].values[1], rows[i].values[2]};
  }
  return WaveFunction(grid, std::move(psi));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::span<const std::string> header)
    : out_(path), path_(path), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot write '" + path.string() + "'");
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_) throw std::logic_error("CSV row width mismatch for " + path_.string());
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
  out_ << '\n';
  if (!out_) throw std::runtime_error("write failed for '" + path_.string() + "'");
}

}  // namespace qhj
