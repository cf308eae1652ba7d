#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace qhj {

inline constexpr int kReportSchemaVersion = 1;

struct Check {
  enum class Bound { AtMost, AtLeast };

  std::string scenario;
  int criterion = 0;  // acceptance criterion number, 0 for subcommand-only checks
  std::string name;
  std::string equation;  // the relation exercised, written out
  double measured = 0.0;
  double tolerance = 0.0;
  Bound bound = Bound::AtMost;
  bool pass = false;
  // Wall-clock checks keep their measured value in the timing block so that
  // the rest of the report is reproducible.
  bool timing = false;
  std::string note;
};

/// Builds a check and evaluates it. NaN never passes.
Check make_check(std::string scenario, int criterion, std::string name, std::string equation, double measured,
                 double tolerance, Check::Bound bound = Check::Bound::AtMost);

struct VerificationReport {
  std::string scenario;
  std::vector<Check> checks;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  std::map<std::string, double> runtimes;  // seconds, goes to the timing block

  bool passed() const;
  void add(Check c) { checks.push_back(std::move(c)); }
};

/// Report as JSON. The "timing" member holds the timestamp and runtimes and is
/// the only part that may differ between identical runs.
nlohmann::ordered_json to_json(const VerificationReport& report, bool include_timing = true);

/// Compact form for determinism comparisons: everything except "timing".
std::string deterministic_dump(const VerificationReport& report);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

}  // namespace qhj
