#include "qhj/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace qhj {

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

Check make_check(std::string scenario, int criterion, std::string name, std::string equation, double measured,
                 double tolerance, Check::Bound bound) {
  Check c;
  c.scenario = std::move(scenario);
  c.criterion = criterion;
  c.name = std::move(name);
  c.equation = std::move(equation);
  c.measured = measured;
  c.tolerance = tolerance;
  c.bound = bound;
  c.pass = bound == Check::Bound::AtMost ? measured <= tolerance : measured >= tolerance;
  return c;
}

bool VerificationReport::passed() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

nlohmann::ordered_json to_json(const VerificationReport& report, bool include_timing) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["scenario"] = report.scenario;
  doc["status"] = report.passed() ? "pass" : "fail";
  doc["parameters"] = report.parameters;
  auto& checks = doc["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json j;
    j["scenario"] = c.scenario;
    if (c.criterion > 0) j["criterion"] = c.criterion;
    j["name"] = c.name;
    j["equation"] = c.equation;
    if (c.timing) {
      j["measured"] = "timing." + c.name;
    } else {
      j["measured"] = number(c.measured);
    }
    j["bound"] = c.bound == Check::Bound::AtMost ? "<=" : ">=";
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    if (!c.note.empty()) j["note"] = c.note;
    checks.push_back(std::move(j));
  }
  if (!report.summary.empty()) doc["summary"] = report.summary;
  if (include_timing) {
    nlohmann::ordered_json timing;
    timing["timestamp"] = utc_timestamp();
    for (const auto& [k, v] : report.runtimes) timing[k] = v;
    for (const auto& c : report.checks) {
      if (c.timing) timing[c.name] = c.measured;
    }
    doc["timing"] = std::move(timing);
  }
  return doc;
}

std::string deterministic_dump(const VerificationReport& report) { return to_json(report, false).dump(); }

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("error while writing " + path.string());
}

}  // namespace qhj
