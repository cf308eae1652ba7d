#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "qhj/acceptance.hpp"

// Runs every acceptance criterion and prints one line per criterion.
//
// The exit status is 0 when the set of failing criteria equals the set given
// with --expect-fail, so a known shortfall stays visible without turning the
// whole test run red.
int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::vector<int> expect_fail;
  std::vector<int> only;
  std::uint64_t seed = 20240601;
  app.add_option("--expect-fail", expect_fail, "criteria that are known to fail");
  app.add_option("--only", only, "run only these criteria");
  app.add_option("--seed", seed, "ensemble seed");
  CLI11_PARSE(app, argc, argv);

  qhj::AcceptanceOptions options;
  options.seed = seed;
  const qhj::VerificationReport report = qhj::run_acceptance(options, only);

  const auto status = qhj::criterion_status(report);
  std::set<int> failed;
  for (const auto& s : status) {
    std::string title;
    for (const auto& info : qhj::acceptance_criteria()) {
      if (info.id == s.id) title = info.title;
    }
    std::cout << (s.pass ? "PASS" : "FAIL") << "  criterion " << std::setw(2) << s.id << "  " << std::left
              << std::setw(26) << s.scenario << std::right << title << '\n';
    if (!s.pass) failed.insert(s.id);
  }
  for (const auto& c : report.checks) {
    if (c.pass) continue;
    std::cout << "      failed check " << c.name << ": measured " << std::setprecision(6) << c.measured
              << (c.bound == qhj::Check::Bound::AtMost ? " > " : " < ") << c.tolerance << '\n';
  }

  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  if (failed == expected) {
    if (!expected.empty()) std::cout << "failing criteria match the expected set\n";
    return EXIT_SUCCESS;
  }
  std::cout << "failing criteria differ from the expected set\n";
  return EXIT_FAILURE;
}
