#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qhj/parallel.hpp"
#include "qhj/report.hpp"
#include "qhj/tolerances.hpp"

namespace qhj {

struct CriterionInfo {
  int id;
  const char* scenario;
  const char* title;
};

/// The eleven acceptance criteria in id order.
const std::vector<CriterionInfo>& acceptance_criteria();

struct AcceptanceOptions {
  ToleranceTable tolerances;
  std::uint64_t seed = 20240601;
  Execution exec = Execution::Parallel;
};

/// Runs the checks of a single criterion. Criterion 11 is only meaningful
/// inside run_acceptance, which reruns the others to compare reports.
std::vector<Check> run_criterion(int id, const AcceptanceOptions& options);

/// Runs the selected criteria (all when `ids` is empty) and assembles one
/// report. When 11 is selected, the other selected criteria are run a second
/// time and the two reports are compared byte for byte (timing excluded).
VerificationReport run_acceptance(const AcceptanceOptions& options, std::vector<int> ids = {});

struct CriterionStatus {
  int id;
  std::string scenario;
  bool pass;
  std::size_t failed_checks;
};

std::vector<CriterionStatus> criterion_status(const VerificationReport& report);

}  // namespace qhj
