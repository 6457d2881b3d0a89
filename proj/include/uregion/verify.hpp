#pragma once

// The acceptance suite A1-A10 as a library call, shared by the `verify`
// subcommand and the acceptance test binary.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace uregion {

struct VerifyOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  // Negates every membership verdict used by A1, so A1 must fail.
  bool inject_fault = false;
  // Criterion ids to run; empty runs all.
  std::vector<std::string> only;
};

struct CriterionResult {
  std::string id;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  // "<=" or ">=": pass requires measured `comparison` tolerance (and the budget).
  std::string comparison;
  double budget_seconds = 0.0;  // 0 for no runtime budget
  double seconds = 0.0;         // wall time, not part of the report
  std::string detail;
};

std::vector<std::string> criterion_ids();

// Runs the selected criteria in id order; `on_done` sees each result as it completes.
// Throws std::invalid_argument for an unknown id in options.only.
std::vector<CriterionResult> run_verification(const VerifyOptions& options,
                                              const std::function<void(const CriterionResult&)>& on_done = {});

// {"seed", "all_pass", "criteria": [{id, pass, measured, tolerance, comparison, budget_seconds, detail}]}.
// Wall times are left out so identical runs produce identical reports.
nlohmann::json verification_report(const VerifyOptions& options, const std::vector<CriterionResult>& results);

}  // namespace uregion
