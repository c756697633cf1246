#pragma once

#include <string>

#include "ohs/jobspec.hpp"

namespace ohs {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kInconclusive = 3 };

struct RunOutcome {
  std::string report; // compact JSON, schema "1"
  std::string pretty; // the same report as indented JSON followed by text tables
  int exit_code = kPass;
  double seconds = 0; // wall time; kept out of the report so it stays deterministic
};

// Runs the command of a parsed job. Errors raised while building objects
// (bad tables, budgets) come back as exit code 2 with an "error" report.
RunOutcome run_job(const JobSpec &job);

// Parse and run; syntax and semantic errors also produce an "error" report.
RunOutcome run_document(const std::string &document, std::optional<std::uint64_t> seed_override = {});

} // namespace ohs
