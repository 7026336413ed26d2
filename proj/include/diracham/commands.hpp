#pragma once

#include "diracham/config.hpp"
#include "diracham/report.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace diracham {

struct CommandResult {
  Report report;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  std::string table;  // evolve only: plain-text diagnostics
};

// Each runner assumes a validated config.
CommandResult run_verify_algebra(const RunConfig& cfg);
CommandResult run_bergmann(const RunConfig& cfg);
CommandResult run_evolve(const RunConfig& cfg);
CommandResult run_quantize(const RunConfig& cfg);
CommandResult run_command(const RunConfig& cfg);

// {schema_version, command, config, passed, failures, first_failure, checks, details}
nlohmann::ordered_json report_document(const RunConfig& cfg, const CommandResult& result);
// One line per suite plus the first failure, if any.
std::string summary_text(const RunConfig& cfg, const CommandResult& result);

enum ExitCode : int { kExitPass = 0, kExitFailure = 1, kExitConfig = 2, kExitAbort = 3 };

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace diracham
