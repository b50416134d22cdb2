#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "skoda/config.hpp"

namespace skoda {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitHypothesis = 2;
inline constexpr int kReportSchema = 1;

const std::vector<std::string>& command_names();

/// Default tolerance for every named check; config overrides must use these names.
const std::map<std::string, double>& default_tolerances();

struct CommandOutcome {
  int exit_code = kExitFail;
  nlohmann::ordered_json report;
};

/// Runs one command. Never throws for run-time failures; they become error
/// reports with exit code 1 (or 2 for hypothesis failures).
CommandOutcome run_command(const std::string& command, const RunConfig& cfg);

/// Report for a failure that happened before a command could run.
CommandOutcome error_outcome(const std::string& command, const std::string& type, const std::string& message);

std::string render_report(const nlohmann::ordered_json& report);

}  // namespace skoda
