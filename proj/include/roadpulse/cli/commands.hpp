#pragma once

#include "roadpulse/cli/config.hpp"

#include <string>
#include <vector>

namespace roadpulse::cli {

inline const std::vector<std::string> kCommands = {
    "build-network", "build-zones", "ingest", "reliability",
    "metrics",       "assign",      "estimate", "report"};

// Runs one pipeline command. Writes the command's artifacts plus a run
// manifest into the output directory. Throws Error on any failure; the
// caller maps errors to exit codes.
void run_command(const std::string& command, const RunConfig& cfg);

} // namespace roadpulse::cli
