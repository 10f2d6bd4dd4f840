#pragma once

#include <string>

#include "mlb/config.hpp"

namespace mlb {

// Orchestration used by the command-line driver and the integration tests.
// Every command writes run_meta.json (command + fully defaulted config) to
// the output directory; failures leave error.json plus a nonzero exit code
// (2 config, 3 numerical, 4 resource caps).

int run_bands(const RunConfig& cfg, const std::string& out_dir);
int run_relax(const RunConfig& cfg, const std::string& out_dir);
int run_propagate(const RunConfig& cfg, const std::string& out_dir,
                  const std::string& resume);
int run_observe(const RunConfig& cfg, const std::string& out_dir,
                const std::string& resume);
int run_cost(const RunConfig& cfg, const std::string& out_dir);

// Top-level entry: reads the config file, dispatches, maps exceptions to
// exit codes and error.json.
int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_dir, const std::string& resume);

}  // namespace mlb
