#pragma once

#include <cstdint>
#include <string>

#include "mlb/propagate.hpp"
#include "mlb/system.hpp"

namespace mlb {

struct GridSpec {
  std::string kind = "harmonic";  // harmonic | sine
  int points = 250;
  double omega = 1.0;        // harmonic DVR frequency
  double half_extent = 10.0;  // sine DVR box half length
};

// A full run description: grid, mixture (with the relaxation blocking step
// in trap.block_height), and separate numerical settings for the two
// propagation modes.  `echo` is the fully defaulted document written to
// the run metadata, so every effective parameter is auditable.
struct RunConfig {
  GridSpec grid;
  MixtureSpec mix;
  PropagationSettings propagation;  // real time
  PropagationSettings relaxation;   // imaginary time
  std::int64_t seed = 0;            // reserved; no randomized paths yet
  std::string echo;
};

// Parses and validates a JSON document.  Unknown keys and malformed values
// are rejected with path-precise messages (ConfigError).
RunConfig parse_config(const std::string& text);

Grid build_grid(const GridSpec& spec);
System build_system(const RunConfig& cfg);

// Coefficient bookkeeping: multi-layer versus single-layer (MCTDHB)
// expansions over the same grid, exact integer arithmetic.
struct CostReport {
  std::int64_t ml_top = 0, ml_species = 0, ml_orbitals = 0, ml_total = 0;
  std::int64_t mctdhb_coeff = 0, mctdhb_orbitals = 0, mctdhb_total = 0;
  double ratio = 0.0;  // mctdhb_total / ml_total
};

CostReport cost_estimate(const MixtureSpec& mix, std::int64_t grid_points);

std::string cost_report_json(const CostReport& report);

}  // namespace mlb
