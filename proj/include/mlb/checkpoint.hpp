#pragma once

#include <string>

#include "mlb/state.hpp"

namespace mlb {

// Binary state snapshot.  Layout: magic "MLB1", u32 format version, u32
// block count, then named blocks (u32 name length, name bytes, u8
// element tag, u32 rank, u64 extents, raw little-endian payload).
// Element tags: 0 = f64, 1 = complex f64, 2 = raw bytes.  The state
// arrays (A, C per species, SPFs per species, time, integrator
// controller memory) round-trip bit-exactly; a JSON echo of the run
// configuration rides along for resume-time validation.
struct Checkpoint {
  MLState state;
  std::string config_json;
  double dt_next = 0.0;   // step-size suggestion at the snapshot
  double err_old = 0.0;   // controller memory (0 = fresh controller)
};

void write_checkpoint(const std::string& path, const Checkpoint& chk);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace mlb
