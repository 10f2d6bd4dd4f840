#pragma once

#include "mlb/eom.hpp"
#include "mlb/integrate.hpp"
#include "mlb/observables.hpp"

namespace mlb {

struct PropagationSettings {
  double t_final = 1.0;     // real time: end time; imaginary: tau budget
  double dt_out = 0.1;      // record / convergence-check stride
  double dt_initial = 1e-3;
  StepSettings step;        // tolerances and controller bounds
  double regularization = 1e-10;
  double repair_threshold = 1e-8;  // real-time orthonormality repair
  double convergence_tol = 1e-10;  // relaxation energy window
  std::string checkpoint_path;     // empty: no checkpoint files
  int checkpoint_stride = 0;       // periodic checkpoints every k records
  std::string config_echo;         // JSON copied into checkpoint files
};

// Gram-Schmidt repairs are variational no-ops only at machine precision,
// so each one is kept auditable in the trajectory.
struct RepairEvent {
  double time = 0.0;
  double residual = 0.0;
};

struct Trajectory {
  std::vector<ObservableRecord> records;
  std::vector<RepairEvent> repairs;
  MLState final_state;
  StepController controller;  // resume memory at the final record
  bool converged = false;     // meaningful for relaxation
};

// Real-time propagation with records every dt_out.  The layers are never
// renormalized; orthonormality is monitored at record times and repaired
// (with an audit entry) only above repair_threshold.  Non-finite norm or
// energy aborts with a diagnostic checkpoint.
Trajectory propagate_real(const System& sys, const MLState& initial,
                          const PropagationSettings& cfg,
                          const StepController* resume = nullptr);

// Imaginary-time relaxation: every accepted step renormalizes A and
// re-orthonormalizes the C and Phi rows.  Converged when the energy moves
// less than convergence_tol across two consecutive output windows; failure
// to converge within the tau budget throws (after checkpointing the last
// state when a path is configured).
Trajectory relax_imaginary(const System& sys, const MLState& initial,
                           const PropagationSettings& cfg);

}  // namespace mlb
