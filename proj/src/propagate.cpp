#include "mlb/propagate.hpp"

#include <cmath>
#include <cstdio>

#include "mlb/checkpoint.hpp"

namespace mlb {

namespace {

std::string numbered_path(const std::string& base, long index) {
  char suffix[32];
  std::snprintf(suffix, sizeof suffix, ".%06ld", index);
  return base + suffix;
}

// Output times live on the absolute grid k * dt_out regardless of where a
// run starts, so a resumed trajectory hits bit-identical targets (and hence
// takes bit-identical steps) as the uninterrupted one.  Returns the first
// grid index strictly ahead of t0.
long first_window(double t0, double dt_out) {
  const long k = std::llround(t0 / dt_out);
  return k * dt_out <= t0 + 1e-12 ? k + 1 : k;
}

void write_snapshot(const PropagationSettings& cfg, const MLState& st,
                    const StepController& ctl, const std::string& path) {
  Checkpoint chk;
  chk.state = st;
  chk.config_json = cfg.config_echo;
  chk.dt_next = ctl.dt;
  chk.err_old = ctl.err_old;
  write_checkpoint(path, chk);
}

}  // namespace

Trajectory propagate_real(const System& sys, const MLState& initial,
                          const PropagationSettings& cfg,
                          const StepController* resume) {
  Trajectory out;
  MLState state = initial;
  MLState work = initial;  // RHS scratch with the right shapes
  VectorXcd y = flatten(state);
  double t = state.time;
  const double t0 = t;

  StepController ctl;
  ctl.dt = cfg.dt_initial;
  if (resume) ctl = *resume;

  auto rhs = [&](double rt, const VectorXcd& ry) {
    unflatten(ry, work);
    work.time = rt;
    return flatten(full_rhs(sys, work, TimeMode::real, cfg.regularization));
  };

  auto emit = [&](long index) {
    const ObservableRecord rec = make_record(sys, state, cfg.regularization);
    if (!std::isfinite(rec.norm) || !std::isfinite(rec.energy)) {
      if (!cfg.checkpoint_path.empty())
        write_snapshot(cfg, state, ctl, cfg.checkpoint_path + ".abort");
      throw NumericalError("non-finite observables at t = " +
                           std::to_string(state.time) +
                           (cfg.checkpoint_path.empty()
                                ? ""
                                : "; state saved to " + cfg.checkpoint_path +
                                      ".abort"));
    }
    out.records.push_back(rec);
    if (!cfg.checkpoint_path.empty() && cfg.checkpoint_stride > 0 &&
        index % cfg.checkpoint_stride == 0)
      write_snapshot(cfg, state, ctl,
                     numbered_path(cfg.checkpoint_path, index));
  };

  long index = first_window(t0, cfg.dt_out) - 1;
  emit(index);
  while (t < cfg.t_final - 1e-12) {
    ++index;
    const double target = std::min(index * cfg.dt_out, cfg.t_final);
    while (t < target - 1e-12)
      step_adaptive(rhs, t, y, ctl, target - t, cfg.step);
    t = target;
    unflatten(y, state);
    state.time = t;

    const double residual = orthonormality_residual(state);
    if (residual > cfg.repair_threshold) {
      orthonormalize(state);
      y = flatten(state);
      out.repairs.push_back({t, residual});
    }
    emit(index);
  }

  out.final_state = state;
  out.controller = ctl;
  if (!cfg.checkpoint_path.empty())
    write_snapshot(cfg, state, ctl, cfg.checkpoint_path);
  return out;
}

Trajectory relax_imaginary(const System& sys, const MLState& initial,
                           const PropagationSettings& cfg) {
  Trajectory out;
  MLState state = initial;
  MLState work = initial;
  VectorXcd y = flatten(state);
  double t = state.time;
  const double t0 = t;

  StepController ctl;
  ctl.dt = cfg.dt_initial;

  auto rhs = [&](double rt, const VectorXcd& ry) {
    unflatten(ry, work);
    work.time = rt;
    return flatten(
        full_rhs(sys, work, TimeMode::imaginary, cfg.regularization));
  };

  auto emit = [&](long index) {
    out.records.push_back(make_record(sys, state, cfg.regularization));
    if (!cfg.checkpoint_path.empty() && cfg.checkpoint_stride > 0 &&
        index % cfg.checkpoint_stride == 0)
      write_snapshot(cfg, state, ctl,
                     numbered_path(cfg.checkpoint_path, index));
  };

  long index = first_window(t0, cfg.dt_out) - 1;
  emit(index);
  double last_energy = out.records.back().energy;
  int quiet_windows = 0;
  while (t < cfg.t_final - 1e-12) {
    ++index;
    const double target = std::min(index * cfg.dt_out, cfg.t_final);
    while (t < target - 1e-12) {
      step_adaptive(rhs, t, y, ctl, target - t, cfg.step);
      // restore the manifold after every accepted step
      unflatten(y, state);
      normalize(state);
      orthonormalize(state);
      y = flatten(state);
    }
    t = target;
    state.time = t;
    emit(index);

    const double e = out.records.back().energy;
    quiet_windows = std::abs(e - last_energy) < cfg.convergence_tol
                        ? quiet_windows + 1
                        : 0;
    last_energy = e;
    if (quiet_windows >= 2) {
      out.converged = true;
      break;
    }
  }

  out.final_state = state;
  out.controller = ctl;
  if (!cfg.checkpoint_path.empty())
    write_snapshot(cfg, state, ctl, cfg.checkpoint_path);
  if (!out.converged)
    throw NumericalError(
        "relaxation did not converge within the tau budget (last energy " +
        std::to_string(last_energy) +
        (cfg.checkpoint_path.empty() ? ")"
                                     : "); state saved to " +
                                           cfg.checkpoint_path));
  return out;
}

}  // namespace mlb
