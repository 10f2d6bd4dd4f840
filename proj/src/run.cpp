#include "mlb/run.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "mlb/checkpoint.hpp"
#include "mlb/oracle.hpp"

namespace mlb {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("write failed for " + path.string());
}

std::string phase_echo(const RunConfig& cfg, const std::string& phase) {
  json j{{"phase", phase}, {"config", json::parse(cfg.echo)}};
  return j.dump(2);
}

void write_meta(const RunConfig& cfg, const std::string& out_dir,
                const std::string& command, json extra = json::object()) {
  fs::create_directories(out_dir);
  json meta{{"command", command}, {"config", json::parse(cfg.echo)}};
  meta.update(extra);
  write_file(fs::path(out_dir) / "run_meta.json", meta.dump(2) + "\n");
}

void write_trajectory(const System& sys, const Trajectory& traj,
                      const fs::path& csv_path, const fs::path& repairs_path) {
  std::string text = csv_header(sys) + "\n";
  for (const auto& rec : traj.records) text += csv_row(rec) + "\n";
  write_file(csv_path, text);

  std::string repairs = "time,residual\n";
  for (const auto& r : traj.repairs) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", r.time, r.residual);
    repairs += buf;
  }
  write_file(repairs_path, repairs);
}

MLState restore_state(const std::string& resume, const System& sys,
                      StepController& ctl, bool& continuation) {
  const Checkpoint chk = read_checkpoint(resume);
  if (chk.state.top.size() != sys.top_size)
    throw ConfigError("checkpoint does not match the configured system");
  for (int s = 0; s < sys.count(); ++s) {
    if (chk.state.coeff[s].rows() != sys.top_dims[s] ||
        chk.state.coeff[s].cols() != sys.basis[s].size() ||
        chk.state.spf[s].rows() != sys.mix.species[s].orbitals ||
        chk.state.spf[s].cols() != sys.space.dim())
      throw ConfigError("checkpoint does not match the configured system");
  }
  continuation = chk.state.time > 0.0;
  if (continuation) {
    ctl.dt = chk.dt_next;
    ctl.err_old = chk.err_old;
  }
  return chk.state;
}

}  // namespace

int run_bands(const RunConfig& cfg, const std::string& out_dir) {
  const Grid grid = build_grid(cfg.grid);
  const TrapSpec trap = cfg.mix.trap.without_block();
  const int count = std::min(20, cfg.grid.points);
  const auto [values, vectors] =
      lowest_eigenpairs(one_body_hamiltonian(grid, trap), count);

  write_meta(cfg, out_dir, "bands", {{"barrier_top", barrier_top(trap)}});
  std::string text = "index,energy,gap_to_prev\n";
  for (int i = 0; i < values.size(); ++i) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", i, values(i),
                  i > 0 ? values(i) - values(i - 1) : 0.0);
    text += buf;
  }
  write_file(fs::path(out_dir) / "bands.csv", text);
  return 0;
}

int run_relax(const RunConfig& cfg, const std::string& out_dir) {
  write_meta(cfg, out_dir, "relax");
  const System sys = build_system(cfg);  // trap includes the blocking step

  PropagationSettings settings = cfg.relaxation;
  settings.checkpoint_path = (fs::path(out_dir) / "relax.mlb").string();
  settings.config_echo = phase_echo(cfg, "relax");

  const MLState initial = init_hartree(sys);
  const Trajectory traj = relax_imaginary(sys, initial, settings);
  write_trajectory(sys, traj, fs::path(out_dir) / "relax.csv",
                   fs::path(out_dir) / "relax_repairs.csv");

  // the relaxed state is the t = 0 initial condition for real time
  Checkpoint ground;
  ground.state = traj.final_state;
  ground.state.time = 0.0;
  ground.config_json = phase_echo(cfg, "propagate");
  ground.dt_next = cfg.propagation.dt_initial;
  ground.err_old = 1e-4;
  write_checkpoint((fs::path(out_dir) / "ground.mlb").string(), ground);
  return 0;
}

int run_propagate(const RunConfig& cfg, const std::string& out_dir,
                  const std::string& resume) {
  write_meta(cfg, out_dir, "propagate");
  RunConfig open = cfg;
  open.mix.trap = cfg.mix.trap.without_block();  // instantaneous unblocking
  const System sys = build_system(open);

  PropagationSettings settings = cfg.propagation;
  settings.checkpoint_path = (fs::path(out_dir) / "state.mlb").string();
  settings.config_echo = phase_echo(cfg, "propagate");

  StepController ctl;
  ctl.dt = settings.dt_initial;
  bool continuation = false;
  MLState state = resume.empty()
                      ? init_hartree(sys)
                      : restore_state(resume, sys, ctl, continuation);

  const Trajectory traj =
      propagate_real(sys, state, settings, continuation ? &ctl : nullptr);
  write_trajectory(sys, traj, fs::path(out_dir) / "trajectory.csv",
                   fs::path(out_dir) / "repairs.csv");
  return 0;
}

int run_observe(const RunConfig& cfg, const std::string& out_dir,
                const std::string& resume) {
  if (resume.empty())
    throw ConfigError("observe requires --resume <checkpoint>");
  const Checkpoint chk = read_checkpoint(resume);

  // the embedded phase tells which trap the state was evolving under
  bool blocked = false;
  const json embedded = json::parse(chk.config_json, nullptr, false);
  if (!embedded.is_discarded() && embedded.contains("phase"))
    blocked = embedded.at("phase") == "relax";

  RunConfig open = cfg;
  if (!blocked) open.mix.trap = cfg.mix.trap.without_block();
  const System sys = build_system(open);

  StepController ctl;
  bool continuation = false;
  const MLState state = restore_state(resume, sys, ctl, continuation);

  write_meta(cfg, out_dir, "observe", {{"checkpoint", resume}});
  const ObservableRecord rec =
      make_record(sys, state, cfg.propagation.regularization);
  write_file(fs::path(out_dir) / "observe.csv",
             csv_header(sys) + "\n" + csv_row(rec) + "\n");
  return 0;
}

int run_cost(const RunConfig& cfg, const std::string& out_dir) {
  const CostReport rep = cost_estimate(cfg.mix, cfg.grid.points);
  write_meta(cfg, out_dir, "cost");
  write_file(fs::path(out_dir) / "cost.json",
             cost_report_json(rep) + "\n");
  return 0;
}

int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_dir, const std::string& resume) {
  auto emit_error = [&](const std::string& kind, const std::string& message,
                        int code) {
    json err{{"error", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << err.dump(2) << std::endl;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!ec) {
      std::ofstream out(fs::path(out_dir) / "error.json", std::ios::binary);
      if (out) out << err.dump(2) << "\n";
    }
    return code;
  };

  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + config_path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    const RunConfig cfg = parse_config(text);

    if (command == "bands") return run_bands(cfg, out_dir);
    if (command == "relax") return run_relax(cfg, out_dir);
    if (command == "propagate") return run_propagate(cfg, out_dir, resume);
    if (command == "observe") return run_observe(cfg, out_dir, resume);
    if (command == "cost") return run_cost(cfg, out_dir);
    throw ConfigError("unknown command " + command);
  } catch (const ConfigError& e) {
    return emit_error("config", e.what(), 2);
  } catch (const ResourceError& e) {
    return emit_error("resource", e.what(), 4);
  } catch (const NumericalError& e) {
    return emit_error("numerical", e.what(), 3);
  } catch (const std::exception& e) {
    return emit_error("numerical", e.what(), 3);
  }
}

}  // namespace mlb
