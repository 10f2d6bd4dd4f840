#include <CLI11.hpp>
#include <Eigen/Core>
#include <cstdlib>
#include <string>

#include "mlb/run.hpp"

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("MLB_THREADS")) {
    const int n = std::atoi(threads);
    if (n > 0) Eigen::setNbThreads(n);
  }

  CLI::App app{"ML-MCTDHB dynamics of one-dimensional bosonic mixtures"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", resume;
  auto add_common = [&](CLI::App* sub, bool with_resume) {
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required();
    sub->add_option("--out", out_dir, "output directory (default: .)");
    if (with_resume)
      sub->add_option("--resume", resume, "checkpoint file to start from");
  };

  add_common(app.add_subcommand(
                 "bands", "one-body spectrum of the (unblocked) trap"),
             false);
  add_common(app.add_subcommand(
                 "relax", "imaginary-time relaxation in the blocked trap"),
             false);
  add_common(app.add_subcommand(
                 "propagate", "real-time propagation in the unblocked trap"),
             true);
  add_common(app.add_subcommand(
                 "observe", "recompute the observable row of a checkpoint"),
             true);
  add_common(app.add_subcommand("cost", "coefficient-count report"), false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are config errors
  }

  const std::string command = app.get_subcommands().front()->get_name();
  return mlb::run_command(command, config_path, out_dir, resume);
}
