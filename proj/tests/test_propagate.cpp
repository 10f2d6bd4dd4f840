#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "mlb/checkpoint.hpp"
#include "mlb/propagate.hpp"
#include "support/testkit.hpp"

using namespace mlb;
namespace fs = std::filesystem;

namespace {

System prop_system() {
  MixtureSpec mix;
  mix.species = {{"A", 2, 2, 3, 0.1}, {"B", 1, 2, 2, 0.0}};
  mix.g_inter = MatrixXd::Zero(2, 2);
  mix.g_inter(0, 1) = mix.g_inter(1, 0) = 0.07;
  mix.trap.harmonic = 0.5;
  return make_system(OneBodySpace::whole(harmonic_dvr(60)), mix);
}

std::string tmp_path(const std::string& name) {
  return (fs::temp_directory_path() / name).string();
}

}  // namespace

TEST_SUITE("propagate") {
  TEST_CASE("real time conserves norm and energy and walks the output grid") {
    const System sys = prop_system();
    const MLState st = init_hartree(sys);
    PropagationSettings cfg;
    cfg.t_final = 2.0;
    cfg.dt_out = 0.1;
    const Trajectory tr = propagate_real(sys, st, cfg);

    REQUIRE(tr.records.size() == 21);
    const double e0 = tr.records.front().energy;
    for (std::size_t k = 0; k < tr.records.size(); ++k) {
      const auto& rec = tr.records[k];
      CHECK(rec.t == double(k) * 0.1);
      CHECK(std::abs(rec.norm - 1.0) <= 1e-8);
      CHECK(std::abs(rec.energy - e0) <= 1e-8 * std::abs(e0));
      CHECK(rec.ortho_residual <= 1e-8);
    }
    // gauge drift may graze the default threshold; every repair is audited
    for (const auto& rep : tr.repairs) CHECK(rep.residual > 1e-8);
    CHECK(tr.final_state.time == 2.0);
  }

  TEST_CASE("trajectories are bit-for-bit deterministic") {
    const System sys = prop_system();
    const MLState st = init_hartree(sys);
    PropagationSettings cfg;
    cfg.t_final = 0.5;
    const Trajectory a = propagate_real(sys, st, cfg);
    const Trajectory b = propagate_real(sys, st, cfg);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
      CHECK(a.records[k].energy == b.records[k].energy);
      CHECK(a.records[k].norm == b.records[k].norm);
      CHECK(a.records[k].species[0].p_left == b.records[k].species[0].p_left);
    }
    CHECK((flatten(a.final_state) - flatten(b.final_state))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }

  TEST_CASE("an interrupted run resumes bit-identically") {
    const System sys = prop_system();
    const MLState st = init_hartree(sys);

    PropagationSettings whole;
    whole.t_final = 1.0;
    whole.dt_out = 0.1;
    const Trajectory full = propagate_real(sys, st, whole);

    PropagationSettings half = whole;
    half.t_final = 0.5;
    half.checkpoint_path = tmp_path("mlb_resume_test.mlb");
    half.config_echo = "{\"phase\": \"propagate\"}";
    propagate_real(sys, st, half);

    const Checkpoint chk = read_checkpoint(half.checkpoint_path);
    CHECK(chk.state.time == 0.5);
    CHECK(chk.config_json == half.config_echo);
    StepController ctl{chk.dt_next, chk.err_old};
    const Trajectory rest = propagate_real(sys, chk.state, whole, &ctl);

    // overlap row at t = 0.5 plus everything after must match exactly
    REQUIRE(full.records.size() == 11);
    REQUIRE(rest.records.size() == 6);
    for (std::size_t k = 0; k < rest.records.size(); ++k) {
      const auto& a = full.records[5 + k];
      const auto& b = rest.records[k];
      CHECK(a.t == b.t);
      CHECK(a.energy == b.energy);
      CHECK(a.norm == b.norm);
      CHECK(a.species[0].p_left == b.species[0].p_left);
      CHECK(a.species[1].p_left == b.species[1].p_left);
    }
    CHECK((flatten(full.final_state) - flatten(rest.final_state))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }

  TEST_CASE("records land on the absolute output grid after any start time") {
    const System sys = prop_system();
    MLState st = init_hartree(sys);
    st.time = 0.25;
    PropagationSettings cfg;
    cfg.t_final = 0.65;
    cfg.dt_out = 0.1;
    const Trajectory tr = propagate_real(sys, st, cfg);
    REQUIRE(tr.records.size() == 6);
    CHECK(tr.records[0].t == 0.25);
    CHECK(tr.records[1].t == 3 * 0.1);
    CHECK(tr.records[2].t == 4 * 0.1);
    CHECK(tr.records[3].t == 5 * 0.1);
    CHECK(tr.records[4].t == 6 * 0.1);
    CHECK(tr.records[5].t == 0.65);
  }

  TEST_CASE("periodic and final checkpoints are written") {
    const System sys = prop_system();
    const MLState st = init_hartree(sys);
    PropagationSettings cfg;
    cfg.t_final = 0.5;
    cfg.dt_out = 0.1;
    cfg.checkpoint_path = tmp_path("mlb_stride_test.mlb");
    cfg.checkpoint_stride = 2;
    cfg.config_echo = "{}";
    propagate_real(sys, st, cfg);
    CHECK(fs::exists(cfg.checkpoint_path));
    CHECK(fs::exists(cfg.checkpoint_path + ".000000"));
    CHECK(fs::exists(cfg.checkpoint_path + ".000002"));
    CHECK(fs::exists(cfg.checkpoint_path + ".000004"));
    CHECK(!fs::exists(cfg.checkpoint_path + ".000001"));
    const Checkpoint last = read_checkpoint(cfg.checkpoint_path);
    CHECK(last.state.time == 0.5);
  }

  TEST_CASE("orthonormality repairs are audited") {
    const System sys = prop_system();
    const MLState st = init_hartree(sys);
    PropagationSettings cfg;
    cfg.t_final = 0.5;
    cfg.repair_threshold = 1e-15;  // provoke repairs from rounding drift
    const Trajectory tr = propagate_real(sys, st, cfg);
    CHECK(!tr.repairs.empty());
    for (const auto& rep : tr.repairs) {
      CHECK(rep.residual > 1e-15);
      CHECK(rep.time > 0.0);
    }
    // repaired states still report healthy orthonormality
    CHECK(orthonormality_residual(tr.final_state) <= 1e-12);
  }

  TEST_CASE("non-finite observables abort with a diagnostic checkpoint") {
    const System sys = prop_system();
    MLState st = init_hartree(sys);
    st.top(0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    PropagationSettings cfg;
    cfg.checkpoint_path = tmp_path("mlb_abort_test.mlb");
    cfg.config_echo = "{}";
    fs::remove(cfg.checkpoint_path + ".abort");
    CHECK_THROWS_AS(propagate_real(sys, st, cfg), NumericalError);
    CHECK(fs::exists(cfg.checkpoint_path + ".abort"));
    const Checkpoint chk = read_checkpoint(cfg.checkpoint_path + ".abort");
    CHECK(std::isnan(chk.state.top(0).real()));
  }

  TEST_CASE("relaxation descends to the non-interacting ground state") {
    MixtureSpec mix;
    mix.species = {{"A", 2, 2, 3, 0.0}};
    mix.g_inter = MatrixXd::Zero(1, 1);
    mix.trap.harmonic = 0.5;
    const System sys = make_system(OneBodySpace::whole(harmonic_dvr(40)), mix);
    const MLState st = testkit::random_state(sys);

    PropagationSettings cfg;
    cfg.t_final = 500.0;
    cfg.dt_out = 0.5;
    const Trajectory tr = relax_imaginary(sys, st, cfg);

    CHECK(tr.converged);
    for (std::size_t k = 0; k + 1 < tr.records.size(); ++k)
      CHECK(tr.records[k + 1].energy <= tr.records[k].energy + 1e-10);
    CHECK(std::abs(tr.records.back().energy - 1.0) <= 1e-8);  // 2 x omega/2
    CHECK(std::abs(tr.records.back().norm - 1.0) <= 1e-12);
    CHECK(orthonormality_residual(tr.final_state) <= 1e-9);
  }

  TEST_CASE("relaxation that cannot converge throws and checkpoints") {
    const System sys = prop_system();
    const MLState st = testkit::random_state(sys);
    PropagationSettings cfg;
    cfg.t_final = 0.3;
    cfg.dt_out = 0.1;
    cfg.convergence_tol = 0.0;  // unreachable window criterion
    cfg.checkpoint_path = tmp_path("mlb_relax_fail.mlb");
    cfg.config_echo = "{\"phase\": \"relax\"}";
    CHECK_THROWS_AS(relax_imaginary(sys, st, cfg), NumericalError);
    const Checkpoint chk = read_checkpoint(cfg.checkpoint_path);
    CHECK(chk.state.time == 0.3);
    CHECK(chk.config_json == cfg.config_echo);
  }
}
