// Acceptance gate: one self-contained check per advertised capability,
// printed as a single PASS/FAIL line with the measured numbers and the
// tolerance pinned next to the check.  Criteria 1-8 and 10 run at desk
// scale; the long-running qualitative reproduction (criterion 9) lives in
// mlb_acceptance_slow and is excluded from the default ctest suite.
//
//   ./mlb_acceptance          run everything
//   ./mlb_acceptance 3 5      run a subset by criterion number

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "mlb/config.hpp"
#include "mlb/densities.hpp"
#include "mlb/grid.hpp"
#include "mlb/indexing.hpp"
#include "mlb/meanfield.hpp"
#include "mlb/observables.hpp"
#include "mlb/oracle.hpp"
#include "mlb/propagate.hpp"
#include "support/testkit.hpp"

using namespace mlb;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[768];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// The tunneling scenario mixture: species A, B, C with the documented
// couplings, C's cross coupling scaled by xc_scale (0 decoupled, -0.5
// attractive).  Trap defaults to the open double well; relaxation adds
// the blocking step separately.
MixtureSpec scenario_mixture(int particles, int orbitals, int states,
                             double xc_scale) {
  const double g_ab = 0.0017320508075688774;
  MixtureSpec mix;
  mix.species = {{"A", particles, orbitals, states, 0.04},
                 {"B", particles, orbitals, states, 0.03},
                 {"C", particles, orbitals, states, 0.0}};
  mix.g_inter = MatrixXd::Zero(3, 3);
  mix.g_inter(0, 1) = mix.g_inter(1, 0) = g_ab;
  mix.g_inter(0, 2) = mix.g_inter(2, 0) = xc_scale * g_ab;
  mix.g_inter(1, 2) = mix.g_inter(2, 1) = xc_scale * g_ab;
  mix.trap = TrapSpec{0.5, 3.0, 0.2, 0.0};
  return mix;
}

// Imaginary-time ground state of a (usually blocked) system, rewound to
// t = 0 so real-time propagation starts on the absolute output grid.
MLState relax_ground(const System& sys, double convergence_tol = 1e-9) {
  PropagationSettings cfg;
  cfg.t_final = 500.0;
  cfg.dt_out = 0.5;
  cfg.convergence_tol = convergence_tol;
  Trajectory relax = relax_imaginary(sys, init_hartree(sys), cfg);
  MLState ground = relax.final_state;
  ground.time = 0.0;
  return ground;
}

// Real-time propagation sampled every dt_out, visiting the full state at
// each sample (the trajectory API only records observables); the step
// controller is carried across windows so the step sequence matches one
// uninterrupted run.
template <class Visit>
void walk_states(const System& sys, MLState st, double t_final, double dt_out,
                 const StepSettings& step, Visit&& visit) {
  PropagationSettings cfg;
  cfg.dt_out = dt_out;
  cfg.step = step;
  const int windows = int(std::llround(t_final / dt_out));
  visit(st);
  StepController ctl;
  for (int k = 1; k <= windows; ++k) {
    cfg.t_final = k * dt_out;
    Trajectory leg = propagate_real(sys, st, cfg, k == 1 ? nullptr : &ctl);
    st = leg.final_state;
    ctl = leg.controller;
    visit(st);
  }
}

// NaN-aware worst-case accumulator: both-NaN entries agree by convention
// (undefined observables), a single NaN is an infinite disagreement.
void track(double& worst, double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return;
  if (std::isnan(a) != std::isnan(b)) {
    worst = std::numeric_limits<double>::infinity();
    return;
  }
  worst = std::max(worst, std::abs(a - b));
}

double record_distance(const ObservableRecord& x, const ObservableRecord& y) {
  double worst = 0.0;
  track(worst, x.t, y.t);
  track(worst, x.norm, y.norm);
  track(worst, x.energy, y.energy);
  track(worst, x.ortho_residual, y.ortho_residual);
  for (std::size_t s = 0; s < x.species.size(); ++s) {
    track(worst, x.species[s].p_left, y.species[s].p_left);
    track(worst, x.species[s].p_right, y.species[s].p_right);
    for (int k = 0; k < 3; ++k) {
      track(worst, x.species[s].nat_rho[k], y.species[s].nat_rho[k]);
      track(worst, x.species[s].nat_eta[k], y.species[s].nat_eta[k]);
    }
  }
  for (std::size_t p = 0; p < x.pairs.size(); ++p) {
    track(worst, x.pairs[p].p_ll, y.pairs[p].p_ll);
    track(worst, x.pairs[p].p_rr, y.pairs[p].p_rr);
    track(worst, x.pairs[p].f_ll, y.pairs[p].f_ll);
    track(worst, x.pairs[p].f_rr, y.pairs[p].f_rr);
    track(worst, x.pairs[p].f, y.pairs[p].f);
  }
  return worst;
}

// ---------------------------------------------------------------------
// 1. One-body spectrum of the split harmonic trap: lowest doublet
//    splitting 0.23 +- 0.01, band gap 1.63 +- 0.02, exactly three
//    doublets below the barrier top.
Result criterion1() {
  const Grid grid = harmonic_dvr(250);
  const TrapSpec trap{0.5, 3.0, 0.2, 0.0};
  const auto [e, vecs] = lowest_eigenpairs(one_body_hamiltonian(grid, trap), 12);
  const double splitting = e(1) - e(0);
  const double gap = e(2) - e(1);
  const double top = barrier_top(trap);
  int below = 0;
  for (Eigen::Index i = 0; i < e.size(); ++i) below += e(i) < top ? 1 : 0;
  bool doublets = true;
  for (int b = 0; b < 3; ++b)
    doublets = doublets && (e(2 * b + 1) - e(2 * b) < e(2 * b + 2) - e(2 * b + 1));
  const bool pass = std::abs(splitting - 0.23) <= 0.01 &&
                    std::abs(gap - 1.63) <= 0.02 && below == 6 && doublets;
  return {pass, fmt("doublet splitting %.4f (0.23+-0.01), band gap %.4f "
                    "(1.63+-0.02), %d levels below barrier top %.3f "
                    "(expected 6 in doublets)",
                    splitting, gap, below, top)};
}

// ---------------------------------------------------------------------
// 2. Rabi revival: a non-interacting species relaxed into the blocked
//    left well returns to P_left >= 0.99 at t = 27 +- 0.5.
Result criterion2() {
  const OneBodySpace space = OneBodySpace::whole(harmonic_dvr(250));
  MixtureSpec mix;
  mix.species = {{"A", 6, 3, 3, 0.0}};
  mix.g_inter = MatrixXd::Zero(1, 1);
  mix.trap = TrapSpec{0.5, 3.0, 0.2, 30.0};

  const MLState ground = relax_ground(make_system(space, mix));
  MixtureSpec open = mix;
  open.trap = mix.trap.without_block();
  const System sys = make_system(space, open);

  PropagationSettings cfg;
  cfg.t_final = 28.0;
  cfg.dt_out = 0.1;
  const Trajectory traj = propagate_real(sys, ground, cfg);

  double best_p = 0.0, best_t = 0.0, start_p = traj.records.front().species[0].p_left;
  for (const ObservableRecord& rec : traj.records)
    if (std::abs(rec.t - 27.0) <= 0.5 && rec.species[0].p_left > best_p) {
      best_p = rec.species[0].p_left;
      best_t = rec.t;
    }
  return {best_p >= 0.99,
          fmt("P_left starts at %.5f and returns to %.5f at t = %.1f "
              "(needs >= 0.99 within 27+-0.5)",
              start_p, best_p, best_t)};
}

// ---------------------------------------------------------------------
// 3. Full-CI oracle equivalence: S=2, N=(2,2), k=4 one-body modes,
//    saturated layers (m=4, M=10) against the dense reference propagator;
//    every recorded observable agrees to 1e-6 over t in [0,5].
Result criterion3() {
  const Grid grid = harmonic_dvr(250);
  const TrapSpec trap{0.5, 3.0, 0.2, 0.0};
  MixtureSpec mix;
  mix.species = {{"A", 2, 4, 10, 0.10}, {"B", 2, 4, 10, 0.15}};
  mix.g_inter = MatrixXd::Zero(2, 2);
  mix.g_inter(0, 1) = mix.g_inter(1, 0) = 0.05;
  mix.trap = trap;

  const OneBodySpace space = fullci_space(grid, trap, 4);
  const FullCIBasis fc = make_fullci_basis(space, mix);
  const SparseXcd h = build_fullci_hamiltonian(mix, fc);

  // left-tilted preparation: ground state with a mild blocking step,
  // then evolution under the open Hamiltonian
  MixtureSpec tilted = mix;
  tilted.trap.block_height = 0.75;
  const auto [e_prep, psi0] =
      ground_state_exact(build_fullci_hamiltonian(tilted, fc));

  const System sys = make_system(space, mix);
  PropagationSettings cfg;
  cfg.t_final = 5.0;
  cfg.dt_out = 0.25;
  cfg.step.atol = cfg.step.rtol = 1e-10;
  const Trajectory ml = propagate_real(sys, to_mlstate(fc, psi0, 0.0), cfg);

  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(k * 0.25);
  StepSettings tight;
  tight.atol = tight.rtol = 1e-11;
  const std::vector<VectorXcd> exact = propagate_exact(h, psi0, times, tight);

  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k)
    worst = std::max(
        worst, record_distance(ml.records[k],
                               make_record(sys, to_mlstate(fc, exact[k],
                                                           times[k]))));
  return {worst <= 1e-6,
          fmt("largest observable deviation from the dense propagator "
              "%.2e over 21 samples (<= 1e-6)",
              worst)};
}

// ---------------------------------------------------------------------
// 4. Mean-field limit: the m=M=1 three-species run against the
//    independent coupled Gross-Pitaevskii integrator, density sup-norm
//    <= 1e-8 over t in [0,5].
Result criterion4() {
  const Grid grid = harmonic_dvr(250);
  const OneBodySpace space = OneBodySpace::whole(grid);
  const MixtureSpec mix = scenario_mixture(6, 1, 1, -0.5);
  const System sys = make_system(space, mix);

  TrapSpec blocked = mix.trap;
  blocked.block_height = 30.0;
  const auto [e_b, v_b] =
      lowest_eigenpairs(one_body_hamiltonian(grid, blocked), 1);
  const VectorXcd phi0 = v_b.col(0).cast<Complex>();

  MLState st = init_hartree(sys);
  MatrixXcd orbitals(sys.count(), grid.size());
  for (int s = 0; s < sys.count(); ++s) {
    st.spf[s].row(0) = phi0.transpose();
    orbitals.row(s) = phi0.transpose();
  }

  StepSettings tight;
  tight.atol = tight.rtol = 1e-11;
  const auto gp = gp_propagate(space, mix, orbitals, 5.0, 0.25, tight);

  const MatrixXcd unit = MatrixXcd::Identity(1, 1);
  double worst = 0.0;
  std::size_t k = 0;
  walk_states(sys, st, 5.0, 0.25, tight, [&](const MLState& sample) {
    for (int s = 0; s < sys.count(); ++s) {
      const VectorXd ml_mass = position_density(space, unit, sample.spf[s]);
      const MatrixXcd gp_row = gp[k].second.row(s);
      const VectorXd gp_mass = position_density(space, unit, gp_row);
      worst = std::max(worst, (ml_mass - gp_mass).cwiseAbs().maxCoeff());
    }
    ++k;
  });
  return {worst <= 1e-8,
          fmt("density sup-norm vs the coupled-GP integrator %.2e over "
              "21 samples (<= 1e-8)",
              worst)};
}

// ---------------------------------------------------------------------
// 5. Conservation on the reduced tunneling scenario (N=(3,3,3), m=M=2,
//    attractive cross coupling): |norm-1| <= 1e-7 and relative energy
//    drift <= 1e-7 over t in [0,100] at default tolerances, in under
//    ten minutes.
Result criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  const OneBodySpace space = OneBodySpace::whole(harmonic_dvr(250));
  const MixtureSpec mix = scenario_mixture(3, 2, 2, -0.5);

  MixtureSpec blocked = mix;
  blocked.trap.block_height = 30.0;
  const MLState ground = relax_ground(make_system(space, blocked));

  PropagationSettings cfg;  // default step tolerances
  cfg.t_final = 100.0;
  cfg.dt_out = 0.5;
  const Trajectory traj = propagate_real(make_system(space, mix), ground, cfg);

  const double e0 = traj.records.front().energy;
  double worst_norm = 0.0, worst_drift = 0.0;
  for (const ObservableRecord& rec : traj.records) {
    worst_norm = std::max(worst_norm, std::abs(rec.norm - 1.0));
    worst_drift = std::max(worst_drift, std::abs(rec.energy - e0));
  }
  worst_drift /= std::abs(e0);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return {worst_norm <= 1e-7 && worst_drift <= 1e-7 && secs < 600.0,
          fmt("max |norm-1| %.2e, relative energy drift %.2e over t in "
              "[0,100] (both <= 1e-7), %.0f s (< 600)",
              worst_norm, worst_drift, secs)};
}

// ---------------------------------------------------------------------
// 6. Symmetry preservation: a parity-symmetric initial condition keeps
//    |<x>| <= 1e-8 for every species over t in [0,10].
Result criterion6() {
  const Grid grid = harmonic_dvr(250);
  const OneBodySpace space = OneBodySpace::whole(grid);
  const MixtureSpec mix = scenario_mixture(3, 2, 2, -0.5);
  const System sys = make_system(space, mix);

  double worst = 0.0;
  walk_states(sys, init_hartree(sys), 10.0, 0.5, StepSettings{},
              [&](const MLState& sample) {
                for (int s = 0; s < sys.count(); ++s) {
                  const VectorXd masses =
                      position_density(space, rho1(sys, sample, s),
                                       sample.spf[s]);
                  worst = std::max(worst, std::abs(masses.dot(grid.nodes)));
                }
              });
  return {worst <= 1e-8,
          fmt("max |<x>| over all species and t in [0,10]: %.2e (<= 1e-8)",
              worst)};
}

// ---------------------------------------------------------------------
// 7. Density-matrix property suite on a random state whose product-basis
//    dimension stays below 1e4: hermiticity, positivity, traces, partial
//    traces, and brute-force equivalence of all five constructors.

// eta1 directly from the definition: fix every top axis except s.
MatrixXcd brute_eta1(const System& sys, const MLState& st, int s) {
  const Eigen::Index ms = sys.top_dims[s];
  MatrixXcd out = MatrixXcd::Zero(ms, ms);
  std::vector<Eigen::Index> idx(sys.count());
  for (Eigen::Index f = 0; f < sys.top_size; ++f) {
    Eigen::Index rem = f;
    for (int t = 0; t < sys.count(); ++t) {
      idx[t] = rem / sys.top_strides[t];
      rem %= sys.top_strides[t];
    }
    const Eigen::Index u = idx[s];
    for (Eigen::Index v = 0; v < ms; ++v)
      out(u, v) += std::conj(st.top(f)) *
                   st.top(f + (v - u) * sys.top_strides[s]);
  }
  return out;
}

MatrixXcd brute_eta2(const System& sys, const MLState& st, int a, int b) {
  const Eigen::Index ma = sys.top_dims[a], mb = sys.top_dims[b];
  MatrixXcd out = MatrixXcd::Zero(ma * mb, ma * mb);
  std::vector<Eigen::Index> idx(sys.count());
  for (Eigen::Index f = 0; f < sys.top_size; ++f) {
    Eigen::Index rem = f;
    for (int t = 0; t < sys.count(); ++t) {
      idx[t] = rem / sys.top_strides[t];
      rem %= sys.top_strides[t];
    }
    const Eigen::Index s = idx[a], u = idx[b];
    for (Eigen::Index t = 0; t < ma; ++t)
      for (Eigen::Index v = 0; v < mb; ++v)
        out(pair_index(s, u, mb), pair_index(t, v, mb)) +=
            std::conj(st.top(f)) * st.top(f + (t - s) * sys.top_strides[a] +
                                          (v - u) * sys.top_strides[b]);
  }
  return out;
}

// Smeared creation of each SPF at every particle-number level.
std::vector<std::vector<MatrixXcd>> spf_ladders(const System& sys,
                                                const MLState& st, int s) {
  const int n = sys.mix.species[s].particles;
  const int m = sys.mix.species[s].orbitals;
  std::vector<NumberBasis> chain;
  chain.reserve(n + 1);
  for (int p = 0; p <= n; ++p) chain.emplace_back(p, sys.space.dim());
  std::vector<std::vector<MatrixXcd>> lad(n);
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < m; ++i)
      lad[c].push_back(testkit::smeared_creation(
          chain[c], chain[c + 1], st.spf[s].row(i).transpose()));
  return lad;
}

Result criterion7() {
  MixtureSpec mix;
  mix.species = {{"A", 3, 3, 4, 0.12}, {"B", 2, 3, 3, 0.08},
                 {"C", 2, 2, 3, 0.05}};
  mix.g_inter = MatrixXd::Zero(3, 3);
  mix.g_inter(0, 1) = mix.g_inter(1, 0) = 0.04;
  mix.g_inter(0, 2) = mix.g_inter(2, 0) = 0.02;
  mix.g_inter(1, 2) = mix.g_inter(2, 1) = 0.06;
  mix.trap.harmonic = 0.5;
  const Grid grid = harmonic_dvr(24);
  const System sys = make_system(
      OneBodySpace::span(grid, testkit::eigen_rows(grid, mix.trap, 5)), mix);
  const MLState st = testkit::random_state(sys);

  const FullCIBasis fc = make_fullci_basis(sys.space, mix);
  const VectorXcd psi = testkit::fullci_vector(sys, st, fc);

  double worst_herm = 0.0, worst_trace = 0.0, min_eig = 0.0;
  double worst_ptrace = 0.0, worst_brute = 0.0;
  auto properties = [&](const MatrixXcd& d, double expected_trace) {
    worst_herm = std::max(worst_herm, (d - d.adjoint()).cwiseAbs().maxCoeff());
    worst_trace = std::max(worst_trace, std::abs(d.trace() - expected_trace));
    min_eig = std::min(min_eig, natural_populations(d).minCoeff());
  };

  std::vector<std::vector<std::vector<MatrixXcd>>> lad(sys.count());
  for (int s = 0; s < sys.count(); ++s) lad[s] = spf_ladders(sys, st, s);

  for (int s = 0; s < sys.count(); ++s) {
    const int n = sys.mix.species[s].particles;
    const int m = sys.mix.species[s].orbitals;

    const MatrixXcd e1 = eta1(sys, st, s);
    properties(e1, 1.0);
    worst_brute = std::max(
        worst_brute, (e1 - brute_eta1(sys, st, s)).cwiseAbs().maxCoeff());

    const MatrixXcd r1 = rho1(sys, st, s);
    properties(r1, 1.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const MatrixXcd op = lad[s][n - 1][i] * lad[s][n - 1][j].adjoint();
        const Complex ref =
            testkit::embedded_expectation(fc, s, op, psi) / double(n);
        worst_brute = std::max(worst_brute, std::abs(r1(i, j) - ref));
      }

    const MatrixXcd r2 = rho2_same(sys, st, s);
    properties(r2, double(n) - 1.0);
    MatrixXcd traced = MatrixXcd::Zero(m, m);
    for (int j = 0; j < m; ++j)
      for (int q = 0; q < m; ++q)
        for (int k = 0; k < m; ++k)
          traced(j, q) += r2(pair_index(j, k, m), pair_index(q, k, m));
    worst_ptrace = std::max(
        worst_ptrace, (traced - (double(n) - 1.0) * r1).cwiseAbs().maxCoeff());
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int q = 0; q < m; ++q)
          for (int p = 0; p < m; ++p) {
            const MatrixXcd op = lad[s][n - 1][j] * lad[s][n - 2][k] *
                                 lad[s][n - 2][q].adjoint() *
                                 lad[s][n - 1][p].adjoint();
            const Complex ref =
                testkit::embedded_expectation(fc, s, op, psi) / double(n);
            worst_brute = std::max(
                worst_brute,
                std::abs(r2(pair_index(j, k, m), pair_index(q, p, m)) - ref));
          }
  }

  for (const auto& [a, b] : sys.pairs) {
    const Eigen::Index ma = sys.top_dims[a], mb = sys.top_dims[b];
    const MatrixXcd e2 = eta2(sys, st, a, b);
    properties(e2, 1.0);
    worst_brute = std::max(
        worst_brute, (e2 - brute_eta2(sys, st, a, b)).cwiseAbs().maxCoeff());
    MatrixXcd tr_b = MatrixXcd::Zero(ma, ma);
    MatrixXcd tr_a = MatrixXcd::Zero(mb, mb);
    for (Eigen::Index s = 0; s < ma; ++s)
      for (Eigen::Index t = 0; t < ma; ++t)
        for (Eigen::Index u = 0; u < mb; ++u) {
          tr_b(s, t) += e2(pair_index(s, u, mb), pair_index(t, u, mb));
          for (Eigen::Index v = 0; v < mb; ++v)
            if (s == t)
              tr_a(u, v) += e2(pair_index(s, u, mb), pair_index(s, v, mb));
        }
    worst_ptrace = std::max(worst_ptrace,
                            (tr_b - eta1(sys, st, a)).cwiseAbs().maxCoeff());
    worst_ptrace = std::max(worst_ptrace,
                            (tr_a - eta1(sys, st, b)).cwiseAbs().maxCoeff());

    const int na = sys.mix.species[a].particles;
    const int nb = sys.mix.species[b].particles;
    const int oa = sys.mix.species[a].orbitals;
    const int ob = sys.mix.species[b].orbitals;
    const MatrixXcd r2x = rho2_cross(sys, st, a, b);
    properties(r2x, double(nb));
    MatrixXcd traced = MatrixXcd::Zero(oa, oa);
    for (int j = 0; j < oa; ++j)
      for (int q = 0; q < oa; ++q)
        for (int k = 0; k < ob; ++k)
          traced(j, q) += r2x(pair_index(j, k, ob), pair_index(q, k, ob));
    worst_ptrace = std::max(
        worst_ptrace,
        (traced - double(nb) * rho1(sys, st, a)).cwiseAbs().maxCoeff());
    for (int j = 0; j < oa; ++j)
      for (int k = 0; k < ob; ++k)
        for (int q = 0; q < oa; ++q)
          for (int p = 0; p < ob; ++p) {
            const MatrixXcd op_a =
                lad[a][na - 1][j] * lad[a][na - 1][q].adjoint();
            const MatrixXcd op_b =
                lad[b][nb - 1][k] * lad[b][nb - 1][p].adjoint();
            const Complex ref =
                testkit::embedded_pair_expectation(fc, a, b, op_a, op_b, psi) /
                double(na);
            worst_brute = std::max(
                worst_brute,
                std::abs(r2x(pair_index(j, k, ob), pair_index(q, p, ob)) -
                         ref));
          }
  }

  const bool pass = worst_brute <= 1e-10 && worst_herm <= 1e-12 &&
                    worst_trace <= 1e-12 && min_eig >= -1e-12 &&
                    worst_ptrace <= 1e-12;
  return {pass,
          fmt("all five constructors vs brute force on a dim-%lld product "
              "space: %.1e (<= 1e-10); hermiticity %.1e, traces %.1e, "
              "partial traces %.1e (<= 1e-12), min eigenvalue %.1e (>= -1e-12)",
              (long long)fc.size, worst_brute, worst_herm, worst_trace,
              worst_ptrace, min_eig)};
}

// ---------------------------------------------------------------------
// 8. Cost bookkeeping: the m=M=4 scenario configuration propagates 146x
//    fewer coefficients than single-layer MCTDHB, in exact integers.
Result criterion8() {
  const CostReport r = cost_estimate(scenario_mixture(6, 4, 4, -0.5), 250);
  const bool pass = r.ml_total == 4072 && r.mctdhb_total == 595704 &&
                    std::llround(r.ratio) == 146;
  return {pass, fmt("%lld multi-layer vs %lld single-layer coefficients, "
                    "ratio %.2f (expected 4072 vs 595704, about 146)",
                    (long long)r.ml_total, (long long)r.mctdhb_total, r.ratio)};
}

// ---------------------------------------------------------------------
// 10. Relaxation: a saturated tiny mixture relaxes onto the dense ground
//     state to 1e-8, and a non-interacting mixture in the pure harmonic
//     trap relaxes onto sum_s N_s * 0.5 to 1e-8.
Result criterion10() {
  // saturated layers on a 6-node grid: the variational minimum is the
  // exact ground state of the discretized Hamiltonian
  const OneBodySpace space = OneBodySpace::whole(harmonic_dvr(6));
  MixtureSpec mix;
  mix.species = {{"A", 2, 6, 21, 0.3}, {"B", 1, 6, 6, 0.0}};
  mix.g_inter = MatrixXd::Zero(2, 2);
  mix.g_inter(0, 1) = mix.g_inter(1, 0) = 0.2;
  mix.trap.harmonic = 0.5;
  const System sys = make_system(space, mix);
  const MLState ground = relax_ground(sys, 1e-12);
  const double e_ml = energy(sys, ground);
  const auto [e_exact, psi] = ground_state_exact(
      build_fullci_hamiltonian(mix, make_fullci_basis(space, mix)));
  const double err_fullci = std::abs(e_ml - e_exact);

  // non-interacting mixture: energy must land on N_A/2 + N_B/2 = 2.5
  MixtureSpec free_mix;
  free_mix.species = {{"A", 2, 2, 2, 0.0}, {"B", 3, 2, 2, 0.0}};
  free_mix.g_inter = MatrixXd::Zero(2, 2);
  free_mix.trap.harmonic = 0.5;
  const System free_sys =
      make_system(OneBodySpace::whole(harmonic_dvr(60)), free_mix);
  MLState start = init_hartree(free_sys);
  const double c = std::cos(0.3), s = std::sin(0.3);
  for (int sp = 0; sp < free_sys.count(); ++sp) {
    const MatrixXcd rows = start.spf[sp];
    start.spf[sp].row(0) = c * rows.row(0) + s * rows.row(1);
    start.spf[sp].row(1) = -s * rows.row(0) + c * rows.row(1);
  }
  PropagationSettings cfg;
  cfg.t_final = 500.0;
  cfg.dt_out = 0.5;
  cfg.convergence_tol = 1e-12;
  const Trajectory relax = relax_imaginary(free_sys, start, cfg);
  const double err_free = std::abs(energy(free_sys, relax.final_state) - 2.5);

  return {err_fullci <= 1e-8 && err_free <= 1e-8,
          fmt("saturated relaxation vs dense ground state: |dE| = %.2e; "
              "non-interacting mixture vs 2.5: |dE| = %.2e (both <= 1e-8)",
              err_fullci, err_free)};
}

struct Criterion {
  const char* id;
  Result (*fn)();
};

constexpr Criterion kCriteria[] = {
    {"1", &criterion1}, {"2", &criterion2}, {"3", &criterion3},
    {"4", &criterion4}, {"5", &criterion5}, {"6", &criterion6},
    {"7", &criterion7}, {"8", &criterion8}, {"10", &criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> wanted(argv + 1, argv + argc);
  auto selected = [&](const char* id) {
    return wanted.empty() ||
           std::find(wanted.begin(), wanted.end(), id) != wanted.end();
  };

  std::printf("acceptance criteria 1-8 and 10 (criterion 9 runs in "
              "mlb_acceptance_slow)\n");
  int failures = 0, ran = 0;
  for (const Criterion& c : kCriteria) {
    if (!selected(c.id)) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.fn();
    } catch (const std::exception& e) {
      r = {false, std::string("unhandled exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("%s criterion %s: %s [%.1f s]\n", r.pass ? "PASS" : "FAIL",
                c.id, r.detail.c_str(), secs);
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  std::printf("%d of %d criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
