#pragma once

#include <array>
#include <string>
#include <tuple>

#include "mlb/densities.hpp"

namespace mlb {

// One CSV row worth of observables; natural populations keep the top
// three entries (zero-padded when a layer has fewer).
struct SpeciesObservables {
  double p_left = 0.0, p_right = 0.0;
  std::array<double, 3> nat_rho{}, nat_eta{};
};

struct PairObservables {
  int a = 0, b = 0;  // species indices, a <= b (a == b: same species)
  double p_ll = 0.0, p_rr = 0.0;
  double f_ll = 0.0, f_rr = 0.0, f = 0.0;
};

struct ObservableRecord {
  double t = 0.0;
  std::vector<SpeciesObservables> species;
  std::vector<PairObservables> pairs;
  double norm = 0.0, energy = 0.0, ortho_residual = 0.0;
};

// Node-resolved one-body density as per-node probability mass (already
// weight-integrated; sums to tr rho1).
VectorXd position_density(const OneBodySpace& space, const MatrixXcd& rho1,
                          const MatrixXcd& phi);

// Sum of node masses on one side of x = 0 (side < 0: left).
double well_probability(const OneBodySpace& space, const VectorXd& masses,
                        int side);

// Left-restricted orbital overlap O(j,k) = sum_{x_i < 0} conj(c_j(i)) c_k(i);
// the right overlap is I - O by orthonormality.
MatrixXcd left_overlap(const OneBodySpace& space, const MatrixXcd& phi);

// Quadrant probabilities (LL, LR, RL, RR) of a same-species two-body
// density, renormalized so the four sum to 1.
std::array<double, 4> quadrant_probabilities_same(const MatrixXcd& rho2,
                                                  const MatrixXcd& oleft);

// Same for an ordered cross pair; rows of rho2x pair species a with b.
std::array<double, 4> quadrant_probabilities_cross(const MatrixXcd& rho2x,
                                                   const MatrixXcd& oleft_a,
                                                   const MatrixXcd& oleft_b);

// f_LL = P_LL / (P_L P'_L), f_RR likewise, f = sqrt((f_LL^2 + f_RR^2)/2).
// Marginals below 1e-8 make the measures undefined: NaN markers instead of
// spurious spikes.
std::tuple<double, double, double> correlation_f(double p_ll, double p_rr,
                                                 double pl_a, double pr_a,
                                                 double pl_b, double pr_b);

// Full record from one snapshot (densities, energy, health metrics).
ObservableRecord make_record(const System& sys, const MLState& st,
                             double regularization = 1e-10);

// Fixed-order CSV schema; numbers printed with %.17g.
std::string csv_header(const System& sys);
std::string csv_row(const ObservableRecord& rec);

}  // namespace mlb
