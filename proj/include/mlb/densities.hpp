#pragma once

#include "mlb/state.hpp"

namespace mlb {

// Per-species transition tensors of the current species-state rows:
// hop((u,v), (j,k)) = <psi_u| a^dag_j a_k |psi_v> and
// two((u,v), (j,k,q,p)) = <psi_u| a^dag_j a^dag_k a_q a_p |psi_v>.
// Computed once per derivative evaluation and shared by the density and
// mean-field assemblies.
struct LayerTensors {
  std::vector<MatrixXcd> hop;  // (M^2) x (m^2)
  std::vector<MatrixXcd> two;  // (M^2) x (m^4)
};

LayerTensors layer_tensors(const System& sys, const MLState& st);

// Species-layer density of species s: eta1(i,j) = sum over all other
// top indices of conj(A[..i..]) A[..j..]; Hermitian, PSD, unit trace for
// a normalized state.
MatrixXcd eta1(const System& sys, const MLState& st, int s);

// Two-species density of the pair (a, b), a < b, as a matrix over pairs:
// eta2((s,u), (t,v)) with s,t indexing species a and u,v species b.
MatrixXcd eta2(const System& sys, const MLState& st, int a, int b);

// One-body density of a sigma boson (trace 1):
// rho1(i,j) = (1/N) sum_{uv} eta1(u,v) <psi_u| a^dag_i a_j |psi_v>.
MatrixXcd rho1(const System& sys, const MLState& st, int s);

// Intra-species two-body density (trace N-1, as defined):
// rho2((j,k),(q,p)) = (1/N) sum_{uv} eta1(u,v) <psi_u|a+_j a+_k a_q a_p|psi_v>.
MatrixXcd rho2_same(const System& sys, const MLState& st, int s);

// Inter-species two-body density for the ordered pair (a, b) (trace N_b):
// rho2((j,k),(q,p)) = (1/N_a) sum eta2((s,u),(t,v))
//                     <psi^a_s|a+_j a_q|psi^a_t> <psi^b_u|a+_k a_p|psi^b_v>,
// rows pairing j (species a) with k (species b).
MatrixXcd rho2_cross(const System& sys, const MLState& st, int a, int b);

// Reorders a stored eta2 (rows (s,u), cols (t,v), first species paired
// with second) into rows (s,t) over species a and cols (u,v) over species
// b.  ma, mb are the state counts of a and b; swapped marks that (a, b)
// reverses the stored (low, high) order.
MatrixXcd eta2_oriented(const MatrixXcd& stored, int ma, int mb, bool swapped);

// Eigenvalues of a Hermitian density, sorted descending.
VectorXd natural_populations(const MatrixXcd& h);

// Populations plus natural orbitals (columns, matching order); each
// orbital's largest-magnitude component is rotated to the positive real
// axis to fix the phase.
std::pair<VectorXd, MatrixXcd> natural_decomposition(const MatrixXcd& h);

// Inverse with eigenvalues clamped from below at eps; the standard
// regularization applied to eta1 and rho1 inside the equations of
// motion.  Density matrices themselves are always reported raw.
MatrixXcd regularized_inverse(const MatrixXcd& h, double eps);

// Everything the equations of motion need from one state snapshot.
struct DensitySet {
  std::vector<MatrixXcd> eta1, rho1, rho2s;   // per species
  std::vector<MatrixXcd> eta1_inv, rho1_inv;  // regularized inverses
  std::vector<MatrixXcd> eta2;                // per pair (a < b)
  std::vector<MatrixXcd> eta2_ab, eta2_ba;    // oriented, rows (s,t) cols (u,v)
  std::vector<MatrixXcd> rho2x;               // per pair, ordered (a, b)
  std::vector<MatrixXcd> rho2x_rev;           // per pair, ordered (b, a)
};

DensitySet compute_densities(const System& sys, const MLState& st,
                             const LayerTensors& tensors, double regularization);

}  // namespace mlb
