#pragma once

#include "mlb/densities.hpp"
#include "mlb/onebody.hpp"

namespace mlb {

// All matrix elements of the Hamiltonian in the current orbital and
// species-state bases, evaluated from one state snapshot.
struct MeanFields {
  // Orbital-layer elements, per species:
  //   h(j,k)            = <phi_j| p^2/2 + U |phi_k>
  //   v((j,k),(q,p))    = g <phi_j phi_k| delta |phi_q phi_p>
  std::vector<MatrixXcd> h;
  std::vector<MatrixXcd> v;

  // Species-layer mean fields, per pair (a < b):
  //   w_ab((j,k),(u,v)) = g_ab sum_{qp} <phi^a_j phi^b_q|delta|phi^a_k phi^b_p>
  //                            <psi^b_u| a^dag_q a_p |psi^b_v>
  // and w_ba the same with the roles of a and b exchanged.
  std::vector<MatrixXcd> w_ab;
  std::vector<MatrixXcd> w_ba;

  // Top-layer elements: per species E((u,v)) and per pair
  // W((a,b),(c,d)) so that H = sum_s E^s + sum_pairs W.
  std::vector<MatrixXcd> etop;
  std::vector<MatrixXcd> wtop;

  // Local interaction fields for the orbital equations: intra[s] holds the
  // g_s-weighted pair fields of species s's own orbitals; for each pair
  // (a < b), cross_b[p] holds species b's fields (they act on species a)
  // and cross_a[p] species a's fields (acting on b), both g_ab-weighted.
  std::vector<ContactFields> intra;
  std::vector<ContactFields> cross_a, cross_b;
};

MeanFields compute_mean_fields(const System& sys, const MLState& st,
                               const LayerTensors& tensors);

// Dense top-layer Hamiltonian over the product of species-state indices.
// Refuses (ResourceError) above 4096 states; the equations of motion fall
// back to the matrix-free apply beyond that.
MatrixXcd top_hamiltonian(const System& sys, const MeanFields& mf);

// out += H_top a without materializing the matrix.
void apply_top(const System& sys, const MeanFields& mf, const VectorXcd& a,
               VectorXcd& out);

// Total energy <Psi|H|Psi> of the (normalized or not) state.
double energy(const System& sys, const MLState& st);

}  // namespace mlb
