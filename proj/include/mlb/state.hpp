#pragma once

#include "mlb/system.hpp"

namespace mlb {

// Three-layer wave function: a top tensor A over species-state indices
// (flattened with the last species fastest, strides in System), one
// coefficient matrix C per species (rows = species states, columns =
// number states of that species' basis), and one SPF matrix per species
// (rows = orbitals, columns = one-body coefficients).
struct MLState {
  VectorXcd top;
  std::vector<MatrixXcd> coeff;
  std::vector<MatrixXcd> spf;
  double time = 0.0;
};

// Fully condensed Hartree product: SPFs are the lowest eigenvectors of
// the one-body Hamiltonian, species state 1 puts all bosons into the
// first SPF, the remaining species states are unit number-state vectors,
// and the top tensor selects state 1 of every species.
MLState init_hartree(const System& sys);

double norm(const MLState& state);
void normalize(MLState& state);

// Largest absolute deviation of any layer Gram matrix from the identity
// (species-state rows and SPF rows of every species).
double orthonormality_residual(const MLState& state);

// Modified Gram-Schmidt on the rows of every C and every SPF matrix.
// Used per accepted step in imaginary time and as drift repair in real
// time; the top tensor is left untouched.
void orthonormalize(MLState& state);

// Concatenation of all coefficients into one flat complex vector (top,
// then every C, then every SPF, each in column-major storage order) and
// its inverse; shapes are taken from `state`.  Round-trips bit-exactly.
Eigen::Index flat_size(const MLState& state);
VectorXcd flatten(const MLState& state);
void unflatten(const VectorXcd& flat, MLState& state);

// Linear-combination helper for integrator arithmetic on whole states.
MLState zeros_like(const MLState& state);

}  // namespace mlb
