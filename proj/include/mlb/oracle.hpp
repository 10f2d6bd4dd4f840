#pragma once

#include <Eigen/SparseCore>

#include "mlb/integrate.hpp"
#include "mlb/state.hpp"

namespace mlb {

using SparseXcd = Eigen::SparseMatrix<Complex>;

// Exact product basis over one mode set: per species a bosonic number
// basis of all dim(space) modes.  Ground truth for tiny systems; assembled
// from explicit ladder matrices, independent of the tensor contractions
// used by the main code (only the DVR integral primitives are shared).
struct FullCIBasis {
  OneBodySpace space;
  std::vector<NumberBasis> basis;
  std::vector<Eigen::Index> dims, strides;  // last species fastest
  Eigen::Index size = 0;
};

// Policy for choosing the full-CI mode set: the raw DVR basis for small
// grids (n <= 12), otherwise the lowest-k eigenvectors of the one-body
// Hamiltonian.
OneBodySpace fullci_space(const Grid& grid, const TrapSpec& trap, int k);

FullCIBasis make_fullci_basis(const OneBodySpace& space,
                              const MixtureSpec& mix,
                              Eigen::Index cap = 20000);

// Full many-body Hamiltonian on the product basis: one-body, intra- and
// inter-species contact blocks.  Hermitian by construction.
SparseXcd build_fullci_hamiltonian(const MixtureSpec& mix,
                                   const FullCIBasis& fc);

// Lowest eigenpair by dense diagonalization (dimension capped at 4096).
std::pair<double, VectorXcd> ground_state_exact(const SparseXcd& h);

// Samples of the exact Schroedinger evolution i dpsi/dt = H psi at the
// requested times (ascending, starting at psi's time 0).
std::vector<VectorXcd> propagate_exact(const SparseXcd& h, VectorXcd psi,
                                       const std::vector<double>& times,
                                       const StepSettings& settings);

// Wraps an exact product-basis vector as a full-CI ML state (orbitals =
// mode basis, species states = number states, A = psi) so both routes
// share one observable pipeline.
MLState to_mlstate(const FullCIBasis& fc, const VectorXcd& psi, double time);

// Independent coupled Gross-Pitaevskii integrator (one orbital per
// species, mean-field factors g(N-1) intra and g N' inter), sampled every
// dt_out.  Grid spaces only.
std::vector<std::pair<double, MatrixXcd>> gp_propagate(
    const OneBodySpace& space, const MixtureSpec& mix, MatrixXcd orbitals,
    double t_final, double dt_out, const StepSettings& settings);

}  // namespace mlb
