#pragma once

#include "mlb/meanfield.hpp"

namespace mlb {

enum class TimeMode { real, imaginary };

// Time derivative of every layer, same shapes as the state itself.
struct StateDerivative {
  VectorXcd top;
  std::vector<MatrixXcd> coeff, spf;
};

// Top layer: i dA = H_top A.
VectorXcd rhs_top(const System& sys, const MLState& st, const MeanFields& mf);

// Species layer: i dC^s = (1 - P1) [ H_s C^s + cross mean-field couplings ];
// rows of the result are orthogonal to the rows of C^s.
std::vector<MatrixXcd> rhs_species(const System& sys, const MLState& st,
                                   const DensitySet& dens,
                                   const MeanFields& mf);

// Orbital layer: i dPhi^s = (1 - P2) [ h phi + mean-field terms ]; rows
// orthogonal to the rows of Phi^s.
std::vector<MatrixXcd> rhs_spf(const System& sys, const MLState& st,
                               const DensitySet& dens, const MeanFields& mf);

// One consistent snapshot: densities, then regularized inverses, then mean
// fields, then the three layer derivatives.  Imaginary mode multiplies the
// RHS by -i (replacing i d/dt with -d/dtau).
StateDerivative full_rhs(const System& sys, const MLState& st, TimeMode mode,
                         double regularization);

// Same memory layout as flatten(MLState): top, coefficients, orbitals.
VectorXcd flatten(const StateDerivative& d);

}  // namespace mlb
