#pragma once

#include <utility>

#include "mlb/common.hpp"

namespace mlb {

// One-dimensional external potential
//
//   U(x) = c x^2 + h / sqrt(2 pi s^2) exp(-x^2 / (2 s^2)) + H_b [x > 0]
//
// i.e. a harmonic base trap split by a central Gaussian barrier, plus an
// optional blocking step that raises the right half (used to prepare
// left-localized initial states during relaxation; real-time propagation
// removes the step).
struct TrapSpec {
  double harmonic = 0.5;        // prefactor c of the x^2 term
  double barrier_height = 0.0;  // integrated barrier strength h
  double barrier_width = 0.2;   // Gaussian width s
  double block_height = 0.0;    // step H_b added for x > 0

  TrapSpec without_block() const {
    TrapSpec t = *this;
    t.block_height = 0.0;
    return t;
  }
};

double trap_potential(const TrapSpec& trap, double x);

// Height of the potential at the top of the central barrier (x = 0);
// bands below this value come in tunneling doublets.
double barrier_top(const TrapSpec& trap);

enum class GridKind { harmonic, sine };

// Discrete variable representation of one spatial dimension.  A wave
// function is held as a coefficient vector c with respect to the
// orthonormal DVR basis; its value at node x_i is c_i / sqrt(w_i).
// Local potentials are diagonal in the nodes, the kinetic energy is the
// dense matrix `kinetic` (mass 1, hbar 1).
struct Grid {
  GridKind kind = GridKind::harmonic;
  double parameter = 1.0;  // harmonic: frequency omega; sine: half extent L
  VectorXd nodes;          // ascending
  VectorXd weights;        // strictly positive quadrature weights
  MatrixXd kinetic;        // symmetric n x n matrix of p^2/2

  int size() const { return static_cast<int>(nodes.size()); }
};

// Gauss-Hermite DVR of a harmonic oscillator with frequency `omega`:
// nodes are the eigenvalues of the position operator truncated to the
// lowest n oscillator states, weights follow from the first eigenvector
// row, and the kinetic matrix is the unitary image of p^2/2.
Grid harmonic_dvr(int n, double omega = 1.0);

// Sine (particle-in-a-box) DVR on [-L, L] with n equidistant interior
// nodes and the Colbert-Miller kinetic matrix.
Grid sine_dvr(int n, double half_extent);

// kinetic + diag(U(x_i))
MatrixXd one_body_hamiltonian(const Grid& grid, const TrapSpec& trap);

// Lowest `count` eigenpairs of a real symmetric operator, ascending.
// Columns of the returned matrix are the eigenvectors.
std::pair<VectorXd, MatrixXd> lowest_eigenpairs(const MatrixXd& h, int count);

}  // namespace mlb
