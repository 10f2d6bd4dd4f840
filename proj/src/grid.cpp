#include "mlb/grid.hpp"

#include <cmath>

namespace mlb {

double trap_potential(const TrapSpec& trap, double x) {
  double u = trap.harmonic * x * x;
  if (trap.barrier_height != 0.0) {
    const double s2 = trap.barrier_width * trap.barrier_width;
    u += trap.barrier_height / std::sqrt(2.0 * M_PI * s2) *
         std::exp(-x * x / (2.0 * s2));
  }
  if (x > 0.0) u += trap.block_height;
  return u;
}

double barrier_top(const TrapSpec& trap) {
  // The barrier is centered at x = 0 where the harmonic term vanishes.
  const double s2 = trap.barrier_width * trap.barrier_width;
  return trap.barrier_height / std::sqrt(2.0 * M_PI * s2);
}

Grid harmonic_dvr(int n, double omega) {
  if (n < 2) throw ConfigError("harmonic DVR needs at least 2 points");
  if (omega <= 0.0) throw ConfigError("harmonic DVR frequency must be positive");

  // Position operator in the lowest n oscillator eigenstates of frequency
  // omega: tridiagonal with <j|x|j+1> = sqrt((j+1)/(2 omega)).
  VectorXd diag = VectorXd::Zero(n);
  VectorXd sub(n - 1);
  for (int j = 0; j < n - 1; ++j) sub[j] = std::sqrt((j + 1) / (2.0 * omega));

  Eigen::SelfAdjointEigenSolver<MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  MatrixXd u = es.eigenvectors();  // columns, ascending eigenvalues

  Grid g;
  g.kind = GridKind::harmonic;
  g.parameter = omega;
  g.nodes = es.eigenvalues();

  // The ground-state row fixes both the column signs and the quadrature
  // weights: u(0,i) = phi_0(x_i) sqrt(w_i) with phi_0 the (positive)
  // oscillator ground state, so w_i = u(0,i)^2 sqrt(pi/omega) e^{omega x^2}.
  // Work with logarithms so large grids do not overflow the exponential.
  g.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    if (u(0, i) < 0.0) u.col(i) *= -1.0;
    const double x = g.nodes[i];
    g.weights[i] = std::exp(2.0 * std::log(std::abs(u(0, i))) +
                            0.5 * std::log(M_PI / omega) + omega * x * x);
  }

  // p^2/2 in the oscillator basis: (omega/4) [(2j+1) delta_{jk}
  // - sqrt((j+1)(j+2)) delta_{k,j+2} - sqrt(j(j-1)) delta_{k,j-2}].
  MatrixXd t_fbr = MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    t_fbr(j, j) = omega * (2 * j + 1) / 4.0;
    if (j + 2 < n) {
      const double off = -omega * std::sqrt(double(j + 1) * (j + 2)) / 4.0;
      t_fbr(j, j + 2) = off;
      t_fbr(j + 2, j) = off;
    }
  }
  MatrixXd t = u.transpose() * t_fbr * u;
  g.kinetic = 0.5 * (t + t.transpose());  // strip asymmetric roundoff
  return g;
}

Grid sine_dvr(int n, double half_extent) {
  if (n < 2) throw ConfigError("sine DVR needs at least 2 points");
  if (half_extent <= 0.0) throw ConfigError("sine DVR extent must be positive");

  Grid g;
  g.kind = GridKind::sine;
  g.parameter = half_extent;

  const double box = 2.0 * half_extent;       // full box length
  const double dx = box / (n + 1);            // node spacing
  g.nodes.resize(n);
  g.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    g.nodes[i] = -half_extent + (i + 1) * dx;
    g.weights[i] = dx;
  }

  // Colbert-Miller kinetic matrix for a box with hard walls (mass 1).
  g.kinetic.resize(n, n);
  const double pref = M_PI * M_PI / (4.0 * box * box);
  const int np = n + 1;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= i; ++j) {
      double t;
      if (i == j) {
        const double s = std::sin(M_PI * i / np);
        t = pref * ((2.0 * np * np + 1.0) / 3.0 - 1.0 / (s * s));
      } else {
        const double sm = std::sin(M_PI * (i - j) / (2.0 * np));
        const double sp = std::sin(M_PI * (i + j) / (2.0 * np));
        t = pref * ((i - j) % 2 == 0 ? 1.0 : -1.0) *
            (1.0 / (sm * sm) - 1.0 / (sp * sp));
      }
      g.kinetic(i - 1, j - 1) = t;
      g.kinetic(j - 1, i - 1) = t;
    }
  }
  return g;
}

MatrixXd one_body_hamiltonian(const Grid& grid, const TrapSpec& trap) {
  MatrixXd h = grid.kinetic;
  for (int i = 0; i < grid.size(); ++i)
    h(i, i) += trap_potential(trap, grid.nodes[i]);
  return h;
}

std::pair<VectorXd, MatrixXd> lowest_eigenpairs(const MatrixXd& h, int count) {
  if (count < 1 || count > h.rows())
    throw ConfigError("eigenpair count out of range");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
  return {es.eigenvalues().head(count),
          es.eigenvectors().leftCols(count)};
}

}  // namespace mlb
