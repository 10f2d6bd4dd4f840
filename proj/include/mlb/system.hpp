#pragma once

#include <string>
#include <vector>

#include "mlb/fock.hpp"
#include "mlb/onebody.hpp"

namespace mlb {

struct SpeciesSpec {
  std::string name;        // single letter by convention: A, B, C, ...
  int particles = 1;       // N
  int orbitals = 1;        // m, particle-layer orbitals per species
  int states = 1;          // M, species-layer states (M <= binom(N+m-1, m-1))
  double g = 0.0;          // intra-species contact strength
};

struct MixtureSpec {
  std::vector<SpeciesSpec> species;
  MatrixXd g_inter;  // S x S symmetric, zero diagonal
  TrapSpec trap;

  int count() const { return int(species.size()); }
};

// Everything that stays fixed along a trajectory: the one-body space,
// the mixture, one number-state basis per species, and the cached
// one-body operator (kinetic + trap) of each species.
struct System {
  OneBodySpace space;
  MixtureSpec mix;
  std::vector<NumberBasis> basis;          // per species, (N_s, m_s)
  std::vector<MatrixXcd> h_op;             // per species, dim x dim
  std::vector<std::pair<int, int>> pairs;  // (s, s') with s < s'
  std::vector<Eigen::Index> top_dims;      // M_s
  std::vector<Eigen::Index> top_strides;   // last species fastest
  Eigen::Index top_size = 0;               // product of M_s

  int count() const { return mix.count(); }
};

System make_system(OneBodySpace space, MixtureSpec mix);

// Upper-triangle pair list (s, s') with s < s' in row order.
std::vector<std::pair<int, int>> species_pairs(int count);

// Decomposition of the flat top index around one species axis: the index
// factorizes as (outer, i, inner) with flat = (outer * extent + i) * inner
// + q, q < inner.
struct AxisView {
  Eigen::Index outer, extent, inner;
};

inline AxisView axis_view(const System& sys, int s) {
  const Eigen::Index extent = sys.top_dims[s];
  const Eigen::Index inner = sys.top_strides[s];
  return {sys.top_size / (extent * inner), extent, inner};
}

// Same for an ordered species pair a < b:
// flat = ((pre * M_a + i) * mid + m) * M_b * post + j * post + q.
struct PairAxisView {
  Eigen::Index pre, first, mid, second, post;

  Eigen::Index flat(Eigen::Index p, Eigen::Index i, Eigen::Index m,
                    Eigen::Index j, Eigen::Index q) const {
    return (((p * first + i) * mid + m) * second + j) * post + q;
  }
};

inline PairAxisView pair_axis_view(const System& sys, int a, int b) {
  const Eigen::Index ma = sys.top_dims[a];
  const Eigen::Index mb = sys.top_dims[b];
  const Eigen::Index post = sys.top_strides[b];
  const Eigen::Index mid = sys.top_strides[a] / (mb * post);
  return {sys.top_size / (ma * sys.top_strides[a]), ma, mid, mb, post};
}

}  // namespace mlb
