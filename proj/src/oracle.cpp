#include "mlb/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "mlb/indexing.hpp"

namespace mlb {

namespace {

// Dense creation matrix <basis(N)| a^dag_j |basis(N-1)>: entry
// (n + e_j, n) = sqrt(n_j + 1).  The annihilator is its transpose.
MatrixXd creation_matrix(const NumberBasis& lower, const NumberBasis& upper,
                         int j) {
  MatrixXd out = MatrixXd::Zero(upper.size(), lower.size());
  std::vector<int> occ(lower.modes());
  for (std::int64_t s = 0; s < lower.size(); ++s) {
    for (int q = 0; q < lower.modes(); ++q) occ[q] = lower.occupations(s)(q);
    occ[j] += 1;
    out(upper.index_of(occ.data()), s) = std::sqrt(double(occ[j]));
    occ[j] -= 1;
  }
  return out;
}

// One species' full Hamiltonian block on its own number basis: one-body
// hopping plus the intra-species contact term, both from explicit ladder
// products.
MatrixXcd species_block(const NumberBasis& basis, const MatrixXcd& hmode,
                        const MatrixXcd& j_integrals, double g) {
  const int k = basis.modes();
  const int n = basis.particles();
  const Eigen::Index d = basis.size();
  if (d > 4096)
    throw ResourceError("full-CI species block capped at 4096 states");

  const NumberBasis lower(n - 1, k);
  std::vector<MatrixXd> cre;
  cre.reserve(k);
  for (int j = 0; j < k; ++j) cre.push_back(creation_matrix(lower, basis, j));

  MatrixXcd out = MatrixXcd::Zero(d, d);
  for (int j = 0; j < k; ++j)
    for (int q = 0; q < k; ++q)
      if (hmode(j, q) != 0.0)
        out.noalias() += hmode(j, q) * (cre[j] * cre[q].transpose()).cast<Complex>();

  if (g != 0.0 && n >= 2) {
    const NumberBasis lowest(n - 2, k);
    std::vector<MatrixXd> cre2;
    cre2.reserve(k);
    for (int j = 0; j < k; ++j)
      cre2.push_back(creation_matrix(lowest, lower, j));
    // a^dag_j a^dag_q a_p a_r = up_{jq} * down_{pr}
    for (int j = 0; j < k; ++j)
      for (int q = 0; q < k; ++q) {
        const MatrixXd up = cre[j] * cre2[q];
        MatrixXcd down = MatrixXcd::Zero(lowest.size(), d);
        for (int p = 0; p < k; ++p)
          for (int r = 0; r < k; ++r) {
            const Complex c = j_integrals(pair_index(j, q, k), pair_index(p, r, k));
            if (c != 0.0)
              down += (0.5 * g * c) *
                      (cre2[p].transpose() * cre[r].transpose()).cast<Complex>();
          }
        out.noalias() += up.cast<Complex>() * down;
      }
  }
  return out;
}

}  // namespace

OneBodySpace fullci_space(const Grid& grid, const TrapSpec& trap, int k) {
  if (grid.size() <= 12) return OneBodySpace::whole(grid);
  const auto [values, vectors] =
      lowest_eigenpairs(one_body_hamiltonian(grid, trap), k);
  return OneBodySpace::span(grid, vectors.transpose().cast<Complex>());
}

FullCIBasis make_fullci_basis(const OneBodySpace& space,
                              const MixtureSpec& mix, Eigen::Index cap) {
  FullCIBasis fc{space, {}, {}, {}, 1};
  for (const auto& sp : mix.species) {
    fc.basis.emplace_back(sp.particles, int(space.dim()));
    fc.dims.push_back(fc.basis.back().size());
  }
  fc.strides.assign(fc.dims.size(), 1);
  for (int s = int(fc.dims.size()) - 2; s >= 0; --s)
    fc.strides[s] = fc.strides[s + 1] * fc.dims[s + 1];
  for (Eigen::Index d : fc.dims) {
    if (fc.size > cap / d) throw ResourceError("full-CI dimension cap exceeded");
    fc.size *= d;
  }
  return fc;
}

SparseXcd build_fullci_hamiltonian(const MixtureSpec& mix,
                                   const FullCIBasis& fc) {
  const int count = int(fc.basis.size());
  const Eigen::Index k = fc.space.dim();
  const MatrixXcd identity = MatrixXcd::Identity(k, k);
  const MatrixXcd hmode = fc.space.one_body_matrix(mix.trap);
  const MatrixXcd j_integrals = contact_integrals(fc.space, identity, identity);

  std::vector<Eigen::Triplet<Complex>> trips;
  for (int s = 0; s < count; ++s) {
    const MatrixXcd block =
        species_block(fc.basis[s], hmode, j_integrals, mix.species[s].g);
    const Eigen::Index d = fc.dims[s], str = fc.strides[s];
    const Eigen::Index outer = fc.size / (d * str);
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c) {
        if (block(r, c) == 0.0) continue;
        for (Eigen::Index o = 0; o < outer; ++o)
          for (Eigen::Index q = 0; q < str; ++q)
            trips.emplace_back(o * d * str + r * str + q,
                               o * d * str + c * str + q, block(r, c));
      }
  }

  for (int a = 0; a < count; ++a)
    for (int b = a + 1; b < count; ++b) {
      const double g = mix.g_inter(a, b);
      if (g == 0.0) continue;
      const Eigen::Index da = fc.dims[a], db = fc.dims[b];
      if (da * db > 4096)
        throw ResourceError("full-CI pair block capped at 4096 states");

      const NumberBasis lower_a(fc.basis[a].particles() - 1, int(k));
      const NumberBasis lower_b(fc.basis[b].particles() - 1, int(k));
      std::vector<MatrixXd> hop_a, hop_b;  // a^dag_j a_q as dense blocks
      for (int j = 0; j < k; ++j) {
        hop_a.push_back(creation_matrix(lower_a, fc.basis[a], j));
        hop_b.push_back(creation_matrix(lower_b, fc.basis[b], j));
      }

      MatrixXcd pair_block = MatrixXcd::Zero(da * db, da * db);
      for (int j = 0; j < k; ++j)
        for (int q = 0; q < k; ++q) {
          const MatrixXd ba = hop_a[j] * hop_a[q].transpose();
          MatrixXcd kb = MatrixXcd::Zero(db, db);
          for (int kk = 0; kk < k; ++kk)
            for (int p = 0; p < k; ++p) {
              const Complex c =
                  j_integrals(pair_index(j, kk, k), pair_index(q, p, k));
              if (c != 0.0)
                kb += (g * c) *
                      (hop_b[kk] * hop_b[p].transpose()).cast<Complex>();
            }
          for (Eigen::Index r1 = 0; r1 < da; ++r1)
            for (Eigen::Index c1 = 0; c1 < da; ++c1) {
              if (ba(r1, c1) == 0.0) continue;
              pair_block.block(r1 * db, c1 * db, db, db) += ba(r1, c1) * kb;
            }
        }

      const Eigen::Index post = fc.strides[b];
      const Eigen::Index mid = fc.strides[a] / (db * post);
      const Eigen::Index pre = fc.size / (da * fc.strides[a]);
      auto flat = [&](Eigen::Index o, Eigen::Index i, Eigen::Index m,
                      Eigen::Index j2, Eigen::Index q2) {
        return (((o * da + i) * mid + m) * db + j2) * post + q2;
      };
      for (Eigen::Index r1 = 0; r1 < da; ++r1)
        for (Eigen::Index r2 = 0; r2 < db; ++r2)
          for (Eigen::Index c1 = 0; c1 < da; ++c1)
            for (Eigen::Index c2 = 0; c2 < db; ++c2) {
              const Complex v = pair_block(r1 * db + r2, c1 * db + c2);
              if (v == 0.0) continue;
              for (Eigen::Index o = 0; o < pre; ++o)
                for (Eigen::Index m = 0; m < mid; ++m)
                  for (Eigen::Index q = 0; q < post; ++q)
                    trips.emplace_back(flat(o, r1, m, r2, q),
                                       flat(o, c1, m, c2, q), v);
            }
    }

  SparseXcd h(fc.size, fc.size);
  h.setFromTriplets(trips.begin(), trips.end());
  return h;
}

std::pair<double, VectorXcd> ground_state_exact(const SparseXcd& h) {
  if (h.rows() > 4096)
    throw ResourceError("dense ground-state solve capped at 4096 states");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es{MatrixXcd(h)};
  VectorXcd psi = es.eigenvectors().col(0);
  Eigen::Index peak;
  psi.cwiseAbs().maxCoeff(&peak);
  if (std::abs(psi(peak)) > 0.0) psi *= std::abs(psi(peak)) / psi(peak);
  return {es.eigenvalues()(0), std::move(psi)};
}

std::vector<VectorXcd> propagate_exact(const SparseXcd& h, VectorXcd psi,
                                       const std::vector<double>& times,
                                       const StepSettings& settings) {
  auto rhs = [&](double, const VectorXcd& y) -> VectorXcd {
    return -im * (h * y).eval();
  };
  std::vector<VectorXcd> out;
  out.reserve(times.size());
  double t = 0.0;
  StepController ctl;
  for (double target : times) {
    while (t < target - 1e-12)
      step_adaptive(rhs, t, psi, ctl, target - t, settings);
    t = std::max(t, target);
    out.push_back(psi);
  }
  return out;
}

MLState to_mlstate(const FullCIBasis& fc, const VectorXcd& psi, double time) {
  MLState st;
  st.top = psi;
  st.time = time;
  const Eigen::Index k = fc.space.dim();
  for (std::size_t s = 0; s < fc.basis.size(); ++s) {
    st.coeff.push_back(MatrixXcd::Identity(fc.dims[s], fc.dims[s]));
    st.spf.push_back(MatrixXcd::Identity(k, k));
  }
  return st;
}

std::vector<std::pair<double, MatrixXcd>> gp_propagate(
    const OneBodySpace& space, const MixtureSpec& mix, MatrixXcd orbitals,
    double t_final, double dt_out, const StepSettings& settings) {
  if (space.truncated())
    throw ConfigError("the Gross-Pitaevskii oracle runs on grid spaces only");
  const Eigen::Index n = space.dim();
  const int count = mix.count();
  const MatrixXcd h = space.one_body_matrix(mix.trap);
  const VectorXd& w = space.grid().weights;

  auto rhs = [&](double, const VectorXcd& y) -> VectorXcd {
    MatrixXd dens(count, n);
    for (int s = 0; s < count; ++s)
      dens.row(s) =
          y.segment(s * n, n).cwiseAbs2().transpose().cwiseQuotient(
              w.transpose());
    VectorXcd dy(count * n);
    for (int s = 0; s < count; ++s) {
      VectorXd field = mix.species[s].g * (mix.species[s].particles - 1) *
                       dens.row(s).transpose();
      for (int o = 0; o < count; ++o)
        if (o != s)
          field += mix.g_inter(s, o) * mix.species[o].particles *
                   dens.row(o).transpose();
      const VectorXcd c = y.segment(s * n, n);
      dy.segment(s * n, n) =
          -im * (h * c + field.cast<Complex>().cwiseProduct(c));
    }
    return dy;
  };

  VectorXcd y(count * n);
  for (int s = 0; s < count; ++s) y.segment(s * n, n) = orbitals.row(s);

  std::vector<std::pair<double, MatrixXcd>> out;
  auto sample = [&](double t) {
    MatrixXcd phi(count, n);
    for (int s = 0; s < count; ++s) phi.row(s) = y.segment(s * n, n);
    out.emplace_back(t, std::move(phi));
  };

  double t = 0.0;
  StepController ctl;
  sample(t);
  int index = 0;
  while (t < t_final - 1e-12) {
    ++index;
    const double target = std::min(index * dt_out, t_final);
    while (t < target - 1e-12)
      step_adaptive(rhs, t, y, ctl, target - t, settings);
    t = target;
    sample(t);
  }
  return out;
}

}  // namespace mlb
