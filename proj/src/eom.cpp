#include "mlb/eom.hpp"

#include "mlb/indexing.hpp"

namespace mlb {

namespace {

// (H_s C)_i = sum_{jk} h(j,k) a+_j a_k C_i + 1/2 sum_{jkqp} v((jk),(qp))
//             a+_j a+_k a_q a_p C_i, rows acted on independently.
MatrixXcd species_hamiltonian_rows(const NumberBasis& basis, const MatrixXcd& h,
                                   const MatrixXcd& v, const MatrixXcd& rows) {
  const int m = basis.modes();
  MatrixXcd out = MatrixXcd::Zero(rows.rows(), rows.cols());
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      if (h(j, k) != 0.0) out += h(j, k) * apply_hopping(basis, j, k, rows);
      for (int q = 0; q < m; ++q)
        for (int p = 0; p < m; ++p) {
          const Complex c = v(pair_index(j, k, m), pair_index(q, p, m));
          if (c != 0.0) out += 0.5 * c * apply_two_body(basis, j, k, q, p, rows);
        }
    }
  return out;
}

// Cross coupling of species s with one partner: for every orbital channel
// (j,k), sum_t G^{jk}_{it} a+_j a_k C_t with
// G^{jk} = eta1_inv * unflatten(eta2_st_uv * w^T column (j,k)).
void add_cross_species(const NumberBasis& basis, const MatrixXcd& eta1_inv,
                       const MatrixXcd& eta2_st_uv, const MatrixXcd& w,
                       const MatrixXcd& coeff, MatrixXcd& out) {
  const int m = basis.modes();
  const Eigen::Index states = coeff.rows();
  const MatrixXcd gamma = eta2_st_uv * w.transpose();  // ((s,t),(j,k))
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      const MatrixXcd g =
          eta1_inv * unflatten_pairs(gamma.col(pair_index(j, k, m)), states,
                                     states);
      out.noalias() += g * apply_hopping(basis, j, k, coeff);
    }
}

// S(i, ((k,p),q)) = sum_j rho1_inv(i,j) rho2((j,k),(q,p)) reshaped for
// field_apply: field pair (k,p) over mf orbitals, ket q over own orbitals.
MatrixXcd field_coefficients(const MatrixXcd& rho1_inv, const MatrixXcd& rho2,
                             int m_own, int m_field) {
  MatrixXcd reshaped(m_own, m_field * m_field * m_own);
  for (int j = 0; j < m_own; ++j)
    for (int k = 0; k < m_field; ++k)
      for (int q = 0; q < m_own; ++q)
        for (int p = 0; p < m_field; ++p)
          reshaped(j, (k * m_field + p) * m_own + q) =
              rho2(pair_index(j, k, m_field), pair_index(q, p, m_field));
  return rho1_inv * reshaped;
}

}  // namespace

VectorXcd rhs_top(const System& sys, const MLState& st, const MeanFields& mf) {
  VectorXcd ha = VectorXcd::Zero(sys.top_size);
  if (sys.top_size <= 4096) {
    ha.noalias() = top_hamiltonian(sys, mf) * st.top;
  } else {
    apply_top(sys, mf, st.top, ha);
  }
  return ha;
}

std::vector<MatrixXcd> rhs_species(const System& sys, const MLState& st,
                                   const DensitySet& dens,
                                   const MeanFields& mf) {
  std::vector<MatrixXcd> out(sys.count());
  for (int s = 0; s < sys.count(); ++s) {
    const MatrixXcd& c = st.coeff[s];
    MatrixXcd r = species_hamiltonian_rows(sys.basis[s], mf.h[s], mf.v[s], c);
    for (std::size_t p = 0; p < sys.pairs.size(); ++p) {
      const auto [a, b] = sys.pairs[p];
      if (s == a)
        add_cross_species(sys.basis[s], dens.eta1_inv[s], dens.eta2_ab[p],
                          mf.w_ab[p], c, r);
      else if (s == b)
        add_cross_species(sys.basis[s], dens.eta1_inv[s], dens.eta2_ba[p],
                          mf.w_ba[p], c, r);
    }
    r -= (r * c.adjoint()) * c;  // 1 - P1
    out[s] = std::move(r);
  }
  return out;
}

std::vector<MatrixXcd> rhs_spf(const System& sys, const MLState& st,
                               const DensitySet& dens, const MeanFields& mf) {
  std::vector<MatrixXcd> out(sys.count());
  for (int s = 0; s < sys.count(); ++s) {
    const MatrixXcd& phi = st.spf[s];
    const int m = sys.mix.species[s].orbitals;

    MatrixXcd r = phi * sys.h_op[s].transpose();
    if (sys.mix.species[s].particles >= 2) {
      const MatrixXcd coeffs =
          field_coefficients(dens.rho1_inv[s], dens.rho2s[s], m, m);
      r += field_apply(sys.space, mf.intra[s], coeffs, phi);
    }
    for (std::size_t p = 0; p < sys.pairs.size(); ++p) {
      const auto [a, b] = sys.pairs[p];
      if (s == a) {
        const MatrixXcd coeffs = field_coefficients(
            dens.rho1_inv[s], dens.rho2x[p], m, sys.mix.species[b].orbitals);
        r += field_apply(sys.space, mf.cross_b[p], coeffs, phi);
      } else if (s == b) {
        const MatrixXcd coeffs =
            field_coefficients(dens.rho1_inv[s], dens.rho2x_rev[p], m,
                               sys.mix.species[a].orbitals);
        r += field_apply(sys.space, mf.cross_a[p], coeffs, phi);
      }
    }
    r -= (r * phi.adjoint()) * phi;  // 1 - P2
    out[s] = std::move(r);
  }
  return out;
}

StateDerivative full_rhs(const System& sys, const MLState& st, TimeMode mode,
                         double regularization) {
  const LayerTensors tensors = layer_tensors(sys, st);
  const DensitySet dens = compute_densities(sys, st, tensors, regularization);
  const MeanFields mf = compute_mean_fields(sys, st, tensors);

  // real time: dX = -i F; imaginary time: dX = -F
  const Complex factor = mode == TimeMode::real ? -im : Complex(-1.0, 0.0);

  StateDerivative d;
  d.top = factor * rhs_top(sys, st, mf);
  d.coeff = rhs_species(sys, st, dens, mf);
  d.spf = rhs_spf(sys, st, dens, mf);
  for (int s = 0; s < sys.count(); ++s) {
    d.coeff[s] *= factor;
    d.spf[s] *= factor;
  }
  return d;
}

VectorXcd flatten(const StateDerivative& d) {
  Eigen::Index n = d.top.size();
  for (const auto& c : d.coeff) n += c.size();
  for (const auto& p : d.spf) n += p.size();
  VectorXcd flat(n);
  Eigen::Index at = 0;
  flat.segment(at, d.top.size()) = d.top;
  at += d.top.size();
  for (const auto& c : d.coeff) {
    flat.segment(at, c.size()) = Eigen::Map<const VectorXcd>(c.data(), c.size());
    at += c.size();
  }
  for (const auto& p : d.spf) {
    flat.segment(at, p.size()) = Eigen::Map<const VectorXcd>(p.data(), p.size());
    at += p.size();
  }
  return flat;
}

}  // namespace mlb
