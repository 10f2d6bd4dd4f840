#include "mlb/densities.hpp"

#include <Eigen/Eigenvalues>

#include "mlb/indexing.hpp"

namespace mlb {

namespace {

MatrixXcd rho1_from(const MatrixXcd& eta, const MatrixXcd& hop, int m,
                    double particles) {
  const VectorXcd flat = hop.transpose() * flatten_pairs(eta) / particles;
  return unflatten_pairs(flat, m, m);
}

MatrixXcd rho2_same_from(const MatrixXcd& eta, const MatrixXcd& two, int m,
                         double particles) {
  const VectorXcd flat = two.transpose() * flatten_pairs(eta) / particles;
  return unflatten_pairs(flat, m * m, m * m);
}

// rho2 for the ordered pair (a, b) from the oriented eta2 and the two
// hopping tensors; rows pair orbital j (species a) with k (species b).
MatrixXcd rho2_cross_from(const MatrixXcd& eta_ab, const MatrixXcd& hop_a,
                          const MatrixXcd& hop_b, int ma, int mb,
                          double particles_a) {
  // X((j,q),(k,p)) = sum_{st,uv} hop_a((s,t),(j,q)) eta((s,t),(u,v))
  //                              hop_b((u,v),(k,p))
  const MatrixXcd x = hop_a.transpose() * eta_ab * hop_b / particles_a;
  MatrixXcd out(ma * mb, ma * mb);
  for (int j = 0; j < ma; ++j)
    for (int k = 0; k < mb; ++k)
      for (int q = 0; q < ma; ++q)
        for (int p = 0; p < mb; ++p)
          out(pair_index(j, k, mb), pair_index(q, p, mb)) =
              x(pair_index(j, q, ma), pair_index(k, p, mb));
  return out;
}

}  // namespace

LayerTensors layer_tensors(const System& sys, const MLState& st) {
  LayerTensors out;
  out.hop.reserve(sys.count());
  out.two.reserve(sys.count());
  for (int s = 0; s < sys.count(); ++s) {
    out.hop.push_back(hopping_tensor(sys.basis[s], st.coeff[s]));
    out.two.push_back(two_body_tensor(sys.basis[s], st.coeff[s]));
  }
  return out;
}

MatrixXcd eta1(const System& sys, const MLState& st, int s) {
  const AxisView v = axis_view(sys, s);
  MatrixXcd out = MatrixXcd::Zero(v.extent, v.extent);
  for (Eigen::Index o = 0; o < v.outer; ++o) {
    Eigen::Map<const MatrixXcd> block(
        st.top.data() + o * v.extent * v.inner, v.inner, v.extent);
    out.noalias() += block.adjoint() * block;
  }
  return out;
}

MatrixXcd eta2(const System& sys, const MLState& st, int a, int b) {
  if (a == b) throw ConfigError("eta2 requires two distinct species");
  const PairAxisView v = pair_axis_view(sys, a, b);
  MatrixXcd out = MatrixXcd::Zero(v.first * v.second, v.first * v.second);
  VectorXcd z(v.first * v.second);
  for (Eigen::Index p = 0; p < v.pre; ++p)
    for (Eigen::Index m = 0; m < v.mid; ++m)
      for (Eigen::Index q = 0; q < v.post; ++q) {
        for (Eigen::Index s = 0; s < v.first; ++s)
          for (Eigen::Index u = 0; u < v.second; ++u)
            z(s * v.second + u) = st.top(v.flat(p, s, m, u, q));
        out.noalias() += z.conjugate() * z.transpose();
      }
  return out;
}

MatrixXcd rho1(const System& sys, const MLState& st, int s) {
  return rho1_from(eta1(sys, st, s), hopping_tensor(sys.basis[s], st.coeff[s]),
                   sys.mix.species[s].orbitals, sys.mix.species[s].particles);
}

MatrixXcd rho2_same(const System& sys, const MLState& st, int s) {
  if (sys.mix.species[s].particles < 2)
    throw ConfigError("rho2_same requires at least two particles");
  return rho2_same_from(eta1(sys, st, s),
                        two_body_tensor(sys.basis[s], st.coeff[s]),
                        sys.mix.species[s].orbitals,
                        sys.mix.species[s].particles);
}

MatrixXcd rho2_cross(const System& sys, const MLState& st, int a, int b) {
  if (a == b) throw ConfigError("rho2_cross requires two distinct species");
  const MatrixXcd e2 = eta2(sys, st, std::min(a, b), std::max(a, b));
  const int ma = sys.mix.species[a].states;
  const int mb = sys.mix.species[b].states;
  const MatrixXcd oriented = eta2_oriented(e2, ma, mb, a > b);
  return rho2_cross_from(oriented,
                         hopping_tensor(sys.basis[a], st.coeff[a]),
                         hopping_tensor(sys.basis[b], st.coeff[b]),
                         sys.mix.species[a].orbitals,
                         sys.mix.species[b].orbitals,
                         sys.mix.species[a].particles);
}

MatrixXcd eta2_oriented(const MatrixXcd& e2, int ma, int mb, bool swapped) {
  MatrixXcd out(ma * ma, mb * mb);
  for (int s = 0; s < ma; ++s)
    for (int t = 0; t < ma; ++t)
      for (int u = 0; u < mb; ++u)
        for (int v = 0; v < mb; ++v)
          out(pair_index(s, t, ma), pair_index(u, v, mb)) =
              swapped ? e2(pair_index(u, s, ma), pair_index(v, t, ma))
                      : e2(pair_index(s, u, mb), pair_index(t, v, mb));
  return out;
}

namespace {

void require_hermitian(const MatrixXcd& h) {
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw NumericalError("density matrix is not Hermitian");
}

}  // namespace

VectorXd natural_populations(const MatrixXcd& h) {
  require_hermitian(h);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (h + h.adjoint()),
                                              Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

std::pair<VectorXd, MatrixXcd> natural_decomposition(const MatrixXcd& h) {
  require_hermitian(h);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (h + h.adjoint()));
  VectorXd values = es.eigenvalues().reverse();
  MatrixXcd vectors = es.eigenvectors().rowwise().reverse();
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index peak;
    vectors.col(c).cwiseAbs().maxCoeff(&peak);
    const Complex z = vectors(peak, c);
    if (std::abs(z) > 0.0) vectors.col(c) *= std::abs(z) / z;
  }
  return {std::move(values), std::move(vectors)};
}

MatrixXcd regularized_inverse(const MatrixXcd& h, double eps) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (h + h.adjoint()));
  const VectorXd inv =
      es.eigenvalues().cwiseMax(eps).cwiseInverse();
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

DensitySet compute_densities(const System& sys, const MLState& st,
                             const LayerTensors& tensors,
                             double regularization) {
  DensitySet out;
  for (int s = 0; s < sys.count(); ++s) {
    const int m = sys.mix.species[s].orbitals;
    const double n = sys.mix.species[s].particles;
    out.eta1.push_back(eta1(sys, st, s));
    out.eta1_inv.push_back(regularized_inverse(out.eta1[s], regularization));
    out.rho1.push_back(rho1_from(out.eta1[s], tensors.hop[s], m, n));
    out.rho1_inv.push_back(regularized_inverse(out.rho1[s], regularization));
    out.rho2s.push_back(rho2_same_from(out.eta1[s], tensors.two[s], m, n));
  }
  for (const auto& [a, b] : sys.pairs) {
    const int ma = sys.mix.species[a].states;
    const int mb = sys.mix.species[b].states;
    out.eta2.push_back(eta2(sys, st, a, b));
    out.eta2_ab.push_back(eta2_oriented(out.eta2.back(), ma, mb, false));
    out.eta2_ba.push_back(eta2_oriented(out.eta2.back(), mb, ma, true));
    out.rho2x.push_back(rho2_cross_from(
        out.eta2_ab.back(), tensors.hop[a], tensors.hop[b],
        sys.mix.species[a].orbitals, sys.mix.species[b].orbitals,
        sys.mix.species[a].particles));
    out.rho2x_rev.push_back(rho2_cross_from(
        out.eta2_ba.back(), tensors.hop[b], tensors.hop[a],
        sys.mix.species[b].orbitals, sys.mix.species[a].orbitals,
        sys.mix.species[b].particles));
  }
  return out;
}

}  // namespace mlb
