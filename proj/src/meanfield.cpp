#include "mlb/meanfield.hpp"

#include "mlb/indexing.hpp"

namespace mlb {

MeanFields compute_mean_fields(const System& sys, const MLState& st,
                               const LayerTensors& tensors) {
  const int count = sys.count();
  MeanFields mf;
  mf.h.reserve(count);
  mf.v.reserve(count);
  mf.etop.reserve(count);

  for (int s = 0; s < count; ++s) {
    const MatrixXcd& phi = st.spf[s];
    const int m = sys.mix.species[s].orbitals;

    mf.h.push_back(phi.conjugate() * sys.h_op[s] * phi.transpose());
    mf.intra.push_back(
        make_contact_fields(sys.space, phi, sys.mix.species[s].g));

    // field_elements rows pair (bra j, ket q), columns the field pair (k, p);
    // reorder to the two-body layout ((j,k),(q,p)).
    const MatrixXcd e = field_elements(sys.space, mf.intra[s], phi, phi);
    MatrixXcd v(m * m, m * m);
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int q = 0; q < m; ++q)
          for (int p = 0; p < m; ++p)
            v(pair_index(j, k, m), pair_index(q, p, m)) =
                e(pair_index(j, q, m), pair_index(k, p, m));
    mf.v.push_back(std::move(v));

    const VectorXcd eflat = tensors.hop[s] * flatten_pairs(mf.h[s]) +
                            0.5 * (tensors.two[s] * flatten_pairs(mf.v[s]));
    mf.etop.push_back(
        unflatten_pairs(eflat, sys.top_dims[s], sys.top_dims[s]));
  }

  for (const auto& [a, b] : sys.pairs) {
    const double g = sys.mix.g_inter(a, b);
    mf.cross_b.push_back(make_contact_fields(sys.space, st.spf[b], g));
    mf.cross_a.push_back(make_contact_fields(sys.space, st.spf[a], g));

    // e((j,k in a),(q,p in b)) = g Int conj(phi^a_j phi^b_q) phi^a_k phi^b_p
    const MatrixXcd e =
        field_elements(sys.space, mf.cross_b.back(), st.spf[a], st.spf[a]);
    mf.w_ab.push_back(e * tensors.hop[b].transpose());
    mf.w_ba.push_back(e.transpose() * tensors.hop[a].transpose());

    // x((s,t),(u,v)) with (s,t) species a and (u,v) species b; reorder to
    // the joint-pair layout ((s,u),(t,v)).
    const MatrixXcd x = tensors.hop[a] * mf.w_ab.back();
    const Eigen::Index ma = sys.top_dims[a];
    const Eigen::Index mb = sys.top_dims[b];
    MatrixXcd w(ma * mb, ma * mb);
    for (Eigen::Index s = 0; s < ma; ++s)
      for (Eigen::Index u = 0; u < mb; ++u)
        for (Eigen::Index t = 0; t < ma; ++t)
          for (Eigen::Index v = 0; v < mb; ++v)
            w(pair_index(s, u, mb), pair_index(t, v, mb)) =
                x(pair_index(s, t, ma), pair_index(u, v, mb));
    mf.wtop.push_back(std::move(w));
  }
  return mf;
}

MatrixXcd top_hamiltonian(const System& sys, const MeanFields& mf) {
  if (sys.top_size > 4096)
    throw ResourceError("dense top-layer Hamiltonian capped at 4096 states");
  MatrixXcd h = MatrixXcd::Zero(sys.top_size, sys.top_size);

  for (int s = 0; s < sys.count(); ++s) {
    const AxisView v = axis_view(sys, s);
    for (Eigen::Index o = 0; o < v.outer; ++o)
      for (Eigen::Index q = 0; q < v.inner; ++q) {
        const Eigen::Index base = o * v.extent * v.inner + q;
        for (Eigen::Index i = 0; i < v.extent; ++i)
          for (Eigen::Index j = 0; j < v.extent; ++j)
            h(base + i * v.inner, base + j * v.inner) += mf.etop[s](i, j);
      }
  }
  for (std::size_t p = 0; p < sys.pairs.size(); ++p) {
    const auto [a, b] = sys.pairs[p];
    const PairAxisView v = pair_axis_view(sys, a, b);
    for (Eigen::Index o = 0; o < v.pre; ++o)
      for (Eigen::Index m = 0; m < v.mid; ++m)
        for (Eigen::Index q = 0; q < v.post; ++q)
          for (Eigen::Index s = 0; s < v.first; ++s)
            for (Eigen::Index u = 0; u < v.second; ++u)
              for (Eigen::Index t = 0; t < v.first; ++t)
                for (Eigen::Index w = 0; w < v.second; ++w)
                  h(v.flat(o, s, m, u, q), v.flat(o, t, m, w, q)) +=
                      mf.wtop[p](pair_index(s, u, v.second),
                                 pair_index(t, w, v.second));
  }
  return h;
}

void apply_top(const System& sys, const MeanFields& mf, const VectorXcd& a,
               VectorXcd& out) {
  for (int s = 0; s < sys.count(); ++s) {
    const AxisView v = axis_view(sys, s);
    VectorXcd z(v.extent);
    for (Eigen::Index o = 0; o < v.outer; ++o)
      for (Eigen::Index q = 0; q < v.inner; ++q) {
        const Eigen::Index base = o * v.extent * v.inner + q;
        for (Eigen::Index i = 0; i < v.extent; ++i) z(i) = a(base + i * v.inner);
        const VectorXcd y = mf.etop[s] * z;
        for (Eigen::Index i = 0; i < v.extent; ++i)
          out(base + i * v.inner) += y(i);
      }
  }
  for (std::size_t p = 0; p < sys.pairs.size(); ++p) {
    const auto [sa, sb] = sys.pairs[p];
    const PairAxisView v = pair_axis_view(sys, sa, sb);
    VectorXcd z(v.first * v.second);
    for (Eigen::Index o = 0; o < v.pre; ++o)
      for (Eigen::Index m = 0; m < v.mid; ++m)
        for (Eigen::Index q = 0; q < v.post; ++q) {
          for (Eigen::Index s = 0; s < v.first; ++s)
            for (Eigen::Index u = 0; u < v.second; ++u)
              z(s * v.second + u) = a(v.flat(o, s, m, u, q));
          const VectorXcd y = mf.wtop[p] * z;
          for (Eigen::Index s = 0; s < v.first; ++s)
            for (Eigen::Index u = 0; u < v.second; ++u)
              out(v.flat(o, s, m, u, q)) += y(s * v.second + u);
        }
  }
}

double energy(const System& sys, const MLState& st) {
  const LayerTensors tensors = layer_tensors(sys, st);
  const MeanFields mf = compute_mean_fields(sys, st, tensors);
  VectorXcd ha = VectorXcd::Zero(sys.top_size);
  apply_top(sys, mf, st.top, ha);
  return st.top.dot(ha).real();
}

}  // namespace mlb
