#include "mlb/onebody.hpp"

#include "mlb/indexing.hpp"

namespace mlb {

OneBodySpace OneBodySpace::whole(Grid grid) {
  OneBodySpace s;
  s.truncated_ = false;
  s.grid_ = std::move(grid);
  return s;
}

OneBodySpace OneBodySpace::span(Grid grid, MatrixXcd modes) {
  if (modes.cols() != grid.size())
    throw ConfigError("mode vectors do not match the grid size");
  const int k = int(modes.rows());
  if (k < 1 || k > grid.size())
    throw ConfigError("mode count out of range");
  MatrixXcd overlap = modes.conjugate() * modes.transpose();
  if ((overlap - MatrixXcd::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-10)
    throw ConfigError("mode vectors must be orthonormal");

  OneBodySpace s;
  s.truncated_ = true;
  s.kernel_.resize(k * k, k * k);
  // K(ab, cd) = sum_i conj(V_a V_b) V_c V_d / w_i: one quadrature pass
  // per (a,c) against all (b,d) via a single product with the weights.
  const int n = grid.size();
  MatrixXcd scaled(k, n);
  for (int a = 0; a < k; ++a)
    scaled.row(a) = modes.row(a).array() / grid.weights.transpose().array();
  for (int a = 0; a < k; ++a)
    for (int c = 0; c < k; ++c) {
      VectorXcd ac =
          (scaled.row(a).conjugate().array() * modes.row(c).array()).matrix();
      // rows (b), cols (d): sum_i conj(V_b)_i V_d_i ac_i
      MatrixXcd bd = modes.conjugate() * ac.asDiagonal() * modes.transpose();
      for (int b = 0; b < k; ++b)
        for (int d = 0; d < k; ++d)
          s.kernel_(pair_index(a, b, k), pair_index(c, d, k)) = bd(b, d);
    }
  s.grid_ = std::move(grid);
  s.modes_ = std::move(modes);
  return s;
}

MatrixXcd OneBodySpace::one_body_matrix(const TrapSpec& trap) const {
  MatrixXd h = one_body_hamiltonian(grid_, trap);
  if (!truncated_) return h.cast<Complex>();
  return modes_.conjugate() * h * modes_.transpose();
}

MatrixXcd OneBodySpace::to_grid(const MatrixXcd& rows) const {
  if (!truncated_) return rows;
  return rows * modes_;
}

MatrixXcd contact_integrals(const OneBodySpace& space, const MatrixXcd& F,
                            const MatrixXcd& G) {
  const int mf = int(F.rows()), mg = int(G.rows());
  MatrixXcd out(mf * mg, mf * mg);
  if (!space.truncated()) {
    const auto& w = space.grid().weights;
    const int n = space.grid().size();
    // P(ac, bd) = sum_i conj(F_a)F_c/w * conj(G_b)G_d, then repair the
    // pairing to rows (a,b), columns (c,d).
    MatrixXcd fa(mf * mf, n), gb(mg * mg, n);
    for (int a = 0; a < mf; ++a)
      for (int c = 0; c < mf; ++c)
        fa.row(pair_index(a, c, mf)) = (F.row(a).conjugate().array() *
                                        F.row(c).array() /
                                        w.transpose().array())
                                           .matrix();
    for (int b = 0; b < mg; ++b)
      for (int d = 0; d < mg; ++d)
        gb.row(pair_index(b, d, mg)) =
            (G.row(b).conjugate().array() * G.row(d).array()).matrix();
    MatrixXcd p = fa * gb.transpose();
    for (int a = 0; a < mf; ++a)
      for (int b = 0; b < mg; ++b)
        for (int c = 0; c < mf; ++c)
          for (int d = 0; d < mg; ++d)
            out(pair_index(a, b, mg), pair_index(c, d, mg)) =
                p(pair_index(a, c, mf), pair_index(b, d, mg));
    return out;
  }
  // Truncated space: contract the kernel, J = conj(F x G) K (F x G)^T.
  const int k = space.dim();
  MatrixXcd kron(mf * mg, k * k);
  for (int a = 0; a < mf; ++a)
    for (int b = 0; b < mg; ++b)
      for (int al = 0; al < k; ++al)
        for (int be = 0; be < k; ++be)
          kron(pair_index(a, b, mg), pair_index(al, be, k)) =
              F(a, al) * G(b, be);
  out = kron.conjugate() * space.contact_kernel() * kron.transpose();
  return out;
}

ContactFields make_contact_fields(const OneBodySpace& space, const MatrixXcd& U,
                                  double g) {
  const int mu = int(U.rows());
  ContactFields f;
  f.source_count = mu;
  if (!space.truncated()) {
    const int n = space.grid().size();
    const auto& w = space.grid().weights;
    f.fields.resize(mu * mu, n);
    for (int a = 0; a < mu; ++a)
      for (int b = 0; b < mu; ++b)
        f.fields.row(pair_index(a, b, mu)) =
            g * (U.row(a).conjugate().array() * U.row(b).array() /
                 w.transpose().array())
                    .matrix();
    return f;
  }
  const int k = space.dim();
  const auto& kernel = space.contact_kernel();
  f.ops.resize(mu * mu);
  for (int a = 0; a < mu; ++a)
    for (int b = 0; b < mu; ++b) {
      MatrixXcd op = MatrixXcd::Zero(k, k);
      for (int al = 0; al < k; ++al)
        for (int ga = 0; ga < k; ++ga) {
          Complex acc = 0.0;
          for (int be = 0; be < k; ++be)
            for (int de = 0; de < k; ++de)
              acc += std::conj(U(a, be)) * U(b, de) *
                     kernel(pair_index(al, be, k), pair_index(ga, de, k));
          op(al, ga) = g * acc;
        }
      f.ops[pair_index(a, b, mu)] = std::move(op);
    }
  return f;
}

MatrixXcd field_elements(const OneBodySpace& space, const ContactFields& f,
                         const MatrixXcd& bra, const MatrixXcd& ket) {
  const int mb = int(bra.rows()), mk = int(ket.rows());
  const int mu = f.source_count;
  MatrixXcd e(mb * mk, mu * mu);
  if (!space.truncated()) {
    MatrixXcd p(mb * mk, bra.cols());
    for (int j = 0; j < mb; ++j)
      for (int q = 0; q < mk; ++q)
        p.row(pair_index(j, q, mk)) =
            (bra.row(j).conjugate().array() * ket.row(q).array()).matrix();
    e = p * f.fields.transpose();
    return e;
  }
  for (int ab = 0; ab < mu * mu; ++ab) {
    MatrixXcd m = bra.conjugate() * f.ops[ab] * ket.transpose();
    e.col(ab) = flatten_pairs(m);
  }
  return e;
}

MatrixXcd field_apply(const OneBodySpace& space, const ContactFields& f,
                      const MatrixXcd& S, const MatrixXcd& V) {
  const int mu = f.source_count;
  const int mv = int(V.rows());
  const int mi = int(S.rows());
  MatrixXcd out = MatrixXcd::Zero(mi, V.cols());
  for (int ab = 0; ab < mu * mu; ++ab) {
    MatrixXcd comb = S.middleCols(Eigen::Index(ab) * mv, mv) * V;  // mi x dim
    if (!space.truncated())
      out.array() += comb.array().rowwise() * f.fields.row(ab).array();
    else
      out += comb * f.ops[ab].transpose();
  }
  return out;
}

}  // namespace mlb
