#include "mlb/state.hpp"

#include <cmath>

namespace mlb {

MLState init_hartree(const System& sys) {
  MLState st;
  const int s = sys.count();
  st.coeff.resize(s);
  st.spf.resize(s);
  for (int i = 0; i < s; ++i) {
    const auto& sp = sys.mix.species[i];

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(sys.h_op[i]);
    st.spf[i] = es.eigenvectors().leftCols(sp.orbitals).transpose();

    // Species states: the condensate |N,0,...,0> (index 0 in the
    // descending-lexicographic order) plus unit number states.  They are
    // orthonormal because the condensate itself is a basis vector.
    st.coeff[i] = MatrixXcd::Zero(sp.states, sys.basis[i].size());
    for (int r = 0; r < sp.states; ++r) st.coeff[i](r, r) = 1.0;
  }
  st.top = VectorXcd::Zero(sys.top_size);
  st.top[0] = 1.0;
  return st;
}

double norm(const MLState& state) { return state.top.norm(); }

void normalize(MLState& state) {
  const double n = norm(state);
  if (n == 0.0) throw NumericalError("cannot normalize a zero state");
  state.top /= n;
}

namespace {

double gram_residual(const MatrixXcd& rows) {
  MatrixXcd g = rows.conjugate() * rows.transpose();
  g -= MatrixXcd::Identity(rows.rows(), rows.rows());
  return g.cwiseAbs().maxCoeff();
}

void gram_schmidt_rows(MatrixXcd& rows) {
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const Complex overlap = rows.row(j).conjugate().cwiseProduct(rows.row(i)).sum();
      rows.row(i) -= overlap * rows.row(j);
    }
    const double n = rows.row(i).norm();
    if (n < 1e-14)
      throw NumericalError("orthonormalization hit a linearly dependent row");
    rows.row(i) /= n;
  }
}

}  // namespace

double orthonormality_residual(const MLState& state) {
  double r = 0.0;
  for (const auto& c : state.coeff) r = std::max(r, gram_residual(c));
  for (const auto& p : state.spf) r = std::max(r, gram_residual(p));
  return r;
}

void orthonormalize(MLState& state) {
  for (auto& c : state.coeff) gram_schmidt_rows(c);
  for (auto& p : state.spf) gram_schmidt_rows(p);
}

Eigen::Index flat_size(const MLState& state) {
  Eigen::Index n = state.top.size();
  for (const auto& c : state.coeff) n += c.size();
  for (const auto& p : state.spf) n += p.size();
  return n;
}

VectorXcd flatten(const MLState& state) {
  VectorXcd flat(flat_size(state));
  Eigen::Index at = 0;
  flat.segment(at, state.top.size()) = state.top;
  at += state.top.size();
  for (const auto& c : state.coeff) {
    flat.segment(at, c.size()) = Eigen::Map<const VectorXcd>(c.data(), c.size());
    at += c.size();
  }
  for (const auto& p : state.spf) {
    flat.segment(at, p.size()) = Eigen::Map<const VectorXcd>(p.data(), p.size());
    at += p.size();
  }
  return flat;
}

void unflatten(const VectorXcd& flat, MLState& state) {
  if (flat.size() != flat_size(state))
    throw NumericalError("flat vector does not match state shape");
  Eigen::Index at = 0;
  state.top = flat.segment(at, state.top.size());
  at += state.top.size();
  for (auto& c : state.coeff) {
    Eigen::Map<VectorXcd>(c.data(), c.size()) = flat.segment(at, c.size());
    at += c.size();
  }
  for (auto& p : state.spf) {
    Eigen::Map<VectorXcd>(p.data(), p.size()) = flat.segment(at, p.size());
    at += p.size();
  }
}

MLState zeros_like(const MLState& state) {
  MLState z = state;
  z.top.setZero();
  for (auto& c : z.coeff) c.setZero();
  for (auto& p : z.spf) p.setZero();
  return z;
}

}  // namespace mlb
