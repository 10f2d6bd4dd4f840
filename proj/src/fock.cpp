#include "mlb/fock.hpp"

#include <algorithm>
#include <cmath>

#include "mlb/indexing.hpp"

namespace mlb {

std::int64_t bose_dimension(int particles, int modes) {
  if (particles < 0 || modes < 1)
    throw ConfigError("bose_dimension: need N >= 0 and m >= 1");
  // binom(N+m-1, m-1) by the multiplicative formula; the running value is
  // itself a binomial coefficient after each division, so the arithmetic
  // stays exact and only the multiply can overflow.
  std::int64_t result = 1;
  for (int i = 1; i <= modes - 1; ++i) {
    if (__builtin_mul_overflow(result, static_cast<std::int64_t>(particles + i),
                               &result))
      throw ResourceError("number-state basis size overflows 64-bit integer");
    result /= i;
  }
  return result;
}

NumberBasis::NumberBasis(int particles, int modes)
    : particles_(particles), modes_(modes) {
  const std::int64_t dim = bose_dimension(particles, modes);

  // Pascal triangle up to N+m, used by the combinatorial ranking.
  const int amax = particles_ + modes_;
  binom_.assign(static_cast<std::size_t>(amax + 1) * (modes_ + 1), 0);
  for (int a = 0; a <= amax; ++a) {
    binom_[a * (modes_ + 1) + 0] = 1;
    for (int b = 1; b <= std::min(a, modes_); ++b) {
      std::int64_t v = binom_[(a - 1) * (modes_ + 1) + b - 1];
      if (b <= a - 1) v += binom_[(a - 1) * (modes_ + 1) + b];
      binom_[a * (modes_ + 1) + b] = v;
    }
  }

  // Descending-lexicographic enumeration: each position sweeps its
  // occupation from the remaining budget down to zero.
  occ_.resize(dim, modes_);
  std::vector<int> n(modes_);
  std::int64_t row = 0;
  auto fill = [&](auto&& self, int pos, int rem) -> void {
    if (pos == modes_ - 1) {
      n[pos] = rem;
      for (int j = 0; j < modes_; ++j) occ_(row, j) = n[j];
      ++row;
      return;
    }
    for (int v = rem; v >= 0; --v) {
      n[pos] = v;
      self(self, pos + 1, rem - v);
    }
  };
  fill(fill, 0, particles_);
}

std::int64_t NumberBasis::index_of(const int* n) const {
  // Count the states preceding `n`: a state comes earlier iff it carries a
  // larger entry at the first position where the two differ, and the
  // completions of such a prefix sum to a single binomial coefficient by
  // the hockey-stick identity.
  std::int64_t rank = 0;
  int rem = particles_;
  for (int j = 0; j < modes_ - 1; ++j) {
    const int mrest = modes_ - 1 - j;
    if (rem > n[j]) rank += choose(rem - n[j] - 1 + mrest, mrest);
    rem -= n[j];
  }
  return rank;
}

MatrixXcd apply_hopping(const NumberBasis& basis, int j, int k,
                        const MatrixXcd& rows) {
  const int m = basis.modes();
  if (j < 0 || j >= m || k < 0 || k >= m)
    throw ConfigError("apply_hopping: mode index out of range");
  MatrixXcd out = MatrixXcd::Zero(rows.rows(), rows.cols());
  std::vector<int> n(m);
  for (std::int64_t s = 0; s < basis.size(); ++s) {
    auto occ = basis.occupations(s);
    if (j == k) {
      if (occ[j] > 0) out.col(s) += double(occ[j]) * rows.col(s);
      continue;
    }
    if (occ[k] == 0) continue;
    for (int i = 0; i < m; ++i) n[i] = occ[i];
    const double amp2 = double(n[k]) * (n[j] + 1);
    --n[k];
    ++n[j];
    out.col(basis.index_of(n.data())) += std::sqrt(amp2) * rows.col(s);
  }
  return out;
}

MatrixXcd apply_two_body(const NumberBasis& basis, int j, int k, int q, int p,
                         const MatrixXcd& rows) {
  const int m = basis.modes();
  if (j < 0 || j >= m || k < 0 || k >= m || q < 0 || q >= m || p < 0 || p >= m)
    throw ConfigError("apply_two_body: mode index out of range");
  MatrixXcd out = MatrixXcd::Zero(rows.rows(), rows.cols());
  std::vector<int> n(m);
  for (std::int64_t s = 0; s < basis.size(); ++s) {
    auto occ = basis.occupations(s);
    for (int i = 0; i < m; ++i) n[i] = occ[i];
    // Normal order, applied right to left: a_p, a_q, a^dag_k, a^dag_j.
    // The squared amplitude stays an exact integer product.
    if (n[p] == 0) continue;
    double amp2 = n[p];
    --n[p];
    if (n[q] == 0) continue;
    amp2 *= n[q];
    --n[q];
    amp2 *= n[k] + 1;
    ++n[k];
    amp2 *= n[j] + 1;
    ++n[j];
    out.col(basis.index_of(n.data())) += std::sqrt(amp2) * rows.col(s);
  }
  return out;
}

MatrixXcd hopping_matrix(const NumberBasis& basis, int j, int k,
                         const MatrixXcd& rows) {
  return rows.conjugate() * apply_hopping(basis, j, k, rows).transpose();
}

Complex transition_element(const NumberBasis& basis, const VectorXcd& bra,
                           const VectorXcd& ket, int j, int k) {
  MatrixXcd applied = apply_hopping(basis, j, k, ket.transpose());
  return (applied * bra.conjugate())(0, 0);
}

MatrixXcd hopping_tensor(const NumberBasis& basis, const MatrixXcd& rows) {
  const int m = basis.modes();
  MatrixXcd t(rows.rows() * rows.rows(), m * m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      t.col(j * m + k) = flatten_pairs(hopping_matrix(basis, j, k, rows));
  return t;
}

MatrixXcd two_body_tensor(const NumberBasis& basis, const MatrixXcd& rows) {
  const int m = basis.modes();
  MatrixXcd t(rows.rows() * rows.rows(), m * m * m * m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      for (int q = 0; q < m; ++q)
        for (int p = 0; p < m; ++p)
          t.col(((j * m + k) * m + q) * m + p) = flatten_pairs(
              rows.conjugate() *
              apply_two_body(basis, j, k, q, p, rows).transpose());
  return t;
}

}  // namespace mlb
