#pragma once

#include <cstdint>
#include <vector>

#include "mlb/common.hpp"

namespace mlb {

// Number of bosonic occupation vectors of m modes holding N particles,
// binom(N+m-1, m-1).  Throws ResourceError if the count does not fit in
// a signed 64-bit integer.
std::int64_t bose_dimension(int particles, int modes);

// Enumerated basis of bosonic number states |n_1 ... n_m> with
// sum_j n_j = N, ordered descending-lexicographically: (N,0,...,0) has
// index 0, (0,...,0,N) comes last.  Ranking is combinatorial (a perfect
// hash), so index lookups cost O(m) with a precomputed binomial table.
class NumberBasis {
 public:
  NumberBasis(int particles, int modes);

  int particles() const { return particles_; }
  int modes() const { return modes_; }
  std::int64_t size() const { return occ_.rows(); }

  // Occupation vector of basis state `index` (row view, length m).
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>::ConstRowXpr
  occupations(std::int64_t index) const {
    return occ_.row(index);
  }

  // Inverse of `occupations`; `n` must sum to N.
  std::int64_t index_of(const int* n) const;

 private:
  int particles_, modes_;
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> occ_;
  std::vector<std::int64_t> binom_;  // Pascal table, (N+m+1) x (m+1)
  std::int64_t choose(int a, int b) const {
    return (b < 0 || b > a) ? 0 : binom_[a * (modes_ + 1) + b];
  }
};

// Rows of `rows` are coefficient vectors over `basis`.  Returns the rows
// with a^dag_j a_k applied (0-based mode indices); the scatter runs over
// the basis without ever forming the dense operator.
MatrixXcd apply_hopping(const NumberBasis& basis, int j, int k,
                        const MatrixXcd& rows);

// Same for the normal-ordered two-body operator a^dag_j a^dag_k a_q a_p.
MatrixXcd apply_two_body(const NumberBasis& basis, int j, int k, int q, int p,
                         const MatrixXcd& rows);

// Matrix T with T(u,v) = <row_u | a^dag_j a_k | row_v> for the given
// coefficient rows.
MatrixXcd hopping_matrix(const NumberBasis& basis, int j, int k,
                         const MatrixXcd& rows);

// <bra | a^dag_j a_k | ket> for two single coefficient vectors.
Complex transition_element(const NumberBasis& basis, const VectorXcd& bra,
                           const VectorXcd& ket, int j, int k);

// All hopping matrix elements at once: returns an (M^2) x (m^2) matrix
// T with T(u*M+v, j*m+k) = <row_u | a^dag_j a_k | row_v>.  This is the
// workhorse shared by the density and mean-field assemblies.
MatrixXcd hopping_tensor(const NumberBasis& basis, const MatrixXcd& rows);

// Two-body counterpart, (M^2) x (m^4) with columns indexed by
// ((j*m+k)*m+q)*m+p.
MatrixXcd two_body_tensor(const NumberBasis& basis, const MatrixXcd& rows);

}  // namespace mlb
