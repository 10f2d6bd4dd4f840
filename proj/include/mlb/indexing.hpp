#pragma once

#include "mlb/common.hpp"

namespace mlb {

// Flattening convention for paired indices used throughout: the pair
// (a, b) with b running over nb values maps to a*nb + b (second index
// fastest).  Four-index tensors are stored as matrices over such pairs,
// e.g. rho2(jk, qp) or W(ab, cd).
inline Eigen::Index pair_index(Eigen::Index a, Eigen::Index b, Eigen::Index nb) {
  return a * nb + b;
}

// Row-major flattening of a matrix into a vector following the same
// convention: out[pair_index(r, c, cols)] = x(r, c).
inline VectorXcd flatten_pairs(const MatrixXcd& x) {
  VectorXcd out(x.size());
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c) out[r * x.cols() + c] = x(r, c);
  return out;
}

inline MatrixXcd unflatten_pairs(const VectorXcd& v, Eigen::Index rows,
                                 Eigen::Index cols) {
  MatrixXcd out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = v[r * cols + c];
  return out;
}

}  // namespace mlb
