#pragma once

#include <vector>

#include "mlb/grid.hpp"

namespace mlb {

// The one-body space orbitals live in.  Either the whole DVR grid
// (coefficients indexed by node) or the span of a fixed set of
// orthonormal grid vectors ("modes"); the latter turns the method into
// an exact full-configuration calculation when every layer is saturated
// and is what the dense reference propagator is compared against.
class OneBodySpace {
 public:
  OneBodySpace() = default;  // empty space; fill via whole() or span()
  static OneBodySpace whole(Grid grid);
  static OneBodySpace span(Grid grid, MatrixXcd modes);  // rows orthonormal

  bool truncated() const { return truncated_; }
  int dim() const { return truncated_ ? int(modes_.rows()) : grid_.size(); }
  const Grid& grid() const { return grid_; }
  const MatrixXcd& modes() const { return modes_; }

  // Kinetic plus trap potential, as a matrix over this space.
  MatrixXcd one_body_matrix(const TrapSpec& trap) const;

  // Rows of coefficient vectors in this space -> rows of grid coefficient
  // vectors (identity for a whole-grid space).
  MatrixXcd to_grid(const MatrixXcd& rows) const;

  // Contact kernel of a truncated space: K(ab, cd) = sum_i over nodes of
  // conj(V_a V_b) V_c V_d / w_i, with pair columns (a,b) -> a*k+b.
  const MatrixXcd& contact_kernel() const { return kernel_; }

 private:
  bool truncated_ = false;
  Grid grid_;
  MatrixXcd modes_;   // k x n, rows orthonormal w.r.t. coefficient dot product
  MatrixXcd kernel_;  // k^2 x k^2
};

// All contact integrals <f_a g_b | delta | f_c g_d> between two row
// families (f over F's rows, g over G's rows), as a matrix with row pair
// (a,b) and column pair (c,d).  On the grid this is the quadrature sum
// sum_i conj(F_a G_b) F_c G_d / w_i; a truncated space contracts its
// precomputed kernel instead.
MatrixXcd contact_integrals(const OneBodySpace& space, const MatrixXcd& F,
                            const MatrixXcd& G);

// The family of local product operators g * conj(U_a) U_b delta(x - x')
// generated by one set of orbitals.  On the grid each member is a
// diagonal field over the nodes; on a truncated space a dense dim x dim
// matrix.  Built once per derivative evaluation and reused by every
// matrix element and operator application that involves the pair
// potential of U's species.
struct ContactFields {
  int source_count = 0;        // number of rows of U
  MatrixXcd fields;            // grid: (mU^2) x n, row (a,b) = g conj(U_a) U_b / w
  std::vector<MatrixXcd> ops;  // truncated: mU^2 dense operators
};

ContactFields make_contact_fields(const OneBodySpace& space, const MatrixXcd& U,
                                  double g);

// E(jq, ab) = <bra_j | f_ab | ket_q>, rows paired (j,q), columns (a,b).
MatrixXcd field_elements(const OneBodySpace& space, const ContactFields& f,
                         const MatrixXcd& bra, const MatrixXcd& ket);

// out.row(i) = sum_{a,b,p} S(i, (a*mU+b)*mV + p) * f_ab applied to V_p.
MatrixXcd field_apply(const OneBodySpace& space, const ContactFields& f,
                      const MatrixXcd& S, const MatrixXcd& V);

}  // namespace mlb
