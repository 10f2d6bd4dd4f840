#include "mlb/observables.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "mlb/indexing.hpp"
#include "mlb/meanfield.hpp"

namespace mlb {

namespace {

constexpr double kMarginalFloor = 1e-8;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// sum_{jkqp} rho2((j,k),(q,p)) A(j,p) B(k,q) — the quadrant contraction of
// a same-species two-body density against two restricted overlaps.
double quadrant_same(const MatrixXcd& rho2, const MatrixXcd& a,
                     const MatrixXcd& b) {
  const int m = int(a.rows());
  Complex sum = 0.0;
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      for (int q = 0; q < m; ++q)
        for (int p = 0; p < m; ++p)
          sum += rho2(pair_index(j, k, m), pair_index(q, p, m)) * a(j, p) *
                 b(k, q);
  return sum.real();
}

// sum rho2x((j,k),(q,p)) A(j,q) B(k,p) for an ordered cross pair.
double quadrant_cross(const MatrixXcd& rho2x, const MatrixXcd& a,
                      const MatrixXcd& b) {
  const int ma = int(a.rows());
  const int mb = int(b.rows());
  Complex sum = 0.0;
  for (int j = 0; j < ma; ++j)
    for (int k = 0; k < mb; ++k)
      for (int q = 0; q < ma; ++q)
        for (int p = 0; p < mb; ++p)
          sum += rho2x(pair_index(j, k, mb), pair_index(q, p, mb)) * a(j, q) *
                 b(k, p);
  return sum.real();
}

std::array<double, 4> renormalized(std::array<double, 4> q) {
  const double total = q[0] + q[1] + q[2] + q[3];
  if (std::abs(total) < 1e-12) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan, nan};
  }
  for (double& v : q) v /= total;
  return q;
}

}  // namespace

VectorXd position_density(const OneBodySpace& space, const MatrixXcd& rho1,
                          const MatrixXcd& phi) {
  const MatrixXcd rows = space.to_grid(phi);
  VectorXd masses(rows.cols());
  for (Eigen::Index i = 0; i < rows.cols(); ++i)
    masses(i) = (rows.col(i).conjugate().transpose() * rho1 * rows.col(i))
                    .value()
                    .real();
  return masses;
}

double well_probability(const OneBodySpace& space, const VectorXd& masses,
                        int side) {
  const VectorXd& x = space.grid().nodes;
  double p = 0.0;
  for (Eigen::Index i = 0; i < masses.size(); ++i)
    if ((side < 0 && x(i) < 0.0) || (side > 0 && x(i) > 0.0)) p += masses(i);
  return p;
}

MatrixXcd left_overlap(const OneBodySpace& space, const MatrixXcd& phi) {
  const MatrixXcd rows = space.to_grid(phi);
  const VectorXd& x = space.grid().nodes;
  MatrixXcd o = MatrixXcd::Zero(phi.rows(), phi.rows());
  for (Eigen::Index i = 0; i < rows.cols(); ++i)
    if (x(i) < 0.0) o.noalias() += rows.col(i).conjugate() * rows.col(i).transpose();
  return o;
}

std::array<double, 4> quadrant_probabilities_same(const MatrixXcd& rho2,
                                                  const MatrixXcd& oleft) {
  const MatrixXcd oright =
      MatrixXcd::Identity(oleft.rows(), oleft.cols()) - oleft;
  return renormalized({quadrant_same(rho2, oleft, oleft),
                       quadrant_same(rho2, oleft, oright),
                       quadrant_same(rho2, oright, oleft),
                       quadrant_same(rho2, oright, oright)});
}

std::array<double, 4> quadrant_probabilities_cross(const MatrixXcd& rho2x,
                                                   const MatrixXcd& oleft_a,
                                                   const MatrixXcd& oleft_b) {
  const MatrixXcd oright_a =
      MatrixXcd::Identity(oleft_a.rows(), oleft_a.cols()) - oleft_a;
  const MatrixXcd oright_b =
      MatrixXcd::Identity(oleft_b.rows(), oleft_b.cols()) - oleft_b;
  return renormalized({quadrant_cross(rho2x, oleft_a, oleft_b),
                       quadrant_cross(rho2x, oleft_a, oright_b),
                       quadrant_cross(rho2x, oright_a, oleft_b),
                       quadrant_cross(rho2x, oright_a, oright_b)});
}

std::tuple<double, double, double> correlation_f(double p_ll, double p_rr,
                                                 double pl_a, double pr_a,
                                                 double pl_b, double pr_b) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (std::min({pl_a, pr_a, pl_b, pr_b}) < kMarginalFloor ||
      std::isnan(p_ll) || std::isnan(p_rr))
    return {nan, nan, nan};
  const double f_ll = p_ll / (pl_a * pl_b);
  const double f_rr = p_rr / (pr_a * pr_b);
  return {f_ll, f_rr, std::sqrt(0.5 * (f_ll * f_ll + f_rr * f_rr))};
}

ObservableRecord make_record(const System& sys, const MLState& st,
                             double regularization) {
  const LayerTensors tensors = layer_tensors(sys, st);
  const DensitySet dens = compute_densities(sys, st, tensors, regularization);
  const MeanFields mf = compute_mean_fields(sys, st, tensors);

  ObservableRecord rec;
  rec.t = st.time;
  rec.norm = norm(st);
  rec.ortho_residual = orthonormality_residual(st);
  VectorXcd ha = VectorXcd::Zero(sys.top_size);
  apply_top(sys, mf, st.top, ha);
  rec.energy = st.top.dot(ha).real();

  std::vector<MatrixXcd> oleft(sys.count());
  for (int s = 0; s < sys.count(); ++s) {
    oleft[s] = left_overlap(sys.space, st.spf[s]);
    SpeciesObservables so;
    const VectorXd masses = position_density(sys.space, dens.rho1[s], st.spf[s]);
    so.p_left = well_probability(sys.space, masses, -1);
    so.p_right = well_probability(sys.space, masses, +1);
    const VectorXd nr = natural_populations(dens.rho1[s]);
    const VectorXd ne = natural_populations(dens.eta1[s]);
    for (int k = 0; k < 3; ++k) {
      so.nat_rho[k] = k < nr.size() ? nr(k) : 0.0;
      so.nat_eta[k] = k < ne.size() ? ne(k) : 0.0;
    }
    rec.species.push_back(so);
  }

  // same-species pairs first in species order, then cross pairs
  for (int s = 0; s < sys.count(); ++s) {
    PairObservables po;
    po.a = po.b = s;
    std::array<double, 4> q;
    if (sys.mix.species[s].particles >= 2) {
      q = quadrant_probabilities_same(dens.rho2s[s], oleft[s]);
    } else {
      q.fill(std::numeric_limits<double>::quiet_NaN());
    }
    po.p_ll = q[0];
    po.p_rr = q[3];
    std::tie(po.f_ll, po.f_rr, po.f) = correlation_f(
        q[0], q[3], rec.species[s].p_left, rec.species[s].p_right,
        rec.species[s].p_left, rec.species[s].p_right);
    rec.pairs.push_back(po);
  }
  for (std::size_t p = 0; p < sys.pairs.size(); ++p) {
    const auto [a, b] = sys.pairs[p];
    PairObservables po;
    po.a = a;
    po.b = b;
    const std::array<double, 4> q =
        quadrant_probabilities_cross(dens.rho2x[p], oleft[a], oleft[b]);
    po.p_ll = q[0];
    po.p_rr = q[3];
    std::tie(po.f_ll, po.f_rr, po.f) = correlation_f(
        q[0], q[3], rec.species[a].p_left, rec.species[a].p_right,
        rec.species[b].p_left, rec.species[b].p_right);
    rec.pairs.push_back(po);
  }
  return rec;
}

std::string csv_header(const System& sys) {
  std::string h = "t";
  for (const auto& sp : sys.mix.species) {
    const std::string& n = sp.name;
    h += ",P_L_" + n + ",P_R_" + n;
    for (int k = 1; k <= 3; ++k) h += ",rho_nat" + std::to_string(k) + "_" + n;
    for (int k = 1; k <= 3; ++k) h += ",eta_nat" + std::to_string(k) + "_" + n;
  }
  auto pair_cols = [&](const std::string& a, const std::string& b) {
    const std::string t = "_" + a + "_" + b;
    return ",P_LL" + t + ",P_RR" + t + ",f_LL" + t + ",f_RR" + t + ",f" + t;
  };
  for (const auto& sp : sys.mix.species) h += pair_cols(sp.name, sp.name);
  for (const auto& [a, b] : sys.pairs)
    h += pair_cols(sys.mix.species[a].name, sys.mix.species[b].name);
  return h + ",norm,energy,ortho_residual";
}

std::string csv_row(const ObservableRecord& rec) {
  std::string row = fmt(rec.t);
  for (const auto& so : rec.species) {
    row += "," + fmt(so.p_left) + "," + fmt(so.p_right);
    for (double v : so.nat_rho) row += "," + fmt(v);
    for (double v : so.nat_eta) row += "," + fmt(v);
  }
  for (const auto& po : rec.pairs) {
    row += "," + fmt(po.p_ll) + "," + fmt(po.p_rr) + "," + fmt(po.f_ll) +
           "," + fmt(po.f_rr) + "," + fmt(po.f);
  }
  row += "," + fmt(rec.norm) + "," + fmt(rec.energy) + "," +
         fmt(rec.ortho_residual);
  return row;
}

}  // namespace mlb
