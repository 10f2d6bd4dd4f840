#include <doctest.h>

#include <cmath>
#include <vector>

#include "mlb/indexing.hpp"
#include "mlb/meanfield.hpp"
#include "mlb/oracle.hpp"
#include "support/testkit.hpp"

using namespace mlb;

TEST_SUITE("meanfield") {
  TEST_CASE("orbital and species matrix elements have the right symmetries") {
    const System sys = testkit::three_species_system();
    const MLState st = testkit::random_state(sys);
    const LayerTensors tensors = layer_tensors(sys, st);
    const MeanFields mf = compute_mean_fields(sys, st, tensors);

    for (int s = 0; s < sys.count(); ++s) {
      const int m = sys.mix.species[s].orbitals;
      CHECK((mf.h[s] - mf.h[s].adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((mf.etop[s] - mf.etop[s].adjoint()).cwiseAbs().maxCoeff() <=
            1e-12);
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int q = 0; q < m; ++q)
            for (int p = 0; p < m; ++p) {
              const Complex v =
                  mf.v[s](pair_index(j, k, m), pair_index(q, p, m));
              // bosonic exchange of the two legs
              CHECK(std::abs(v - mf.v[s](pair_index(k, j, m),
                                         pair_index(p, q, m))) <= 1e-13);
              // hermiticity of the pair potential
              CHECK(std::abs(v - std::conj(mf.v[s](pair_index(q, p, m),
                                                   pair_index(j, k, m)))) <=
                    1e-13);
            }
    }

    for (std::size_t i = 0; i < sys.pairs.size(); ++i) {
      const auto [a, b] = sys.pairs[i];
      const int ma = sys.mix.species[a].orbitals;
      const int mb = sys.mix.species[b].orbitals;
      const Eigen::Index sa = sys.top_dims[a], sb = sys.top_dims[b];
      for (int j = 0; j < ma; ++j)
        for (int k = 0; k < ma; ++k)
          for (Eigen::Index u = 0; u < sb; ++u)
            for (Eigen::Index v = 0; v < sb; ++v)
              CHECK(std::abs(mf.w_ab[i](pair_index(j, k, ma),
                                        pair_index(u, v, sb)) -
                             std::conj(mf.w_ab[i](pair_index(k, j, ma),
                                                  pair_index(v, u, sb)))) <=
                    1e-12);
      for (int j = 0; j < mb; ++j)
        for (int k = 0; k < mb; ++k)
          for (Eigen::Index u = 0; u < sa; ++u)
            for (Eigen::Index v = 0; v < sa; ++v)
              CHECK(std::abs(mf.w_ba[i](pair_index(j, k, mb),
                                        pair_index(u, v, sa)) -
                             std::conj(mf.w_ba[i](pair_index(k, j, mb),
                                                  pair_index(v, u, sa)))) <=
                    1e-12);
      CHECK((mf.wtop[i] - mf.wtop[i].adjoint()).cwiseAbs().maxCoeff() <=
            1e-12);
    }
  }

  TEST_CASE("condensate contact element is g over sqrt(2 pi)") {
    MixtureSpec mix;
    mix.species = {{"A", 3, 2, 2, 0.7}};
    mix.g_inter = MatrixXd::Zero(1, 1);
    mix.trap.harmonic = 0.5;  // unit frequency
    const System sys =
        make_system(OneBodySpace::whole(harmonic_dvr(80)), mix);
    const MLState st = init_hartree(sys);
    const LayerTensors tensors = layer_tensors(sys, st);
    const MeanFields mf = compute_mean_fields(sys, st, tensors);
    const double ref = 0.7 / std::sqrt(2.0 * M_PI);
    CHECK(std::abs(mf.v[0](0, 0) - ref) <= 1e-8);
  }

  TEST_CASE("dense top hamiltonian matches the matrix-free apply") {
    const System sys = testkit::three_species_system();
    const MLState st = testkit::random_state(sys);
    const LayerTensors tensors = layer_tensors(sys, st);
    const MeanFields mf = compute_mean_fields(sys, st, tensors);

    const MatrixXcd h = top_hamiltonian(sys, mf);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);

    const VectorXcd a = testkit::random_vector(sys.top_size);
    VectorXcd out = VectorXcd::Zero(sys.top_size);
    apply_top(sys, mf, a, out);
    CHECK((h * a - out).cwiseAbs().maxCoeff() <= 1e-12);

    CHECK(std::abs(energy(sys, st) - st.top.dot(h * st.top).real()) <= 1e-12);
  }

  TEST_CASE("energy matches the exact sparse hamiltonian") {
    const System sys = testkit::three_species_system();
    const FullCIBasis fc = make_fullci_basis(sys.space, sys.mix);
    const SparseXcd h = build_fullci_hamiltonian(sys.mix, fc);
    for (int trial = 0; trial < 3; ++trial) {
      const MLState st = testkit::random_state(sys);
      const VectorXcd psi = testkit::fullci_vector(sys, st, fc);
      const double ref = psi.dot(h * psi).real();
      CHECK(std::abs(energy(sys, st) - ref) <=
            1e-10 * std::max(1.0, std::abs(ref)));
    }
  }

  TEST_CASE("hartree-product energy agrees with direct quadrature") {
    MixtureSpec mix;
    mix.species = {{"A", 3, 2, 2, 0.4}, {"B", 2, 2, 2, 0.25}};
    mix.g_inter = MatrixXd::Zero(2, 2);
    mix.g_inter(0, 1) = mix.g_inter(1, 0) = 0.15;
    mix.trap.harmonic = 1.0;
    const Grid g = harmonic_dvr(80);
    const System sys = make_system(OneBodySpace::whole(g), mix);
    const MLState st = init_hartree(sys);

    const MatrixXd hgrid = one_body_hamiltonian(g, mix.trap);
    double ref = 0.0;
    std::vector<VectorXcd> phi0;
    for (int s = 0; s < 2; ++s) {
      const VectorXcd f = st.spf[s].row(0).transpose();
      const double n = mix.species[s].particles;
      const double h00 = (f.conjugate().transpose() * hgrid * f)(0).real();
      double i4 = 0.0;
      for (int i = 0; i < g.size(); ++i)
        i4 += std::pow(std::abs(f(i)), 4) / g.weights(i);
      ref += n * h00 + 0.5 * mix.species[s].g * n * (n - 1.0) * i4;
      phi0.push_back(f);
    }
    double i22 = 0.0;
    for (int i = 0; i < g.size(); ++i)
      i22 += std::norm(phi0[0](i)) * std::norm(phi0[1](i)) / g.weights(i);
    ref += mix.g_inter(0, 1) * 3.0 * 2.0 * i22;

    CHECK(std::abs(energy(sys, st) - ref) <= 1e-10);
  }

  TEST_CASE("interaction blocks vanish when every coupling is zero") {
    System sys = testkit::three_species_system();
    MixtureSpec mix = sys.mix;
    for (auto& sp : mix.species) sp.g = 0.0;
    mix.g_inter.setZero();
    sys = make_system(sys.space, mix);
    const MLState st = testkit::random_state(sys);
    const LayerTensors tensors = layer_tensors(sys, st);
    const MeanFields mf = compute_mean_fields(sys, st, tensors);
    for (int s = 0; s < sys.count(); ++s)
      CHECK(mf.v[s].cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t i = 0; i < sys.pairs.size(); ++i) {
      CHECK(mf.w_ab[i].cwiseAbs().maxCoeff() == 0.0);
      CHECK(mf.wtop[i].cwiseAbs().maxCoeff() == 0.0);
    }
  }

  TEST_CASE("dense top hamiltonian refuses oversized tops") {
    MixtureSpec mix;
    mix.species = {{"A", 16, 2, 17, 0.0},
                   {"B", 16, 2, 17, 0.0},
                   {"C", 16, 2, 17, 0.0}};
    mix.g_inter = MatrixXd::Zero(3, 3);
    mix.trap.harmonic = 0.5;
    const System sys =
        make_system(OneBodySpace::whole(harmonic_dvr(8)), mix);
    CHECK(sys.top_size == 17 * 17 * 17);
    const MLState st = init_hartree(sys);
    const LayerTensors tensors = layer_tensors(sys, st);
    const MeanFields mf = compute_mean_fields(sys, st, tensors);
    CHECK_THROWS_AS(top_hamiltonian(sys, mf), ResourceError);
  }
}
