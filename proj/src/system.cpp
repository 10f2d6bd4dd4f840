#include "mlb/system.hpp"

namespace mlb {

std::vector<std::pair<int, int>> species_pairs(int count) {
  std::vector<std::pair<int, int>> p;
  for (int a = 0; a < count; ++a)
    for (int b = a + 1; b < count; ++b) p.emplace_back(a, b);
  return p;
}

System make_system(OneBodySpace space, MixtureSpec mix) {
  const int s = mix.count();
  if (s < 1) throw ConfigError("mixture needs at least one species");
  if (mix.g_inter.rows() != s || mix.g_inter.cols() != s)
    throw ConfigError("inter-species coupling matrix must be S x S");
  if ((mix.g_inter - mix.g_inter.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw ConfigError("inter-species coupling matrix must be symmetric");
  if (mix.g_inter.diagonal().cwiseAbs().maxCoeff() != 0.0)
    throw ConfigError(
        "inter-species coupling matrix must have a zero diagonal "
        "(intra-species strengths live on the species themselves)");

  System sys;
  sys.basis.reserve(s);
  sys.h_op.reserve(s);
  sys.top_dims.resize(s);
  for (int i = 0; i < s; ++i) {
    const auto& sp = mix.species[i];
    if (sp.particles < 1)
      throw ConfigError("species " + sp.name + ": needs at least one particle");
    if (sp.orbitals < 1 || sp.orbitals > space.dim())
      throw ConfigError("species " + sp.name +
                        ": orbital count must be in [1, space dimension]");
    sys.basis.emplace_back(sp.particles, sp.orbitals);
    const std::int64_t d = sys.basis.back().size();
    if (sp.states < 1 || sp.states > d)
      throw ConfigError("species " + sp.name +
                        ": species-state count must be in [1, " +
                        std::to_string(d) + "]");
    sys.top_dims[i] = sp.states;
    sys.h_op.push_back(space.one_body_matrix(mix.trap));
  }

  sys.top_strides.resize(s);
  Eigen::Index total = 1;
  for (int i = s - 1; i >= 0; --i) {
    sys.top_strides[i] = total;
    if (__builtin_mul_overflow(total, sys.top_dims[i], &total))
      throw ResourceError("top-layer tensor size overflows");
  }
  sys.top_size = total;

  sys.pairs = species_pairs(s);
  sys.space = std::move(space);
  sys.mix = std::move(mix);
  return sys;
}

}  // namespace mlb
