#include "mlb/config.hpp"

#include <json.hpp>

namespace mlb {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (item.key() == a) {
        known = true;
        break;
      }
    if (!known) fail(path, "unknown key \"" + item.key() + "\"");
  }
}

double number_at(const json& obj, const std::string& path,
                 const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "/" + key, "expected a number");
  return v.get<double>();
}

std::int64_t integer_at(const json& obj, const std::string& path,
                        const std::string& key, std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "/" + key, "expected an integer");
  return v.get<std::int64_t>();
}

std::string string_at(const json& obj, const std::string& path,
                      const std::string& key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

void require_positive(double v, const std::string& path) {
  if (!(v > 0.0)) fail(path, "must be positive");
}

PropagationSettings parse_numerics(const json& root, const std::string& path,
                                   const PropagationSettings& defaults) {
  PropagationSettings out = defaults;
  if (!root.contains(path.substr(1))) return out;
  const json& obj = root.at(path.substr(1));
  check_keys(obj, path,
             {"t_final", "dt_out", "dt_initial", "atol", "rtol",
              "regularization", "repair_threshold", "convergence_tol",
              "checkpoint_stride"});
  out.t_final = number_at(obj, path, "t_final", defaults.t_final);
  out.dt_out = number_at(obj, path, "dt_out", defaults.dt_out);
  out.dt_initial = number_at(obj, path, "dt_initial", defaults.dt_initial);
  out.step.atol = number_at(obj, path, "atol", defaults.step.atol);
  out.step.rtol = number_at(obj, path, "rtol", defaults.step.rtol);
  out.regularization =
      number_at(obj, path, "regularization", defaults.regularization);
  out.repair_threshold =
      number_at(obj, path, "repair_threshold", defaults.repair_threshold);
  out.convergence_tol =
      number_at(obj, path, "convergence_tol", defaults.convergence_tol);
  out.checkpoint_stride = int(
      integer_at(obj, path, "checkpoint_stride", defaults.checkpoint_stride));
  require_positive(out.t_final, path + "/t_final");
  require_positive(out.dt_out, path + "/dt_out");
  require_positive(out.dt_initial, path + "/dt_initial");
  require_positive(out.step.atol, path + "/atol");
  require_positive(out.step.rtol, path + "/rtol");
  require_positive(out.regularization, path + "/regularization");
  if (out.checkpoint_stride < 0) fail(path + "/checkpoint_stride", "must be >= 0");
  return out;
}

json numerics_echo(const PropagationSettings& s, bool imaginary) {
  json j{{"t_final", s.t_final},
         {"dt_out", s.dt_out},
         {"dt_initial", s.dt_initial},
         {"atol", s.step.atol},
         {"rtol", s.step.rtol},
         {"regularization", s.regularization},
         {"checkpoint_stride", s.checkpoint_stride}};
  if (imaginary)
    j["convergence_tol"] = s.convergence_tol;
  else
    j["repair_threshold"] = s.repair_threshold;
  return j;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root = json::parse(text, nullptr, false);
  if (root.is_discarded()) throw ConfigError("config error at /: invalid JSON");
  check_keys(root, "/",
             {"grid", "trap", "species", "g_inter", "propagation",
              "relaxation", "seed"});

  RunConfig cfg;

  // grid
  if (root.contains("grid")) {
    const json& g = root.at("grid");
    check_keys(g, "/grid", {"kind", "points", "omega", "half_extent"});
    cfg.grid.kind = string_at(g, "/grid", "kind", cfg.grid.kind);
    cfg.grid.points = int(integer_at(g, "/grid", "points", cfg.grid.points));
    cfg.grid.omega = number_at(g, "/grid", "omega", cfg.grid.omega);
    cfg.grid.half_extent =
        number_at(g, "/grid", "half_extent", cfg.grid.half_extent);
  }
  if (cfg.grid.kind != "harmonic" && cfg.grid.kind != "sine")
    fail("/grid/kind", "expected \"harmonic\" or \"sine\"");
  if (cfg.grid.points < 4) fail("/grid/points", "need at least 4 points");
  if (cfg.grid.points % 2 != 0)
    fail("/grid/points", "must be even so no node sits at x = 0");
  require_positive(cfg.grid.omega, "/grid/omega");
  require_positive(cfg.grid.half_extent, "/grid/half_extent");

  // trap
  TrapSpec trap;
  if (root.contains("trap")) {
    const json& t = root.at("trap");
    check_keys(t, "/trap",
               {"harmonic", "barrier_height", "barrier_width", "block_height"});
    trap.harmonic = number_at(t, "/trap", "harmonic", trap.harmonic);
    trap.barrier_height =
        number_at(t, "/trap", "barrier_height", trap.barrier_height);
    trap.barrier_width =
        number_at(t, "/trap", "barrier_width", trap.barrier_width);
    trap.block_height =
        number_at(t, "/trap", "block_height", trap.block_height);
  }
  require_positive(trap.barrier_width, "/trap/barrier_width");
  cfg.mix.trap = trap;

  // species
  if (!root.contains("species") || !root.at("species").is_array() ||
      root.at("species").empty())
    fail("/species", "expected a non-empty array");
  const json& species = root.at("species");
  for (std::size_t i = 0; i < species.size(); ++i) {
    const std::string path = "/species/" + std::to_string(i);
    const json& sp = species.at(i);
    check_keys(sp, path, {"name", "particles", "orbitals", "states", "g"});
    SpeciesSpec s;
    s.name = string_at(sp, path, "name", std::string(1, char('A' + i % 26)));
    s.particles = int(integer_at(sp, path, "particles", 1));
    s.orbitals = int(integer_at(sp, path, "orbitals", 1));
    s.states = int(integer_at(sp, path, "states", 1));
    s.g = number_at(sp, path, "g", 0.0);
    if (s.name.empty()) fail(path + "/name", "must not be empty");
    if (s.particles < 1) fail(path + "/particles", "need at least one particle");
    if (s.orbitals < 1) fail(path + "/orbitals", "need at least one orbital");
    if (s.orbitals > cfg.grid.points)
      fail(path + "/orbitals", "more orbitals than grid points");
    if (s.states < 1) fail(path + "/states", "need at least one state");
    const std::int64_t d = bose_dimension(s.particles, s.orbitals);
    if (s.states > d)
      fail(path + "/states",
           "exceeds the number basis size " + std::to_string(d));
    for (const auto& other : cfg.mix.species)
      if (other.name == s.name) fail(path + "/name", "duplicate species name");
    cfg.mix.species.push_back(std::move(s));
  }
  const int count = cfg.mix.count();

  // g_inter
  cfg.mix.g_inter = MatrixXd::Zero(count, count);
  if (root.contains("g_inter")) {
    const json& g = root.at("g_inter");
    if (!g.is_array() || int(g.size()) != count)
      fail("/g_inter", "expected " + std::to_string(count) + " rows");
    for (int r = 0; r < count; ++r) {
      const json& row = g.at(r);
      if (!row.is_array() || int(row.size()) != count)
        fail("/g_inter/" + std::to_string(r),
             "expected " + std::to_string(count) + " entries");
      for (int c = 0; c < count; ++c) {
        const json& v = row.at(c);
        if (!v.is_number())
          fail("/g_inter/" + std::to_string(r) + "/" + std::to_string(c),
               "expected a number");
        cfg.mix.g_inter(r, c) = v.get<double>();
      }
    }
    if ((cfg.mix.g_inter.diagonal().array() != 0.0).any())
      fail("/g_inter", "diagonal must be zero (intra-species g lives in species[].g)");
    if ((cfg.mix.g_inter.array() != cfg.mix.g_inter.transpose().array()).any())
      fail("/g_inter", "must be symmetric");
  }

  // numerics
  PropagationSettings real_defaults;
  real_defaults.t_final = 1.0;
  PropagationSettings imag_defaults;
  imag_defaults.t_final = 500.0;
  imag_defaults.dt_out = 0.5;
  cfg.propagation = parse_numerics(root, "/propagation", real_defaults);
  cfg.relaxation = parse_numerics(root, "/relaxation", imag_defaults);

  cfg.seed = integer_at(root, "/", "seed", 0);

  // fully defaulted echo
  json echo;
  echo["grid"] = {{"kind", cfg.grid.kind}, {"points", cfg.grid.points}};
  if (cfg.grid.kind == "harmonic")
    echo["grid"]["omega"] = cfg.grid.omega;
  else
    echo["grid"]["half_extent"] = cfg.grid.half_extent;
  echo["trap"] = {{"harmonic", trap.harmonic},
                  {"barrier_height", trap.barrier_height},
                  {"barrier_width", trap.barrier_width},
                  {"block_height", trap.block_height}};
  echo["species"] = json::array();
  for (const auto& s : cfg.mix.species)
    echo["species"].push_back({{"name", s.name},
                               {"particles", s.particles},
                               {"orbitals", s.orbitals},
                               {"states", s.states},
                               {"g", s.g}});
  echo["g_inter"] = json::array();
  for (int r = 0; r < count; ++r) {
    json row = json::array();
    for (int c = 0; c < count; ++c) row.push_back(cfg.mix.g_inter(r, c));
    echo["g_inter"].push_back(row);
  }
  echo["propagation"] = numerics_echo(cfg.propagation, false);
  echo["relaxation"] = numerics_echo(cfg.relaxation, true);
  echo["seed"] = cfg.seed;
  cfg.echo = echo.dump(2);

  return cfg;
}

Grid build_grid(const GridSpec& spec) {
  return spec.kind == "harmonic" ? harmonic_dvr(spec.points, spec.omega)
                                 : sine_dvr(spec.points, spec.half_extent);
}

System build_system(const RunConfig& cfg) {
  return make_system(OneBodySpace::whole(build_grid(cfg.grid)), cfg.mix);
}

CostReport cost_estimate(const MixtureSpec& mix, std::int64_t grid_points) {
  auto checked_mul = [](std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r))
      throw ResourceError("coefficient count overflows 64-bit integers");
    return r;
  };
  auto checked_add = [](std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r))
      throw ResourceError("coefficient count overflows 64-bit integers");
    return r;
  };

  CostReport rep;
  rep.ml_top = 1;
  rep.mctdhb_coeff = 1;
  for (const auto& s : mix.species) {
    const std::int64_t d = bose_dimension(s.particles, s.orbitals);
    rep.ml_top = checked_mul(rep.ml_top, s.states);
    rep.ml_species = checked_add(rep.ml_species, checked_mul(s.states, d));
    rep.ml_orbitals =
        checked_add(rep.ml_orbitals, checked_mul(s.orbitals, grid_points));
    rep.mctdhb_coeff = checked_mul(rep.mctdhb_coeff, d);
  }
  rep.mctdhb_orbitals = rep.ml_orbitals;
  rep.ml_total =
      checked_add(checked_add(rep.ml_top, rep.ml_species), rep.ml_orbitals);
  rep.mctdhb_total = checked_add(rep.mctdhb_coeff, rep.mctdhb_orbitals);
  rep.ratio = double(rep.mctdhb_total) / double(rep.ml_total);
  return rep;
}

std::string cost_report_json(const CostReport& rep) {
  json j{{"ml_mctdhb",
          {{"top", rep.ml_top},
           {"species", rep.ml_species},
           {"orbitals", rep.ml_orbitals},
           {"total", rep.ml_total}}},
         {"mctdhb",
          {{"coefficients", rep.mctdhb_coeff},
           {"orbitals", rep.mctdhb_orbitals},
           {"total", rep.mctdhb_total}}},
         {"ratio", rep.ratio}};
  return j.dump(2);
}

}  // namespace mlb
