#pragma once

#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmf/core/errors.hpp"

namespace mmf {

// Run configuration. JSON layout (every key optional):
//   {"mesh":   {"n_per_face": 4, "p_geom": 0, "strategy": "optimized", "naive_order": 2, "file": ""},
//    "solver": {"case": "", "p": 6, "dt": 0, "t_final": -1, "alignment": "local",
//               "quadrature_order": 0, "disturbed": false,
//               "flux": {"alpha": 1, "ldg_alpha": 200, "ldg_beta": 0.5}},
//    "output": {"directory": ".", "stem": "", "cadence": 100, "formats": ["csv", "json"]}}
// p_geom 0 means "same as solver p"; dt 0 and a negative t_final mean the solver
// defaults, t_final 0 records the initial state only;
// an empty case means the subcommand's default case. A non-empty mesh.file loads
// a saved mesh and overrides the other mesh keys. Unknown keys are errors.
struct MeshConfig {
  int n_per_face = 4;
  int p_geom = 0;
  std::string strategy = "optimized";
  int naive_order = 2;
  std::string file;
};

struct FluxConfig {
  double alpha = 1.0;       // Maxwell upwind weight
  double ldg_alpha = 200.0;  // LDG penalty
  double ldg_beta = 0.5;     // LDG one-sided switch
};

struct SolverConfig {
  std::string case_id;
  int p = 6;
  double dt = 0.0;
  double t_final = -1.0;
  std::string alignment = "local";
  int quadrature_order = 0;
  bool disturbed = false;
  FluxConfig flux;
};

struct OutputConfig {
  std::string directory = ".";
  std::string stem;
  int cadence = 100;
  std::vector<std::string> formats{"csv", "json"};

  bool wants(const std::string& f) const {
    for (const auto& x : formats)
      if (x == f) return true;
    return false;
  }
};

struct RunConfig {
  MeshConfig mesh;
  SolverConfig solver;
  OutputConfig output;

  void validate() const {
    if (mesh.n_per_face < 1) throw ConfigError("mesh.n_per_face must be >= 1");
    if (mesh.p_geom < 0) throw ConfigError("mesh.p_geom must be >= 0");
    if (mesh.strategy != "optimized" && mesh.strategy != "naive")
      throw ConfigError("mesh.strategy must be optimized or naive");
    if (mesh.naive_order < 1) throw ConfigError("mesh.naive_order must be >= 1");
    if (solver.p < 1) throw ConfigError("solver.p must be >= 1");
    if (solver.dt < 0.0) throw ConfigError("solver.dt must be >= 0");
    if (solver.alignment != "local" && solver.alignment != "spherical")
      throw ConfigError("solver.alignment must be local or spherical");
    if (solver.quadrature_order < -1) throw ConfigError("solver.quadrature_order must be >= -1");
    if (!(solver.flux.alpha > 0.0 && solver.flux.alpha <= 1.0)) throw ConfigError("solver.flux.alpha must be in (0, 1]");
    if (!(solver.flux.ldg_alpha >= 0.0)) throw ConfigError("solver.flux.ldg_alpha must be >= 0");
    if (output.cadence < 1) throw ConfigError("output.cadence must be >= 1");
    for (const auto& f : output.formats)
      if (f != "csv" && f != "json" && f != "fields") throw ConfigError("unknown output format '" + f + "'");
  }
};

namespace detail {

inline void check_keys(const nlohmann::json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + (where.empty() ? k : where + "." + k) + "'");
}

template <class T>
void read_key(const nlohmann::json& j, const std::string& key, const std::string& where, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("wrong type for '" + where + "." + key + "'");
  }
}

}  // namespace detail

inline RunConfig config_from_json(const nlohmann::json& j) {
  using detail::check_keys;
  using detail::read_key;
  RunConfig c;
  check_keys(j, "", {"mesh", "solver", "output"});
  if (j.contains("mesh")) {
    const auto& m = j["mesh"];
    check_keys(m, "mesh", {"n_per_face", "p_geom", "strategy", "naive_order", "file"});
    read_key(m, "n_per_face", "mesh", c.mesh.n_per_face);
    read_key(m, "p_geom", "mesh", c.mesh.p_geom);
    read_key(m, "strategy", "mesh", c.mesh.strategy);
    read_key(m, "naive_order", "mesh", c.mesh.naive_order);
    read_key(m, "file", "mesh", c.mesh.file);
  }
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    check_keys(s, "solver", {"case", "p", "dt", "t_final", "alignment", "quadrature_order", "disturbed", "flux"});
    read_key(s, "case", "solver", c.solver.case_id);
    read_key(s, "p", "solver", c.solver.p);
    read_key(s, "dt", "solver", c.solver.dt);
    read_key(s, "t_final", "solver", c.solver.t_final);
    read_key(s, "alignment", "solver", c.solver.alignment);
    read_key(s, "quadrature_order", "solver", c.solver.quadrature_order);
    read_key(s, "disturbed", "solver", c.solver.disturbed);
    if (s.contains("flux")) {
      const auto& f = s["flux"];
      check_keys(f, "solver.flux", {"alpha", "ldg_alpha", "ldg_beta"});
      read_key(f, "alpha", "solver.flux", c.solver.flux.alpha);
      read_key(f, "ldg_alpha", "solver.flux", c.solver.flux.ldg_alpha);
      read_key(f, "ldg_beta", "solver.flux", c.solver.flux.ldg_beta);
    }
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    check_keys(o, "output", {"directory", "stem", "cadence", "formats"});
    read_key(o, "directory", "output", c.output.directory);
    read_key(o, "stem", "output", c.output.stem);
    read_key(o, "cadence", "output", c.output.cadence);
    read_key(o, "formats", "output", c.output.formats);
  }
  c.validate();
  return c;
}

inline nlohmann::json config_to_json(const RunConfig& c) {
  return {{"mesh",
           {{"n_per_face", c.mesh.n_per_face},
            {"p_geom", c.mesh.p_geom},
            {"strategy", c.mesh.strategy},
            {"naive_order", c.mesh.naive_order},
            {"file", c.mesh.file}}},
          {"solver",
           {{"case", c.solver.case_id},
            {"p", c.solver.p},
            {"dt", c.solver.dt},
            {"t_final", c.solver.t_final},
            {"alignment", c.solver.alignment},
            {"quadrature_order", c.solver.quadrature_order},
            {"disturbed", c.solver.disturbed},
            {"flux",
             {{"alpha", c.solver.flux.alpha},
              {"ldg_alpha", c.solver.flux.ldg_alpha},
              {"ldg_beta", c.solver.flux.ldg_beta}}}}},
          {"output",
           {{"directory", c.output.directory},
            {"stem", c.output.stem},
            {"cadence", c.output.cadence},
            {"formats", c.output.formats}}}};
}

inline RunConfig read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace mmf
