#pragma once

#include <chrono>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmf/cli/config.hpp"
#include "mmf/diagnostics/compare.hpp"
#include "mmf/diagnostics/field_io.hpp"
#include "mmf/mesh/mesh_io.hpp"
#include "mmf/mesh/metrics.hpp"
#include "mmf/operators/study.hpp"
#include "mmf/solvers/advection.hpp"
#include "mmf/solvers/maxwell.hpp"
#include "mmf/solvers/reaction_diffusion.hpp"
#include "mmf/solvers/swe.hpp"

namespace mmf {

enum ExitCode { kExitOk = 0, kExitInternal = 1, kExitUsage = 2, kExitMesh = 3, kExitSolver = 4 };

// "a..b" or a single integer.
inline std::pair<int, int> parse_range(const std::string& s) {
  try {
    const auto dots = s.find("..");
    size_t used = 0;
    if (dots == std::string::npos) {
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw UsageError("");
      return {v, v};
    }
    const std::string a = s.substr(0, dots), b = s.substr(dots + 2);
    const int lo = std::stoi(a, &used);
    if (used != a.size()) throw UsageError("");
    const int hi = std::stoi(b, &used);
    if (used != b.size() || hi < lo) throw UsageError("");
    return {lo, hi};
  } catch (...) {
    throw UsageError("invalid range '" + s + "' (expected a..b)");
  }
}

namespace cli {

struct MeshArgs {
  int n = 4;
  int p_geom = 4;
  std::string strategy = "optimized";
  int naive_order = 2;
  std::string sweep;
  std::string out = ".";
  std::string stem = "mesh";
};

inline Table mesh_report(const MeshArgs& a, const LinearSphereMesh& lin, HighOrderMesh& last) {
  int lo = a.p_geom, hi = a.p_geom;
  if (!a.sweep.empty()) std::tie(lo, hi) = parse_range(a.sweep);
  if (lo < 1) throw OrderOutOfRange("p_geom must be >= 1");
  const auto strategy = parse_strategy(a.strategy, a.naive_order);
  Table t;
  t.columns = {"p_geom", "dof", "mesh_error", "gae"};
  for (int p = lo; p <= hi; ++p) {
    last = insert_high_order_nodes(lin, p, strategy);
    t.rows.push_back({double(p), double(quad_dof(a.n, p)), mesh_error(last), geometric_approximation_error(last)});
  }
  return t;
}

inline int run_mesh(const MeshArgs& a, std::ostream& out) {
  const auto lin = generate_cubed_sphere(a.n);
  HighOrderMesh last;
  const Table t = mesh_report(a, lin, last);
  std::filesystem::create_directories(a.out);
  const auto base = std::filesystem::path(a.out) / a.stem;
  write_text(base.string() + ".csv", table_to_csv(t));
  write_mesh(last, base.string() + ".json");
  out << table_to_csv(t);
  return kExitOk;
}

struct OperatorArgs {
  std::string op;
  std::string strategy = "optimized";
  std::string alignment = "local";
  std::string p = "2..8";
  int n = 4;
  int naive_order = 2;
  std::string out;
};

inline int run_operators(const OperatorArgs& a, std::ostream& out) {
  const auto [lo, hi] = parse_range(a.p);
  const auto op = parse_operator(a.op);
  const auto rows = run_operator_study(op, parse_strategy(a.strategy, a.naive_order), parse_alignment(a.alignment),
                                       lo, hi, a.n);
  Table t;
  t.columns = {"p", "dof", "l2", "linf"};
  for (const auto& r : rows) t.rows.push_back({double(r.p), double(r.dof), r.l2, r.linf});
  const auto csv = table_to_csv(t);
  if (!a.out.empty()) {
    const auto dir = std::filesystem::path(a.out).parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
    write_text(a.out, csv);
  }
  out << csv;
  if (rows.size() >= 2) out << "rate " << format_double(fitted_decay_rate(rows)) << " decades/order\n";
  return kExitOk;
}

// Flag overrides on top of a config file.
struct RunArgs {
  std::string config;
  std::optional<int> n, p, p_geom, cadence, quadrature_order;
  std::optional<double> dt, t_final;
  std::optional<std::string> strategy, alignment, case_id, out, stem, mesh_file;
  std::optional<bool> disturbed;

  RunConfig resolve() const {
    RunConfig c = config.empty() ? RunConfig{} : read_config(config);
    if (n) c.mesh.n_per_face = *n;
    if (p) c.solver.p = *p;
    if (p_geom) c.mesh.p_geom = *p_geom;
    if (cadence) c.output.cadence = *cadence;
    if (quadrature_order) c.solver.quadrature_order = *quadrature_order;
    if (dt) c.solver.dt = *dt;
    if (t_final) c.solver.t_final = *t_final;
    if (strategy) c.mesh.strategy = *strategy;
    if (alignment) c.solver.alignment = *alignment;
    if (case_id) c.solver.case_id = *case_id;
    if (out) c.output.directory = *out;
    if (stem) c.output.stem = *stem;
    if (disturbed) c.solver.disturbed = *disturbed;
    if (mesh_file) c.mesh.file = *mesh_file;
    c.validate();
    return c;
  }
};

struct RunOutput {
  DiagnosticsSeries series;
  std::map<std::string, std::vector<double>> fields;
  double final_time = 0.0;
  nlohmann::json extra = nlohmann::json::object();
};

inline std::string default_case(const std::string& solver) {
  if (solver == "advect") return "cosine-bell";
  if (solver == "diffuse") return "spherical-harmonic";
  if (solver == "maxwell") return "gaussian-pulse";
  return "steady-zonal";
}

inline RunOutput solve(const std::string& solver, const RunConfig& c, const SurfaceDiscretization& d) {
  const auto& s = c.solver;
  const std::string id = s.case_id.empty() ? default_case(solver) : s.case_id;
  RunOutput r;
  if (solver == "swe") {
    WilliamsonCase w;
    w.kind = parse_williamson(id);
    if (s.dt > 0.0) w.dt = s.dt;
    w.t_final = s.t_final;
    w.disturbed = s.disturbed;
    w.quadrature_order = s.quadrature_order;
    auto res = swe_run_case(d, w, c.output.cadence);
    const int N = d.num_nodes();
    r.series = std::move(res.series);
    r.fields["H"].assign(res.final_state.begin(), res.final_state.begin() + N);
    r.fields["Hu1"].assign(res.final_state.begin() + N, res.final_state.begin() + 2 * N);
    r.fields["Hu2"].assign(res.final_state.begin() + 2 * N, res.final_state.end());
    r.final_time = w.final_time();
    r.extra["dt"] = w.step();
    return r;
  }
  if (id != default_case(solver)) throw ConfigError("unknown case '" + id + "' for " + solver);
  if (solver == "advect") {
    AdvectionCase a;
    if (s.dt > 0.0) a.dt = s.dt;
    if (s.t_final >= 0.0) a.t_final = s.t_final;
    a.cadence = c.output.cadence;
    auto res = advect_run(d, a);
    r.extra["max_mass_rel_err"] = res.max_mass_rel_err();
    r.series = std::move(res.series);
    r.fields["u"] = std::move(res.final_state);
    r.final_time = a.t_final;
    r.extra["dt"] = a.dt;
  } else if (solver == "diffuse") {
    ReactionDiffusionParams p;
    if (s.dt > 0.0) p.dt = s.dt;
    if (s.t_final >= 0.0) p.t_final = s.t_final;
    p.ldg_alpha = s.flux.ldg_alpha;
    p.ldg_beta = s.flux.ldg_beta;
    p.cadence = c.output.cadence;
    auto res = reaction_diffusion_run(d, p);
    r.series = std::move(res.series);
    r.fields["u"] = std::move(res.u);
    r.fields["v"] = std::move(res.v);
    r.final_time = p.t_final;
    r.extra["dt"] = p.dt;
  } else {
    MaxwellOptions o;
    if (s.dt > 0.0) o.dt = s.dt;
    if (s.t_final >= 0.0) o.t_final = s.t_final;
    o.alpha = s.flux.alpha;
    o.cadence = c.output.cadence;
    auto res = maxwell_tm_run(d, MaxwellPulse{}, o);
    r.extra["energy_monotone"] = res.energy_monotone();
    r.extra["max_energy_increase"] = res.max_energy_increase();
    r.series = std::move(res.series);
    r.fields["H1"] = res.final_state.H1.values();
    r.fields["H2"] = res.final_state.H2.values();
    r.fields["E3"] = res.final_state.E3.values();
    r.final_time = o.t_final;
    r.extra["dt"] = o.dt;
  }
  return r;
}

inline int run_solver(const std::string& solver, const RunArgs& args, std::ostream& out, std::ostream& err) {
  const RunConfig c = args.resolve();
  const std::string id = c.solver.case_id.empty() ? default_case(solver) : c.solver.case_id;
  const std::string stem = c.output.stem.empty() ? solver + "_" + id : c.output.stem;
  std::filesystem::create_directories(c.output.directory);
  const auto base = (std::filesystem::path(c.output.directory) / stem).string();

  const int p = c.solver.p;
  std::shared_ptr<const HighOrderMesh> mesh;
  if (!c.mesh.file.empty()) {
    mesh = std::make_shared<const HighOrderMesh>(read_mesh(c.mesh.file));
  } else {
    const int pg = c.mesh.p_geom > 0 ? c.mesh.p_geom : p;
    mesh = std::make_shared<const HighOrderMesh>(insert_high_order_nodes(
        generate_cubed_sphere(c.mesh.n_per_face), pg, parse_strategy(c.mesh.strategy, c.mesh.naive_order)));
  }
  const auto& lin = mesh->linear;
  const int pg = mesh->p_geom;
  const auto d = make_discretization(mesh, p, parse_alignment(c.solver.alignment));

  const auto t0 = std::chrono::steady_clock::now();
  RunOutput r;
  try {
    r = solve(solver, c, d);
  } catch (const SolverError& e) {
    nlohmann::json f{{"error", e.what()}, {"time", e.time}, {"config", config_to_json(c)}};
    write_text(base + "_failure.json", f.dump(2) + "\n");
    err << "solver failure at t=" << format_double(e.time) << ": " << e.what() << "\n";
    return kExitSolver;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (c.output.wants("csv")) write_text(base + ".csv", series_to_csv(r.series));
  if (c.output.wants("json")) {
    nlohmann::json m = r.series.metadata;
    m["solver"] = solver;
    m["case"] = id;
    m["strategy"] = mesh->strategy.name();
    m["alignment"] = c.solver.alignment;
    m["p"] = p;
    m["p_geom"] = pg;
    m["n_per_face"] = lin.n_per_face;
    m["h"] = lin.h;
    m["dof"] = quad_dof(lin.n_per_face, p);
    m["t_final"] = r.final_time;
    m["wall_time_s"] = wall;
    for (auto& [k, v] : r.extra.items()) m[k] = v;
    m["config"] = config_to_json(c);
    write_text(base + ".json", m.dump(2) + "\n");
  }
  if (c.output.wants("fields")) {
    std::map<std::string, std::span<const double>> views;
    for (const auto& [k, v] : r.fields) views.emplace(k, std::span<const double>(v));
    write_text(base + "_fields.json", fields_to_json(r.final_time, p, d.npe(), views).dump() + "\n");
  }
  out << solver << " " << id << " " << mesh->strategy.name() << " p=" << p << " t=" << format_double(r.final_time);
  for (const auto& col : r.series.columns()) out << " " << col << "=" << format_double(r.series.final_value(col));
  out << "\n";
  return kExitOk;
}

struct CompareArgs {
  std::string a, b, out;
  bool json = false;
};

inline int run_compare(const CompareArgs& a, std::ostream& out) {
  const auto rep = compare_tables(read_table(a.a), read_table(a.b));
  const std::string text = a.json ? report_to_json(rep).dump(2) + "\n" : report_to_csv(rep);
  if (!a.out.empty()) write_text(a.out, text);
  out << text;
  return kExitOk;
}

inline void add_run_options(CLI::App* sc, RunArgs& r) {
  sc->add_option("--config", r.config, "JSON run configuration")->check(CLI::ExistingFile);
  sc->add_option("--mesh", r.mesh_file, "load a saved mesh JSON instead of generating one");
  sc->add_option("--n", r.n, "elements per cube-face edge");
  sc->add_option("--p", r.p, "solution order");
  sc->add_option("--p-geom", r.p_geom, "geometry order (default: p)");
  sc->add_option("--strategy", r.strategy, "optimized|naive");
  sc->add_option("--alignment", r.alignment, "local|spherical");
  sc->add_option("--case", r.case_id, "test case");
  sc->add_option("--dt", r.dt, "time step");
  sc->add_option("--t-final", r.t_final, "final time");
  sc->add_option("--cadence", r.cadence, "steps between records");
  sc->add_option("--out", r.out, "output directory");
  sc->add_option("--stem", r.stem, "output file stem");
}

}  // namespace cli

// Entry point shared by the executable and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometric-error study on high-order sphere meshes"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  cli::MeshArgs mesh;
  auto* sm = app.add_subcommand("mesh", "generate a mesh and report mesh error / GAE");
  sm->add_option("--n", mesh.n, "elements per cube-face edge");
  sm->add_option("--p-geom", mesh.p_geom, "geometry order");
  sm->add_option("--strategy", mesh.strategy, "optimized|naive")->check(CLI::IsMember({"optimized", "naive"}));
  sm->add_option("--naive-order", mesh.naive_order, "order of the frozen naive map");
  sm->add_option("--sweep-p", mesh.sweep, "p_geom range a..b");
  sm->add_option("--out", mesh.out, "output directory");
  sm->add_option("--stem", mesh.stem, "output file stem");

  cli::OperatorArgs ops;
  auto* so = app.add_subcommand("operators", "operator convergence study on the Rossby-Haurwitz field");
  so->add_option("--op", ops.op, "div-direct|div-weak|curl-direct|curl-weak|grad-direct|grad-weak")->required();
  so->add_option("--strategy", ops.strategy, "optimized|naive")->check(CLI::IsMember({"optimized", "naive"}));
  so->add_option("--alignment", ops.alignment, "local|spherical")->check(CLI::IsMember({"local", "spherical"}));
  so->add_option("--p", ops.p, "order range a..b");
  so->add_option("--n", ops.n, "elements per cube-face edge");
  so->add_option("--naive-order", ops.naive_order, "order of the frozen naive map");
  so->add_option("--out", ops.out, "CSV output path");

  std::vector<std::pair<std::string, CLI::App*>> solvers;
  std::map<std::string, cli::RunArgs> run_args;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"advect", "cosine-bell advection"},
           {"diffuse", "reaction-diffusion with a spherical-harmonic exact solution"},
           {"maxwell", "Maxwell TM pulse, energy loss"},
           {"swe", "shallow-water Williamson cases"}}) {
    auto* sc = app.add_subcommand(name, help);
    cli::add_run_options(sc, run_args[name]);
    solvers.emplace_back(name, sc);
  }
  std::optional<bool> disturbed;
  solvers.back().second->add_flag("--disturbed", disturbed, "perturb the Rossby-Haurwitz height field");
  int quad = 0;
  auto* qopt = solvers.back().second->add_option("--quadrature-order", quad,
                                                 "-1 collocated, 0 the 3/2 rule, >p explicit GLL order");

  cli::CompareArgs cmp;
  auto* sc = app.add_subcommand("compare", "final-row ratios and saturation flags of two CSV tables");
  sc->add_option("a", cmp.a, "first CSV")->required()->check(CLI::ExistingFile);
  sc->add_option("b", cmp.b, "second CSV")->required()->check(CLI::ExistingFile);
  sc->add_option("--out", cmp.out, "write the report here as well");
  sc->add_flag("--json", cmp.json, "JSON report instead of CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sm) return cli::run_mesh(mesh, out);
    if (*so) return cli::run_operators(ops, out);
    if (*sc) return cli::run_compare(cmp, out);
    for (auto& [name, sub] : solvers)
      if (*sub) {
        auto& r = run_args[name];
        if (name == "swe") {
          if (disturbed) r.disturbed = disturbed;
          if (qopt->count() > 0) r.quadrature_order = quad;
        }
        return cli::run_solver(name, r, out, err);
      }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PoleProximity& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MeshError& e) {
    err << "mesh failure: " << e.what() << "\n";
    return kExitMesh;
  } catch (const SolverError& e) {
    err << "solver failure at t=" << format_double(e.time) << ": " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace mmf
