#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "mmf/cli/app.hpp"
#include "test_support.hpp"

using namespace mmf;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mmf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("mmf_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string operator/(const std::string& s) const { return (path_ / s).string(); }

 private:
  fs::path path_;
};

Table table_from_string(const std::string& s) {
  std::istringstream in(s);
  return table_from_csv(in);
}

}  // namespace

TEST(Config, DefaultsRoundTrip) {
  const RunConfig c;
  const auto j = config_to_json(c);
  EXPECT_EQ(config_to_json(config_from_json(j)), j);
  EXPECT_EQ(c.mesh.n_per_face, 4);
  EXPECT_EQ(c.solver.alignment, "local");
}

TEST(Config, UnknownKeysAndWrongTypesAreErrors) {
  EXPECT_THROW(config_from_json({{"meshes", {}}}), ConfigError);
  EXPECT_THROW(config_from_json({{"mesh", {{"n", 4}}}}), ConfigError);
  EXPECT_THROW(config_from_json({{"solver", {{"flux", {{"gamma", 1.0}}}}}}), ConfigError);
  EXPECT_THROW(config_from_json({{"mesh", {{"n_per_face", "four"}}}}), ConfigError);
  EXPECT_THROW(config_from_json({{"mesh", {{"strategy", "curved"}}}}), ConfigError);
  EXPECT_THROW(config_from_json({{"output", {{"formats", {"csv", "xml"}}}}}), ConfigError);
  EXPECT_THROW(config_from_json({{"solver", {{"flux", {{"alpha", 0.0}}}}}}), ConfigError);
  EXPECT_THROW(read_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, PartialFileKeepsDefaults) {
  const auto c = config_from_json({{"solver", {{"p", 3}, {"case", "rossby-haurwitz"}}}});
  EXPECT_EQ(c.solver.p, 3);
  EXPECT_EQ(c.solver.case_id, "rossby-haurwitz");
  EXPECT_EQ(c.mesh.strategy, "optimized");
  EXPECT_EQ(c.output.cadence, 100);
}

TEST(Series, CsvRoundTripKeepsValuesAndUnits) {
  DiagnosticsSeries s({"l2", "mass_rel_err"});
  s.set_unit("l2", "absolute");
  s.add(0.0, {0.0, 0.0});
  s.add(0.1, {1.0 / 3.0, 1e-17});
  s.add(0.30000000000000004, {2.5e-300, 7.0});
  const auto csv = series_to_csv(s);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "time[model units],l2[absolute],mass_rel_err[relative]");
  std::istringstream in(csv);
  const auto back = series_from_csv(in);
  EXPECT_EQ(back.columns(), s.columns());
  EXPECT_EQ(back.times(), s.times());
  EXPECT_EQ(back.rows(), s.rows());
  EXPECT_EQ(back.unit("l2"), "absolute");
  EXPECT_EQ(series_to_csv(back), csv);
}

TEST(Series, RejectsBadRecords) {
  DiagnosticsSeries s({"l2"});
  s.add(1.0, {0.5});
  EXPECT_THROW(s.add(1.0, {0.5}), Error);
  EXPECT_THROW(s.add(2.0, {-1e-20}), Error);
  EXPECT_THROW(s.add(2.0, {0.1, 0.2}), Error);
  std::istringstream bad("time[model units],l2\n0,abc\n");
  EXPECT_THROW(table_from_csv(bad), SchemaMismatch);
  std::istringstream ragged("time,l2\n0,1,2\n");
  EXPECT_THROW(table_from_csv(ragged), SchemaMismatch);
}

TEST(Compare, IdenticalInputsGiveUnitRatios) {
  const auto t = table_from_string("p[order],dof[count],l2[relative],linf[relative]\n2,54,1e-2,3e-2\n3,96,0,4e-4\n");
  const auto rep = compare_tables(t, t);
  ASSERT_EQ(rep.rows.size(), 2u);
  for (const auto& r : rep.rows) EXPECT_EQ(r.ratio, 1.0) << r.column;
}

TEST(Compare, FlatSeriesIsSaturatedAndDecayingIsNot) {
  const auto flat = table_from_string("p,l2\n4,1.00e-4\n5,1.05e-4\n6,0.98e-4\n7,1.01e-4\n");
  const auto fast = table_from_string("p,l2\n4,1e-4\n5,1e-5\n6,1e-6\n7,1e-7\n");
  const auto rep = compare_tables(flat, fast);
  EXPECT_TRUE(rep.row("l2").saturated_a);
  EXPECT_FALSE(rep.row("l2").saturated_b);
  EXPECT_NEAR(rep.row("l2").ratio, 1.01e3, 1e-9);
  EXPECT_NE(report_to_csv(rep).find("l2,0.000101,9.9999999999999995e-08,"), std::string::npos);
  EXPECT_EQ(report_to_json(rep)["columns"][0]["saturated_a"], true);
}

TEST(Compare, TimeSeriesHaveNoSaturationFlag) {
  const auto a = table_from_string("time,mass_rel_err\n0,0\n1,2e-5\n");
  const auto b = table_from_string("time,mass_rel_err\n0,0\n1,1e-8\n");
  const auto rep = compare_tables(a, b);
  EXPECT_EQ(rep.index, "time");
  EXPECT_FALSE(rep.row("mass_rel_err").has_saturation);
  EXPECT_NEAR(rep.row("mass_rel_err").ratio, 2e3, 1e-9);
  EXPECT_NE(report_to_csv(rep).find("n/a,n/a"), std::string::npos);
}

TEST(Compare, SchemaMismatch) {
  const auto a = table_from_string("time,l2\n0,1\n");
  const auto b = table_from_string("time,linf\n0,1\n");
  EXPECT_THROW(compare_tables(a, b), SchemaMismatch);
  const auto p1 = table_from_string("p,l2\n2,1\n3,1\n");
  const auto p2 = table_from_string("p,l2\n2,1\n4,1\n");
  EXPECT_THROW(compare_tables(p1, p2), SchemaMismatch);
  EXPECT_THROW(compare_tables(table_from_string("time,l2\n"), table_from_string("time,l2\n")), SchemaMismatch);
}

TEST(FieldIo, RoundTripByElement) {
  const std::vector<double> u{1, 2, 3, 4, 5, 6, 7, 8}, v{0, 0, 0, 0, 1, 1, 1, 1};
  const auto j = fields_to_json(1.5, 1, 4, {{"u", u}, {"v", v}});
  EXPECT_EQ(j["fields"]["u"].size(), 2u);
  EXPECT_EQ(j["fields"]["u"][1][0], 5.0);
  EXPECT_EQ(field_from_json(j, "u"), u);
  EXPECT_EQ(field_from_json(nlohmann::json::parse(j.dump()), "v"), v);
  EXPECT_THROW(field_from_json(j, "w"), SchemaMismatch);
  const std::vector<double> odd{1, 2, 3};
  EXPECT_THROW(fields_to_json(0.0, 1, 4, {{"u", odd}}), InvalidField);
}

TEST(ParseRange, AcceptsRangesAndSingles) {
  EXPECT_EQ(parse_range("2..8"), std::make_pair(2, 8));
  EXPECT_EQ(parse_range("5"), std::make_pair(5, 5));
  for (const char* bad : {"8..2", "a..b", "2..", "3x", "", "2...4"}) EXPECT_THROW(parse_range(bad), UsageError) << bad;
}

TEST(Cli, MeshSingleLinearElementPerFace) {
  TempDir dir;
  const auto r = invoke({"mesh", "--n", "1", "--p-geom", "1", "--strategy", "naive", "--out", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = table_from_string(slurp(dir.path() / "mesh.csv"));
  EXPECT_EQ(t.columns, (std::vector<std::string>{"p_geom", "dof", "mesh_error", "gae"}));
  EXPECT_LE(t.column("mesh_error")[0], 1e-15);
  EXPECT_EQ(t.column("dof")[0], 24.0);
  const auto m = read_mesh(dir / "mesh.json");
  EXPECT_EQ(m.num_elements(), 6);
}

TEST(Cli, MeshOptimizedAtOrderFour) {
  TempDir dir;
  const auto r = invoke({"mesh", "--n", "4", "--p-geom", "4", "--strategy", "optimized", "--out", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(table_from_string(r.out).column("gae")[0], 1e-6);
}

TEST(Cli, NaiveSweepPlateaus) {
  TempDir dir;
  const auto r = invoke({"mesh", "--n", "4", "--sweep-p", "2..6", "--strategy", "naive", "--out", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto gae = table_from_string(r.out).column("gae");
  ASSERT_EQ(gae.size(), 5u);
  const auto [lo, hi] = std::minmax_element(gae.begin(), gae.end());
  EXPECT_LE(*hi / *lo, 5.0);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"mesh", "--bogus"}).code, 2);
  EXPECT_EQ(invoke({"mesh", "--strategy", "curved"}).code, 2);
  EXPECT_EQ(invoke({"mesh", "--n", "0"}).code, 2);
  EXPECT_EQ(invoke({"mesh", "--sweep-p", "6..2"}).code, 2);
  EXPECT_EQ(invoke({"operators", "--op", "laplace", "--p", "2..3"}).code, 2);
  EXPECT_EQ(invoke({"swe", "--case", "tsunami", "--t-final", "0"}).code, 2);
  EXPECT_EQ(invoke({"advect", "--case", "square-wave"}).code, 2);
  EXPECT_EQ(invoke({"compare", "/nonexistent.csv", "/nonexistent.csv"}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, UnknownConfigKeyExitsTwo) {
  TempDir dir;
  std::ofstream(dir / "bad.json") << R"({"solver": {"p": 4, "order": 3}})";
  const auto r = invoke({"advect", "--config", dir / "bad.json"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("solver.order"), std::string::npos);
  std::ofstream(dir / "broken.json") << "{\"solver\": ";
  EXPECT_EQ(invoke({"advect", "--config", dir / "broken.json"}).code, 2);
}

TEST(Cli, BadMeshFileExitsThree) {
  TempDir dir;
  ASSERT_EQ(invoke({"mesh", "--n", "2", "--p-geom", "3", "--out", dir.path().string()}).code, 0);
  auto j = nlohmann::json::parse(slurp(dir.path() / "mesh.json"));
  j["control_nodes"][0][5] = {0.5, 0.5, 0.5};
  std::ofstream(dir / "broken.json") << j.dump();
  std::ofstream(dir / "garbage.json") << "not json";
  for (const char* f : {"broken.json", "garbage.json", "missing.json"}) {
    const auto r = invoke({"swe", "--mesh", dir / f, "--p", "3", "--t-final", "0", "--out", dir.path().string()});
    EXPECT_EQ(r.code, 3) << f << ": " << r.err;
  }
}

TEST(Cli, SavedMeshDrivesARun) {
  TempDir dir;
  ASSERT_EQ(invoke({"mesh", "--n", "2", "--p-geom", "3", "--strategy", "naive", "--out", dir.path().string()}).code, 0);
  const auto r = invoke({"swe", "--mesh", dir / "mesh.json", "--p", "3", "--t-final", "0", "--out", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto meta = nlohmann::json::parse(slurp(dir.path() / "swe_steady-zonal.json"));
  EXPECT_EQ(meta["strategy"], "naive");
  EXPECT_EQ(meta["n_per_face"], 2);
  EXPECT_EQ(meta["p_geom"], 3);
}

TEST(Cli, SolverBlowUpExitsFourWithFailureReport) {
  TempDir dir;
  const auto r = invoke({"swe", "--n", "2", "--p", "3", "--dt", "0.5", "--t-final", "5", "--out", dir.path().string()});
  EXPECT_EQ(r.code, 4) << r.err;
  EXPECT_NE(r.err.find("solver failure at t="), std::string::npos);
  const auto f = nlohmann::json::parse(slurp(dir.path() / "swe_steady-zonal_failure.json"));
  EXPECT_GT(f["time"].get<double>(), 0.0);
  EXPECT_LE(f["time"].get<double>(), 5.0);
  EXPECT_EQ(f["config"]["solver"]["dt"], 0.5);
}

TEST(Cli, ZeroStepSweRunHasExactlyZeroErrors) {
  TempDir dir;
  const auto r = invoke({"swe", "--n", "2", "--p", "4", "--t-final", "0", "--out", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = table_from_string(slurp(dir.path() / "swe_steady-zonal.csv"));
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.column("mass_rel_err")[0], 0.0);
  EXPECT_EQ(t.column("energy_rel_err")[0], 0.0);
  EXPECT_EQ(t.units[1], "relative");
}

TEST(Cli, IdenticalConfigsGiveByteIdenticalCsv) {
  TempDir dir;
  std::ofstream(dir / "run.json") << R"({"mesh": {"n_per_face": 2}, "solver": {"p": 4, "t_final": 0.05},
                                         "output": {"cadence": 50, "formats": ["csv", "fields"]}})";
  std::string csv[2], fields[2];
  for (int k = 0; k < 2; ++k) {
    const auto out = dir / std::to_string(k);
    ASSERT_EQ(invoke({"diffuse", "--config", dir / "run.json", "--out", out}).code, 0);
    csv[k] = slurp(fs::path(out) / "diffuse_spherical-harmonic.csv");
    fields[k] = slurp(fs::path(out) / "diffuse_spherical-harmonic_fields.json");
  }
  EXPECT_FALSE(csv[0].empty());
  EXPECT_EQ(csv[0], csv[1]);
  EXPECT_EQ(fields[0], fields[1]);
  EXPECT_FALSE(fs::exists(fs::path(dir / "0") / "diffuse_spherical-harmonic.json"));
}

TEST(Cli, FlagsOverrideConfigAndMetadataIsWritten) {
  TempDir dir;
  std::ofstream(dir / "run.json") << R"({"mesh": {"n_per_face": 3}, "solver": {"p": 5, "t_final": 0.01}})";
  const auto r = invoke({"maxwell", "--config", dir / "run.json", "--p", "3", "--stem", "mx", "--out", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto meta = nlohmann::json::parse(slurp(dir.path() / "mx.json"));
  EXPECT_EQ(meta["p"], 3);
  EXPECT_EQ(meta["n_per_face"], 3);
  EXPECT_EQ(meta["dof"], 6 * 9 * 16);
  EXPECT_EQ(meta["config"]["solver"]["p"], 3);
  EXPECT_TRUE(meta["energy_monotone"].get<bool>());
}

TEST(Cli, OperatorStudyDecreases) {
  TempDir dir;
  const auto out = dir / "div.csv";
  const auto r = invoke({"operators", "--op", "div-weak", "--p", "2..5", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("decades/order"), std::string::npos);
  const auto t = table_from_string(slurp(out));
  const auto l2 = t.column("l2");
  for (size_t i = 1; i < l2.size(); ++i) EXPECT_LT(l2[i], l2[i - 1]);
  const auto linf = t.column("linf");
  for (size_t i = 0; i < l2.size(); ++i) EXPECT_GE(linf[i], l2[i]);
}

TEST(Cli, CompareIdenticalFiles) {
  TempDir dir;
  std::ofstream(dir / "a.csv") << "p[order],l2[relative]\n2,1e-3\n3,1e-4\n4,1e-5\n";
  const auto r = invoke({"compare", dir / "a.csv", dir / "a.csv", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["columns"][0]["ratio"], 1.0);
  EXPECT_EQ(j["columns"][0]["saturated_a"], false);
  std::ofstream(dir / "b.csv") << "time,l2\n0,1\n";
  EXPECT_EQ(invoke({"compare", dir / "a.csv", dir / "b.csv"}).code, 2);
}

TEST(Cli, AdvectionSampleConfigConservesMass) {
  TempDir dir;
  const auto cfg = fs::path(MMF_SAMPLES_DIR) / "advect_p4.json";
  ASSERT_TRUE(fs::exists(cfg));
  const auto r = invoke({"advect", "--config", cfg.string(), "--out", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto mass = table_from_string(slurp(dir.path() / "advect_cosine-bell.csv")).column("mass_rel_err");
  EXPECT_LE(*std::max_element(mass.begin(), mass.end()), 1e-6);
}

TEST(Fixtures, DirectGradientOfConstantHasZeroNorm) {
  const auto& d = mmf::testing::shared_disc(4, 5, false);
  const auto G = gradient_direct(ScalarField(d.geom, 2.5), d);
  const auto fine = make_fine_grid(*d.mesh, 5, 15);
  const auto g1 = interpolate_to_fine(G.v1.view(), fine), g2 = interpolate_to_fine(G.v2.view(), fine);
  std::vector<double> mag(g1.size());
  for (size_t i = 0; i < mag.size(); ++i) mag[i] = std::hypot(g1[i], g2[i]);
  EXPECT_LE(normalized_error(mag, fine.geom, {}, 1.0).l2, 1e-12);
}

// Re-evaluates the direct-curl error norm at p=4 with a separately written
// (p+10)-point quadrature: mapping derivatives from the control nodes, basis
// evaluation point by point.
TEST(Fixtures, CurlDirectNormMatchesDenseQuadrature) {
  const int p = 4, s = p + 10;
  const auto& d = mmf::testing::shared_disc(4, p, false);
  const auto res = evaluate_operator_on_rh(OperatorId::CurlDirect, d);

  const auto sol = gll_rule(p), smp = gll_rule(s);
  const auto lam = barycentric_weights(sol.nodes);
  const int q = d.mesh->p_geom, nq = q + 1;
  const auto geo = gll_rule(q);
  const auto glam = barycentric_weights(geo.nodes);
  const auto D = differentiation_matrix(geo.nodes);
  double err2 = 0.0, ref2 = 0.0;
  for (int e = 0; e < d.geom.n_elements; ++e) {
    if (!d.active[e]) continue;
    const auto& m = d.mesh->mappings[e];
    std::vector<Vec3> dx(nq * nq), dy(nq * nq);
    for (int j = 0; j < nq; ++j)
      for (int i = 0; i < nq; ++i)
        for (int k = 0; k < nq; ++k) {
          dx[j * nq + i] += D[i * nq + k] * m.node(k, j);
          dy[j * nq + i] += D[j * nq + k] * m.node(i, k);
        }
    for (int b = 0; b <= s; ++b)
      for (int a = 0; a <= s; ++a) {
        const auto ga = lagrange_basis(geo.nodes, glam, smp.nodes[a]), gb = lagrange_basis(geo.nodes, glam, smp.nodes[b]);
        Vec3 x, xa, xb;
        for (int j = 0; j < nq; ++j)
          for (int i = 0; i < nq; ++i) {
            const double w = ga[i] * gb[j];
            x += w * m.node(i, j);
            xa += w * dx[j * nq + i];
            xb += w * dy[j * nq + i];
          }
        const double J = norm(cross(xa, xb)) * smp.weights[a] * smp.weights[b];
        const auto la = lagrange_basis(sol.nodes, lam, smp.nodes[a]), lb = lagrange_basis(sol.nodes, lam, smp.nodes[b]);
        double u = 0.0;
        for (int j = 0; j <= p; ++j)
          for (int i = 0; i <= p; ++i) u += la[i] * lb[j] * res.values[e * d.geom.npe + j * (p + 1) + i];
        const double exact = rh_curl(UnitSpherePoint(x));
        err2 += (u - exact) * (u - exact) * J;
        ref2 += exact * exact * J;
      }
  }
  const double l2 = std::sqrt(err2 / ref2);
  EXPECT_NEAR(res.l2_error, l2, 1e-10 * l2 + 1e-15);
  EXPECT_GT(l2, 0.0);
}

TEST(Executable, ExitCodes) {
  const char* exe = std::getenv("MMF_CLI");
  if (!exe) GTEST_SKIP() << "MMF_CLI not set";
  const std::string q = std::string("\"") + exe + "\"";
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status(q + " --help"), 0);
  EXPECT_EQ(status(q + " mesh --frobnicate"), 2);
  EXPECT_EQ(status(q + " swe --mesh /nonexistent/mesh.json --t-final 0"), 3);
}
