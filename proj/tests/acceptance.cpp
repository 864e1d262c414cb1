// Acceptance runner: `acceptance --criterion N` runs one criterion, prints one
// line per check and a final "CRITERION N PASS|FAIL" line, and exits non-zero
// on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmf/cli/app.hpp"

using namespace mmf;

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v, const char* f = "%.3e") {
  char b[64];
  std::snprintf(b, sizeof b, f, v);
  return b;
}

class Report {
 public:
  explicit Report(int id) : id_(id), t0_(std::chrono::steady_clock::now()) {}

  void check(bool ok, const std::string& what) {
    std::printf("  [%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
    std::fflush(stdout);
    ok_ = ok_ && ok;
  }
  void note(const std::string& s) {
    std::printf("  %s\n", s.c_str());
    std::fflush(stdout);
  }
  double elapsed() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

  int finish(double budget_s) {
    const double t = elapsed();
    check(t < budget_s, "runtime " + fmt(t, "%.1f") + " s < " + fmt(budget_s, "%.0f") + " s");
    std::printf("CRITERION %d %s\n", id_, ok_ ? "PASS" : "FAIL");
    return ok_ ? 0 : 1;
  }

 private:
  int id_;
  bool ok_ = true;
  std::chrono::steady_clock::time_point t0_;
};

std::shared_ptr<const HighOrderMesh> mesh_for(int n, int p, bool naive) {
  return std::make_shared<const HighOrderMesh>(
      insert_high_order_nodes(generate_cubed_sphere(n), p, naive ? NodeStrategy::naive() : NodeStrategy::optimized()));
}

SurfaceDiscretization disc(int n, int p, bool naive) { return make_discretization(mesh_for(n, p, naive), p); }

const char* name(bool naive) { return naive ? "naive" : "optimized"; }

// 1. GAE trend at n=4.
int criterion1() {
  Report r(1);
  const auto lin = generate_cubed_sphere(4);
  r.check(std::abs(lin.h - 0.39) < 0.02, "h = " + fmt(lin.h, "%.4f") + " ~ 0.39");
  std::vector<double> naive, opt;
  for (int p = 3; p <= 6; ++p) naive.push_back(geometric_approximation_error(insert_high_order_nodes(lin, p, NodeStrategy::naive())));
  for (int p = 2; p <= 6; ++p) opt.push_back(geometric_approximation_error(insert_high_order_nodes(lin, p, NodeStrategy::optimized())));
  std::string s = "naive GAE p=3..6:";
  for (double v : naive) s += " " + fmt(v);
  r.note(s);
  s = "optimized GAE p=2..6:";
  for (double v : opt) s += " " + fmt(v);
  r.note(s);
  const auto [lo, hi] = std::minmax_element(naive.begin(), naive.end());
  r.check(*hi / *lo < 5.0, "naive max/min = " + fmt(*hi / *lo, "%.3f") + " < 5");
  bool mono = true;
  for (size_t i = 1; i < opt.size(); ++i) mono = mono && opt[i] < opt[i - 1];
  r.check(mono, "optimized GAE strictly decreasing");
  r.check(opt.front() / opt.back() >= 1e4, "optimized reduction p=2 -> 6 = " + fmt(opt.front() / opt.back()) + " >= 1e4");
  r.check(opt.back() <= 1e-9, "optimized GAE at p=6 = " + fmt(opt.back()) + " <= 1e-9");
  return r.finish(60);
}

// 2. Weak operator saturation on the RH field, local frames.
int criterion2() {
  Report r(2);
  for (auto op : {OperatorId::DivWeak, OperatorId::CurlWeak, OperatorId::GradWeak}) {
    const auto opt = run_operator_study(op, NodeStrategy::optimized(), FrameAlignment::Local, 2, 8, 4);
    const auto nv = run_operator_study(op, NodeStrategy::naive(), FrameAlignment::Local, 6, 8, 4);
    const std::string n = to_string(op);
    std::string s = n + " optimized l2 p=2..8:";
    for (const auto& row : opt) s += " " + fmt(row.l2);
    r.note(s);
    s = n + " naive l2 p=6..8:";
    for (const auto& row : nv) s += " " + fmt(row.l2);
    r.note(s);
    const double rate = fitted_decay_rate(opt);
    r.check(rate >= 0.8, n + " optimized rate " + fmt(rate, "%.3f") + " >= 0.8 decades/order");
    std::vector<double> p, e;
    for (const auto& row : nv) {
      p.push_back(row.p);
      e.push_back(row.l2);
    }
    const double slope = tail_log_slope(p, e, 3);
    r.check(std::abs(slope) < 0.2, n + " naive last-three log-slope " + fmt(slope, "%.3f") + " within 0.2");
    const double ratio = nv.back().l2 / opt.back().l2;
    r.check(ratio >= 1e2, n + " naive/optimized at p=8 = " + fmt(ratio) + " >= 1e2");
  }
  return r.finish(300);
}

// 3. Cosine-bell revolution at p=6.
int criterion3() {
  Report r(3);
  std::map<bool, AdvectionResult> res;
  for (bool naive : {false, true}) {
    const auto d = disc(4, 6, naive);
    res[naive] = advect_run(d, AdvectionCase{});
    r.note(std::string(name(naive)) + ": l2 " + fmt(res[naive].series.final_value("l2")) + ", max mass error " +
           fmt(res[naive].max_mass_rel_err()));
  }
  const double ratio = res[true].max_mass_rel_err() / res[false].max_mass_rel_err();
  r.check(ratio >= 1e3, "mass error naive/optimized = " + fmt(ratio) + " >= 1e3");
  const double l2 = res[false].series.final_value("l2");
  r.check(l2 >= 1.5e-3 / 5 && l2 <= 1.5e-3 * 5, "optimized l2 " + fmt(l2) + " within 5x of 1.5e-3");
  return r.finish(900);
}

// exp(M t) by scaling and squaring of a Taylor series.
Mat2 taylor_exp(const Mat2& M, double t) {
  int k = 0;
  double s = t;
  while (std::abs(s) * (std::abs(M[0]) + std::abs(M[1]) + std::abs(M[2]) + std::abs(M[3])) > 0.1) {
    s /= 2;
    ++k;
  }
  auto mul = [](const Mat2& a, const Mat2& b) {
    return Mat2{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3]};
  };
  Mat2 E{1, 0, 0, 1}, term{1, 0, 0, 1};
  const Mat2 A{M[0] * s, M[1] * s, M[2] * s, M[3] * s};
  for (int j = 1; j < 30; ++j) {
    term = mul(term, A);
    for (auto& v : term) v /= j;
    for (int c = 0; c < 4; ++c) E[c] += term[c];
  }
  for (int i = 0; i < k; ++i) E = mul(E, E);
  return E;
}

// 4. Reaction-diffusion at p=8 plus the exact-solution oracle.
int criterion4() {
  Report r(4);
  const ReactionDiffusionParams prm;
  const double l = prm.degree * (prm.degree + 1.0);
  const Mat2 M{-prm.mu * l + prm.a, prm.b, prm.c, -prm.nu * l + prm.d};
  double worst = 0.0;
  for (double t : {0.0, 0.1, 0.5, 1.0})
    for (double th : {0.3, 1.1, 2.0, 2.9})
      for (double ph : {0.0, 0.7, 2.5, 4.0}) {
        // degree 2, order 1 harmonic without the Condon-Shortley phase
        const double Y = 3.0 * std::cos(th) * std::sin(th) * std::cos(ph);
        const Mat2 E = taylor_exp(M, t);
        const double u = (E[0] * prm.u_amplitude + E[1] * prm.v_amplitude) * Y;
        const double v = (E[2] * prm.u_amplitude + E[3] * prm.v_amplitude) * Y;
        const auto [uu, vv] = rd_exact_solution(th, ph, t, prm);
        worst = std::max({worst, std::abs(u - uu), std::abs(v - vv)});
      }
  r.check(worst <= 1e-12, "exact solution vs Taylor-series oracle: max diff " + fmt(worst) + " <= 1e-12");
  std::map<bool, double> l2;
  for (bool naive : {false, true}) {
    const auto d = disc(4, 8, naive);
    l2[naive] = reaction_diffusion_run(d, prm).series.final_value("l2");
    r.note(std::string(name(naive)) + ": l2 " + fmt(l2[naive]));
  }
  r.check(l2[false] <= 1e-7, "optimized l2 " + fmt(l2[false]) + " <= 1e-7");
  r.check(l2[true] / l2[false] >= 1e2, "naive/optimized l2 = " + fmt(l2[true] / l2[false]) + " >= 1e2");
  return r.finish(900);
}

// 5. Maxwell TM pulse, t=24, p=7.
int criterion5() {
  Report r(5);
  std::map<bool, MaxwellResult> res;
  for (bool naive : {false, true}) {
    const auto d = disc(4, 7, naive);
    MaxwellOptions o;
    o.t_final = 24.0;
    o.cadence = 1000;
    res[naive] = maxwell_tm_run(d, MaxwellPulse{}, o);
    r.note(std::string(name(naive)) + ": energy loss " + fmt(res[naive].series.final_value("energy_loss")) +
           ", largest step increase " + fmt(res[naive].max_energy_increase()));
    r.check(res[naive].energy_monotone(), std::string(name(naive)) + " energy non-increasing");
  }
  const double lo = res[false].series.final_value("energy_loss"), ln = res[true].series.final_value("energy_loss");
  r.check(lo <= 1e-4, "optimized energy loss " + fmt(lo) + " <= 1e-4");
  r.check(ln / lo >= 1e2, "naive/optimized energy loss = " + fmt(ln / lo) + " >= 1e2");
  return r.finish(1200);
}

// 6. SWE steady zonal, 5 days, p=6, and the lake at rest.
int criterion6() {
  Report r(6);
  for (bool naive : {false, true}) {
    const auto d = disc(4, 6, naive);
    const int N = d.num_nodes();
    std::vector<double> f(N);
    for (int i = 0; i < N; ++i) f[i] = 2 * SweUnits::omega() * normalized(d.geom.position[i]).z;
    SweOperator op(d, ScalarField(d.geom, 0.3), ScalarField(d.geom, f), SweUnits::g_tilde(),
                   WilliamsonCase{}.quadrature_for(6));
    State y(3 * N, 0.0), dy;
    std::fill(y.begin(), y.begin() + N, 0.3);
    op(0.0, y, dy);
    double m = 0.0;
    for (double v : dy) m = std::max(m, std::abs(v));
    r.check(m <= 1e-10, std::string(name(naive)) + " lake-at-rest tendency " + fmt(m) + " <= 1e-10");
  }
  std::map<bool, DiagnosticsSeries> res;
  for (bool naive : {false, true}) {
    const auto d = disc(4, 6, naive);
    WilliamsonCase c;
    c.kind = WilliamsonKind::SteadyZonal;
    res[naive] = swe_run_case(d, c, 1000).series;
    r.note(std::string(name(naive)) + ": l2 " + fmt(res[naive].final_value("l2")) + ", mass " +
           fmt(res[naive].final_value("mass_rel_err")) + ", energy " + fmt(res[naive].final_value("energy_rel_err")));
  }
  for (const char* col : {"l2", "mass_rel_err", "energy_rel_err"}) {
    const double o = res[false].final_value(col), n = res[true].final_value(col);
    r.check(o <= 1e-7, std::string("optimized ") + col + " " + fmt(o) + " <= 1e-7");
    r.check(n >= 1e-6, std::string("naive ") + col + " " + fmt(n) + " >= 1e-6");
    r.check(n / o >= 1e2, std::string("naive/optimized ") + col + " = " + fmt(n / o) + " >= 1e2");
  }
  return r.finish(1800);
}

// 7. SWE unsteady zonal (0.5 days, p=6) and Rossby-Haurwitz (4 days, p=5).
int criterion7() {
  Report r(7);
  std::map<bool, double> uz, rh;
  for (bool naive : {false, true}) {
    const auto d = disc(4, 6, naive);
    WilliamsonCase c;
    c.kind = WilliamsonKind::UnsteadyZonal;
    uz[naive] = swe_run_case(d, c, 1000).series.final_value("l2");
    r.note(std::string(name(naive)) + " unsteady zonal l2 " + fmt(uz[naive]));
  }
  r.check(uz[false] <= 1e-6, "unsteady zonal optimized l2 " + fmt(uz[false]) + " <= 1e-6");
  r.check(uz[true] >= 1e-5, "unsteady zonal naive l2 " + fmt(uz[true]) + " >= 1e-5");
  // The 4-day row is the permitted CI shortening of the 14-day run; at that
  // horizon the reference naive error is 2.5e-5, so the naive bar is 1e-5.
  for (bool naive : {false, true}) {
    const auto d = disc(4, 5, naive);
    WilliamsonCase c;
    c.kind = WilliamsonKind::RossbyHaurwitz;
    c.t_final = 4.0;
    rh[naive] = swe_run_case(d, c, 5000).series.final_value("energy_rel_err");
    r.note(std::string(name(naive)) + " Rossby-Haurwitz energy error at day 4 " + fmt(rh[naive]));
  }
  r.check(rh[false] <= 1e-5, "Rossby-Haurwitz optimized energy error " + fmt(rh[false]) + " <= 1e-5");
  r.check(rh[true] >= 1e-5, "Rossby-Haurwitz naive energy error " + fmt(rh[true]) + " >= 1e-5");
  return r.finish(3600);
}

// 8. Property suite.
int criterion8() {
  Report r(8);
  const auto d = disc(4, 6, false);
  const auto& g = d.geom;

  double ortho = 0.0;
  for (auto a : {FrameAlignment::Local, FrameAlignment::Spherical}) {
    const auto da = make_discretization(d.mesh, 6, a);
    for (int i = 0; i < da.num_nodes(); ++i) {
      const Vec3 e[3] = {da.frames.e1[i], da.frames.e2[i], da.frames.e3[i]};
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) ortho = std::max(ortho, std::abs(dot(e[p], e[q]) - (p == q)));
    }
  }
  r.check(ortho <= 1e-12, "frame orthonormality " + fmt(ortho) + " <= 1e-12");

  const double area = integrate(ScalarField(g, 1.0), g);
  r.check(std::abs(area - 4 * kPi) <= 1e-8, "sphere area - 4pi = " + fmt(area - 4 * kPi));

  double quad = 0.0;
  for (int p = 1; p <= 16; ++p) {
    const auto rule = gll_rule(p);
    for (int k = 0; k <= 2 * p - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i <= p; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
      quad = std::max(quad, std::abs(s - (k % 2 ? 0.0 : 2.0 / (k + 1))));
    }
  }
  r.check(quad <= 1e-13, "GLL exactness to degree 2p-1, p=1..16: max error " + fmt(quad));

  {
    // y' = -2 t y on [0, 1]; non-autonomous, so the stage times matter
    auto rhs = [](double t, const State& y, State& dy) { dy = {-2.0 * t * y[0]}; };
    std::vector<double> x, e;
    for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
      State y{1.0};
      march_rk4(y, dt, 1.0, rhs, [](double, const State&, long, bool) {});
      x.push_back(std::log10(dt));
      e.push_back(std::abs(y[0] - std::exp(-1.0)));
    }
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
      mx += x[i] / x.size();
      my += std::log10(e[i]) / x.size();
    }
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (std::log10(e[i]) - my);
      sxx += (x[i] - mx) * (x[i] - mx);
    }
    const double slope = sxy / sxx;
    r.check(std::abs(slope - 4.0) <= 0.1, "RK4 fitted order " + fmt(slope, "%.3f") + " = 4.0 +- 0.1");
  }

  {
    // per-element weak divergence vs integral of the exact divergence
    auto field = [](const Vec3& x) {
      const Vec3 n = normalized(x);
      return cross(Vec3{0.3, -0.2, 1.0}, x) + (Vec3{0, 0, 1} - n.z * n);
    };
    std::vector<double> errs;
    for (int p = 3; p <= 7; ++p) {
      const auto dp = disc(4, p, false);
      const auto& gp = dp.geom;
      std::vector<Vec3> V(gp.num_nodes());
      for (int i = 0; i < gp.num_nodes(); ++i) {
        const Vec3 v = field(gp.position[i]);
        V[i] = v - dot(v, gp.normal[i]) * gp.normal[i];
      }
      std::vector<double> res(gp.num_nodes(), 0.0), flux(gp.num_edge_points());
      for (int e = 0; e < gp.n_elements; ++e)
        add_weak_divergence_volume(V.data() + e * gp.npe, gp, dp.ref, e, res.data() + e * gp.npe);
      for (int e = 0; e < gp.n_elements; ++e)
        for (int le = 0; le < 4; ++le)
          for (int q = 0; q < gp.n1d; ++q) {
            const int id = gp.edge_index(e, le, q);
            flux[id] = dot(V[gp.volume_index_of_edge(e, le, q)], gp.edge_normal[id]);
          }
      lift_edge_flux(flux, gp, dp.ref, res);
      double worst = 0.0;
      for (int e = 0; e < gp.n_elements; ++e) {
        double lhs = 0.0, rhs = 0.0;
        for (int k = 0; k < gp.npe; ++k) {
          lhs += res[e * gp.npe + k];
          rhs += -2.0 * normalized(gp.position[e * gp.npe + k]).z * gp.mass[e * gp.npe + k];
        }
        worst = std::max(worst, std::abs(lhs - rhs));
      }
      errs.push_back(worst);
    }
    std::string s = "divergence closure p=3..7:";
    for (double v : errs) s += " " + fmt(v);
    r.note(s);
    const double rate = std::log10(errs.front() / errs.back()) / 4.0;
    r.check(rate >= 0.5 && errs.back() <= 1e-7, "divergence closure spectral: " + fmt(rate, "%.2f") + " decades/order");
  }

  {
    // two identical CLI runs give byte-identical CSV
    const auto dir = std::filesystem::temp_directory_path() / "mmf_acceptance_det";
    std::filesystem::remove_all(dir);
    std::string csv[2];
    for (int k = 0; k < 2; ++k) {
      const std::string out = (dir / std::to_string(k)).string();
      const char* argv[] = {"mmf", "advect", "--n", "2", "--p", "4", "--t-final", "0.05", "--cadence", "100", "--out", out.c_str()};
      std::ostringstream so, se;
      if (run_cli(12, argv, so, se) != 0) r.note("advect run failed: " + se.str());
      std::ifstream f(out + "/advect_cosine-bell.csv");
      csv[k] = std::string(std::istreambuf_iterator<char>(f), {});
    }
    r.check(!csv[0].empty() && csv[0] == csv[1], "deterministic re-run: CSV byte-identical");
    std::filesystem::remove_all(dir);
  }

  {
    const ScalarField one(g, 1.0);
    const auto gd = gradient_direct(one, d);
    const auto gw = gradient_weak(one, d);
    double md = 0.0, mw = 0.0;
    for (int i = 0; i < d.num_nodes(); ++i) {
      md = std::max({md, std::abs(gd.v1[i]), std::abs(gd.v2[i])});
      mw = std::max({mw, std::abs(gw.v1[i]), std::abs(gw.v2[i])});
    }
    r.check(md <= 1e-12, "direct gradient of a constant " + fmt(md) + " <= 1e-12");
    r.check(mw <= 1e-10, "weak gradient of a constant " + fmt(mw) + " <= 1e-10");
    const FrameVectorField zero{ScalarField(g, 0.0), ScalarField(g, 0.0)};
    double mz = 0.0;
    for (const auto& f : {divergence_direct(zero, d), divergence_weak(zero, d), curl_direct(zero, d), curl_weak(zero, d)})
      for (double v : f.values()) mz = std::max(mz, std::abs(v));
    r.check(mz == 0.0, "divergence and curl of the zero field exactly 0");
  }
  return r.finish(60);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int criterion = 0;
  app.add_option("--criterion", criterion, "criterion number")->required()->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);
  const std::function<int()> runs[] = {criterion1, criterion2, criterion3, criterion4,
                                       criterion5, criterion6, criterion7, criterion8};
  try {
    return runs[criterion - 1]();
  } catch (const std::exception& e) {
    std::printf("  error: %s\nCRITERION %d FAIL\n", e.what(), criterion);
    return 1;
  }
}
