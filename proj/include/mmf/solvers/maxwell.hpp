#pragma once

#include <cmath>
#include <vector>

#include "mmf/solvers/dg_common.hpp"

namespace mmf {

// TM mode: in-surface H = H1 e1 + H2 e2, radial E = E3 e3. Diagonal material
// constants; conductivities are carried but default to zero.
struct MaxwellMaterial {
  double eps3 = 1.0, mu1 = 1.0, mu2 = 1.0;
  double sigma_star1 = 0.0, sigma_star2 = 0.0, sigma3 = 0.0;

  double impedance(int i) const { return std::sqrt((i == 1 ? mu2 : mu1) / eps3); }  // Z_i
  double admittance(int i) const { return 1.0 / impedance(i); }                    // Y_i
};

struct MaxwellTMState {
  ScalarField H1, H2, E3;
};

struct MaxwellPulse {
  Vec3 center{1.0, 0.0, 0.0};
  double radius = 0.2;
  double amplitude = 1.0;
  double operator()(const Vec3& x) const {
    // radius is the standard deviation of the Gaussian in great-circle distance
    const double r = great_circle_distance(normalized(x), normalized(center)) / radius;
    return amplitude * std::exp(-0.5 * r * r);
  }
};

struct MaxwellOptions {
  MaxwellMaterial material;
  double alpha = 1.0;  // upwind flux weight, (0, 1]
  double dt = 1e-3;
  double t_final = 24.0;
  int cadence = 100;
  // optional probe points whose E3 is recorded in the series (nearest node)
  std::vector<Vec3> probes;

  void validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("Maxwell flux alpha must be in (0, 1]");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  }
};

// Semi-discrete TM operator on the state [H1 | H2 | E3].
class MaxwellTMOperator {
 public:
  MaxwellTMOperator(const SurfaceDiscretization& d, const MaxwellOptions& opt) : d_(d), opt_(opt) {
    const auto& g = d.geom;
    const int N = g.num_nodes();
    e31_.resize(N);
    e32_.resize(N);
    for (int i = 0; i < N; ++i) {
      e31_[i] = cross(d.frames.e3[i], d.frames.e1[i]);
      e32_[i] = cross(d.frames.e3[i], d.frames.e2[i]);
    }
  }

  void operator()(double, const State& y, State& dy) {
    const auto& g = d_.geom;
    const auto& fr = d_.frames;
    const auto& c = d_.conn;
    const auto& mat = opt_.material;
    const int N = g.num_nodes(), NE = g.num_edge_points();
    const double* H1 = y.data();
    const double* H2 = y.data() + N;
    const double* E3 = y.data() + 2 * N;
    dy.assign(3 * N, 0.0);
    double* dH1 = dy.data();
    double* dH2 = dy.data() + N;
    double* dE3 = dy.data() + 2 * N;

    H_.resize(N);
    for (int i = 0; i < N; ++i) H_[i] = H1[i] * fr.e1[i] + H2[i] * fr.e2[i];

    // H^i: +int E3 grad(phi).e^{3i} - int E3 (e3.curl e^i) phi (weak form).
    // E3: -(grad H^i . e^{3i} - H^i e3.curl e^i) collocated (strong form), the
    // exact discrete adjoint of the H volume terms, so the central part of the
    // scheme conserves the discrete energy.
    for_each_element(g.n_elements, [&](int e) {
      thread_local std::vector<Vec3> V, G1, G2;
      V.resize(g.npe);
      G1.resize(g.npe);
      G2.resize(g.npe);
      const int b = e * g.npe;
      for (int k = 0; k < g.npe; ++k) V[k] = E3[b + k] * e31_[b + k];
      add_weak_divergence_volume(V.data(), g, d_.ref, e, dH1 + b, -1.0);
      for (int k = 0; k < g.npe; ++k) V[k] = E3[b + k] * e32_[b + k];
      add_weak_divergence_volume(V.data(), g, d_.ref, e, dH2 + b, -1.0);
      element_gradient(H1 + b, g, d_.ref, e, G1.data());
      element_gradient(H2 + b, g, d_.ref, e, G2.data());
      for (int k = 0; k < g.npe; ++k) {
        const int id = b + k;
        const double m = g.mass[id];
        dH1[id] -= m * E3[id] * c.curl3_e1[id];
        dH2[id] -= m * E3[id] * c.curl3_e2[id];
        dE3[id] -= m * (dot(G1[k], e31_[id]) + dot(G2[k], e32_[id]) - H1[id] * c.curl3_e1[id] -
                        H2[id] * c.curl3_e2[id]);
      }
    });

    gather_traces(E3, g, ein_, eout_);
    gather_traces(H_.data(), g, hin_, hout_);
    f1_.resize(NE);
    f2_.resize(NE);
    f3_.resize(NE);
    const double Y1 = mat.admittance(1), Y2 = mat.admittance(2);
    const double Z1 = mat.impedance(1), Z2 = mat.impedance(2);
    const double za = 0.5 * (Z1 + Z2);
    for (int e = 0; e < g.n_elements; ++e)
      for (int le = 0; le < 4; ++le)
        for (int k = 0; k < g.n1d; ++k) {
          const int i = g.edge_index(e, le, k);
          const int v = g.volume_index_of_edge(e, le, k);
          const Vec3& n = g.edge_normal[i];
          const Vec3 ne3 = cross(n, fr.e3[v]);
          const Vec3 jH = hin_[i] - hout_[i];
          const Vec3 nnjH = cross(n, cross(n, jH));
          const double e3avg = 0.5 * (ein_[i] + eout_[i]);
          // -e^i.(n x E3*) with homogeneous material: {Y_i E3}/{Y_i} = {E3}
          const double s1 = (-dot(fr.e1[v], ne3) * Y1 * e3avg + 0.5 * opt_.alpha * dot(fr.e1[v], nnjH)) / Y1;
          const double s2 = (-dot(fr.e2[v], ne3) * Y2 * e3avg + 0.5 * opt_.alpha * dot(fr.e2[v], nnjH)) / Y2;
          f1_[i] = s1;
          f2_[i] = s2;
          // e3.(n x H*) minus the interior trace e3.(n x H-) taken out by the strong form
          const Vec3 havg = 0.5 * (hin_[i] + hout_[i]);
          f3_[i] = (dot(fr.e3[v], cross(n, za * havg)) - 0.5 * opt_.alpha * (ein_[i] - eout_[i])) / za -
                   dot(fr.e3[v], cross(n, hin_[i]));
        }
    lift_edge_flux(f1_, g, d_.ref, std::span<double>(dH1, N));
    lift_edge_flux(f2_, g, d_.ref, std::span<double>(dH2, N));
    lift_edge_flux(f3_, g, d_.ref, std::span<double>(dE3, N));
    for (int i = 0; i < N; ++i) {
      const double m = g.mass[i];
      dH1[i] = dH1[i] / (m * mat.mu1) - mat.sigma_star1 * H1[i] / mat.mu1;
      dH2[i] = dH2[i] / (m * mat.mu2) - mat.sigma_star2 * H2[i] / mat.mu2;
      dE3[i] = dE3[i] / (m * mat.eps3) - mat.sigma3 * E3[i] / mat.eps3;
    }
  }

 private:
  const SurfaceDiscretization& d_;
  MaxwellOptions opt_;
  std::vector<Vec3> e31_, e32_, H_, hin_, hout_;
  std::vector<double> ein_, eout_, f1_, f2_, f3_;
};

inline double maxwell_energy(const State& y, const ElementGeometry& g, const MaxwellMaterial& mat) {
  const int N = g.num_nodes();
  double total = 0.0;
  for (int e = 0; e < g.n_elements; ++e) {
    double s = 0.0;
    for (int k = 0; k < g.npe; ++k) {
      const int i = e * g.npe + k;
      s += g.mass[i] * (mat.mu1 * y[i] * y[i] + mat.mu2 * y[N + i] * y[N + i] + mat.eps3 * y[2 * N + i] * y[2 * N + i]);
    }
    total += s;
  }
  return 0.5 * total;
}

inline int nearest_node(const ElementGeometry& g, const Vec3& x) {
  int best = 0;
  double bd = 1e300;
  for (int i = 0; i < g.num_nodes(); ++i) {
    const double dd = norm(g.position[i] - x);
    if (dd < bd) {
      bd = dd;
      best = i;
    }
  }
  return best;
}

struct MaxwellResult {
  DiagnosticsSeries series;
  MaxwellTMState final_state;
  std::vector<double> energy;   // at every step, including t=0
  std::vector<std::vector<double>> probe_values;  // [probe][record]
  std::vector<double> probe_times;

  // largest step-to-step energy increase relative to E(0)
  double max_energy_increase() const {
    double m = 0.0;
    for (size_t i = 1; i < energy.size(); ++i) m = std::max(m, (energy[i] - energy[i - 1]) / energy.front());
    return m;
  }
  bool energy_monotone(double rel_tol = 1e-13) const { return max_energy_increase() <= rel_tol; }
};

// Records energy_loss = (E(0) - E(t)) / E(0) each step (series rows every
// `cadence` steps). Probe values are signed, so they are kept outside the series.
inline MaxwellResult maxwell_tm_run(const SurfaceDiscretization& d, const MaxwellPulse& pulse,
                                    const MaxwellOptions& opt = {}) {
  opt.validate();
  const auto& g = d.geom;
  const int N = d.num_nodes();
  State y(3 * N, 0.0);
  for (int i = 0; i < N; ++i) y[2 * N + i] = pulse(g.position[i]);
  MaxwellTMOperator op(d, opt);
  MaxwellResult res;
  res.series = DiagnosticsSeries({"energy_loss", "energy_rel_err"});
  res.series.metadata["energy_loss_sign"] = "positive when energy decreased";
  std::vector<int> probe_nodes;
  for (const auto& p : opt.probes) probe_nodes.push_back(nearest_node(g, p));
  res.probe_values.resize(probe_nodes.size());
  const double E0 = maxwell_energy(y, g, opt.material);
  res.energy.push_back(E0);
  auto rel = [&](double E) { return E0 > 0.0 ? (E0 - E) / E0 : 0.0; };
  auto record = [&](double t, const State& s) {
    const double loss = rel(res.energy.back());
    res.series.add(t, {std::max(loss, 0.0), std::abs(loss)});
    for (size_t p = 0; p < probe_nodes.size(); ++p) res.probe_values[p].push_back(s[2 * N + probe_nodes[p]]);
    res.probe_times.push_back(t);
  };
  const int cadence = std::max(1, opt.cadence);
  march_rk4(
      y, opt.dt, opt.t_final, [&](double t, const State& s, State& ds) { op(t, s, ds); },
      [&](double t, const State& s, long step, bool last) {
        if (step > 0) res.energy.push_back(maxwell_energy(s, g, opt.material));
        if (step % cadence == 0 || last) record(t, s);
      });
  res.final_state = {ScalarField(g, std::vector<double>(y.begin(), y.begin() + N)),
                     ScalarField(g, std::vector<double>(y.begin() + N, y.begin() + 2 * N)),
                     ScalarField(g, std::vector<double>(y.begin() + 2 * N, y.end()))};
  return res;
}

inline DiagnosticsSeries maxwell_tm_solve(const SurfaceDiscretization& d, const MaxwellPulse& pulse,
                                          const MaxwellOptions& opt = {}) {
  return maxwell_tm_run(d, pulse, opt).series;
}

}  // namespace mmf
