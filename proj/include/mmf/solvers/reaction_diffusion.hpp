#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "mmf/solvers/dg_common.hpp"

namespace mmf {

// u_t = mu lap u + a u + b v,  v_t = nu lap v + c u + d v.
struct ReactionDiffusionParams {
  double mu = 1e-3, nu = 2e-3;
  double a = -6.0, b = 4.0, c = 5.0, d = -4.0;
  int degree = 2, order = 1;  // spherical harmonic of the initial condition
  double u_amplitude = 1.0, v_amplitude = 1.0;
  double dt = 1e-4;
  double t_final = 1.0;
  double ldg_alpha = 200.0;
  double ldg_beta = 0.5;
  int cadence = 100;

  void validate() const {
    if (degree < 0 || order < 0 || order > degree) throw ConfigError("harmonic needs 0 <= m <= n");
    if (!(mu >= 0.0 && nu >= 0.0)) throw ConfigError("diffusivities must be non-negative");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  }
};

using Mat2 = std::array<double, 4>;  // row major

inline Mat2 rd_mode_matrix(const ReactionDiffusionParams& p) {
  const double l = p.degree * (p.degree + 1.0);
  return {-p.mu * l + p.a, p.b, p.c, -p.nu * l + p.d};
}

// exp(M t) via gamma = tr/2, delta = sqrt(tr^2/4 - det):
// e^{gamma t} [C(t) I + S(t) (M - gamma I)], with cosh/sinh(delta t)/delta,
// continued to cos/sin when delta^2 < 0.
inline Mat2 mat2_exp(const Mat2& M, double t) {
  const double gamma = 0.5 * (M[0] + M[3]);
  const double det = M[0] * M[3] - M[1] * M[2];
  const double d2 = gamma * gamma - det;
  double C, S;
  if (d2 > 0.0) {
    const double dl = std::sqrt(d2);
    C = std::cosh(dl * t);
    S = std::sinh(dl * t) / dl;
  } else if (d2 < 0.0) {
    const double dl = std::sqrt(-d2);
    C = std::cos(dl * t);
    S = std::sin(dl * t) / dl;
  } else {
    C = 1.0;
    S = t;
  }
  const double eg = std::exp(gamma * t);
  return {eg * (C + S * (M[0] - gamma)), eg * S * M[1], eg * S * M[2], eg * (C + S * (M[3] - gamma))};
}

inline double rd_harmonic(double colatitude, double phi, int n, int m) {
  return std::assoc_legendre(n, m, std::cos(colatitude)) * std::cos(m * phi);
}

// Exact (u, v) for the harmonic initial condition; colatitude convention.
inline std::pair<double, double> rd_exact_solution(double colatitude, double phi, double t,
                                                   const ReactionDiffusionParams& p) {
  const Mat2 E = mat2_exp(rd_mode_matrix(p), t);
  const double Y = rd_harmonic(colatitude, phi, p.degree, p.order);
  return {(E[0] * p.u_amplitude + E[1] * p.v_amplitude) * Y, (E[2] * p.u_amplitude + E[3] * p.v_amplitude) * Y};
}

inline std::pair<double, double> rd_exact_solution(const Vec3& x, double t, const ReactionDiffusionParams& p) {
  const UnitSpherePoint s(x);
  return rd_exact_solution(s.colatitude(), s.longitude(), t, p);
}

// LDG diffusion operator div(grad u) in moving frames. With beta = ldg_beta n_L
// (n_L the outward normal of the lower-index element of the edge) the traces are
//   u^ = {u} + beta.[u],  q^ = {q} - beta [q] - alpha [u],
// i.e. u^ from the lower-index side and q^ from the other side, plus a jump penalty.
class LdgLaplacian {
 public:
  LdgLaplacian(const SurfaceDiscretization& d, double alpha, double beta) : d_(d), alpha_(alpha), beta_(beta) {
    const auto& g = d.geom;
    sign_.resize(g.num_edge_points());
    en1_.resize(g.num_edge_points());
    en2_.resize(g.num_edge_points());
    for (int e = 0; e < g.n_elements; ++e)
      for (int le = 0; le < 4; ++le) {
        const int nb = g.nb_element[g.slot(e, le)];
        for (int k = 0; k < g.n1d; ++k) {
          const int id = g.edge_index(e, le, k);
          const int v = g.volume_index_of_edge(e, le, k);
          sign_[id] = (nb < 0 || e < nb) ? 1.0 : -1.0;
          en1_[id] = dot(d.frames.e1[v], g.edge_normal[id]);
          en2_[id] = dot(d.frames.e2[v], g.edge_normal[id]);
        }
      }
  }

  // out = lap u (nodal values, mass already inverted)
  void apply(const double* u, double* out) {
    const auto& g = d_.geom;
    const int N = g.num_nodes(), NE = g.num_edge_points();
    const auto& fr = d_.frames;
    gather_traces(u, g, uin_, uout_);
    // q^i = grad u . e^i, weak form with the u^ trace
    Q_.assign(N, Vec3{});
    for (int comp = 0; comp < 2; ++comp) {
      const auto& E = comp == 0 ? fr.e1 : fr.e2;
      const auto& div = comp == 0 ? d_.conn.div_e1 : d_.conn.div_e2;
      const auto& en = comp == 0 ? en1_ : en2_;
      r_.assign(N, 0.0);
      for_each_element(g.n_elements, [&](int e) {
        thread_local std::vector<Vec3> V;
        V.resize(g.npe);
        for (int k = 0; k < g.npe; ++k) {
          const int id = e * g.npe + k;
          V[k] = u[id] * E[id];
          r_[id] = -g.mass[id] * u[id] * div[id];
        }
        add_weak_divergence_volume(V.data(), g, d_.ref, e, r_.data() + e * g.npe);
      });
      flux_.resize(NE);
      for (int i = 0; i < NE; ++i) {
        const double uhat = 0.5 * (uin_[i] + uout_[i]) + sign_[i] * beta_ * (uin_[i] - uout_[i]);
        flux_[i] = en[i] * uhat;
      }
      lift_edge_flux(flux_, g, d_.ref, r_);
      for (int i = 0; i < N; ++i) Q_[i] += (r_[i] / g.mass[i]) * E[i];
    }
    // lap u = div q, weak form with the q^ trace
    std::fill(out, out + N, 0.0);
    for_each_element(g.n_elements, [&](int e) {
      add_weak_divergence_volume(Q_.data() + e * g.npe, g, d_.ref, e, out + e * g.npe);
    });
    gather_traces(Q_.data(), g, qin_, qout_);
    flux_.resize(NE);
    for (int i = 0; i < NE; ++i) {
      const Vec3& n = g.edge_normal[i];
      const double qm = dot(qin_[i], n), qp = dot(qout_[i], n);
      const double jump_q = qm - qp;  // [q] with n+ = -n-
      const double jump_u = uin_[i] - uout_[i];
      flux_[i] = 0.5 * (qm + qp) - sign_[i] * beta_ * jump_q - alpha_ * jump_u;
    }
    lift_edge_flux(flux_, g, d_.ref, std::span<double>(out, N));
    for (int i = 0; i < N; ++i) out[i] /= g.mass[i];
  }

 private:
  const SurfaceDiscretization& d_;
  double alpha_, beta_;
  std::vector<double> sign_, en1_, en2_;
  std::vector<double> uin_, uout_, r_, flux_;
  std::vector<Vec3> Q_, qin_, qout_;
};

struct ReactionDiffusionResult {
  DiagnosticsSeries series{{"l2", "linf", "l2_v", "linf_v", "mass_rel_err"}};
  std::vector<double> u, v;
};

inline ReactionDiffusionResult reaction_diffusion_run(const SurfaceDiscretization& d,
                                                      const ReactionDiffusionParams& p) {
  p.validate();
  const auto& g = d.geom;
  const int N = d.num_nodes();
  State y(2 * N);
  for (int i = 0; i < N; ++i) {
    const auto [u, v] = rd_exact_solution(g.position[i], 0.0, p);
    y[i] = u;
    y[N + i] = v;
  }
  LdgLaplacian lap(d, p.ldg_alpha, p.ldg_beta);
  std::vector<double> lu(N), lv(N);
  auto rhs = [&](double, const State& s, State& ds) {
    ds.resize(s.size());
    const double* u = s.data();
    const double* v = s.data() + N;
    if (p.mu != 0.0) lap.apply(u, lu.data()); else std::fill(lu.begin(), lu.end(), 0.0);
    if (p.nu != 0.0) lap.apply(v, lv.data()); else std::fill(lv.begin(), lv.end(), 0.0);
    for (int i = 0; i < N; ++i) {
      ds[i] = p.mu * lu[i] + p.a * u[i] + p.b * v[i];
      ds[N + i] = p.nu * lv[i] + p.c * u[i] + p.d * v[i];
    }
  };
  ReactionDiffusionResult res;
  for (const char* c : {"l2", "linf", "l2_v", "linf_v"}) res.series.set_unit(c, "absolute");
  const auto fine = make_fine_grid(*d.mesh, d.order(), d.order() + kFineOversampling);
  // Harmonic initial data has zero mean, so mass drift is measured against the
  // initial L1 mass.
  const double mass0 = integrate(std::span<const double>(y.data(), N), g);
  std::vector<double> absu(N);
  for (int i = 0; i < N; ++i) absu[i] = std::abs(y[i]);
  const double mass_scale = integrate(absu, g);
  res.series.set_unit("mass_rel_err", "relative to L1 mass");
  integrate_rk4(y, p.dt, p.t_final, p.cadence, rhs, [&](double t, const State& s) {
    const std::span<const double> u(s.data(), N), v(s.data() + N, N);
    const auto eu = absolute_error_fine(u, fine, [&](const Vec3& x) { return rd_exact_solution(x, t, p).first; });
    const auto ev = absolute_error_fine(v, fine, [&](const Vec3& x) { return rd_exact_solution(x, t, p).second; });
    res.series.add(t, {eu.l2, eu.linf, ev.l2, ev.linf, mass_scale > 0.0 ? std::abs(integrate(u, g) - mass0) / mass_scale
                                                                     : std::abs(integrate(u, g) - mass0)});
  });
  res.u.assign(y.begin(), y.begin() + N);
  res.v.assign(y.begin() + N, y.end());
  return res;
}

inline DiagnosticsSeries reaction_diffusion_solve(const SurfaceDiscretization& d, const ReactionDiffusionParams& p) {
  return reaction_diffusion_run(d, p).series;
}

}  // namespace mmf
