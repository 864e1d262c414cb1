#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mmf/sem/overintegration.hpp"
#include "mmf/solvers/dg_common.hpp"
#include "mmf/solvers/williamson.hpp"

namespace mmf {

// Conserved variables in frame components: H, Hu1, Hu2. Static fields ride along.
struct SWEState {
  ScalarField H, Hu1, Hu2;
  ScalarField H0;  // still-water depth
  ScalarField f;   // Coriolis parameter
  double g_tilde = SweUnits::g_tilde();
  double Omega = SweUnits::omega();

  std::vector<double> eta() const {
    std::vector<double> v(H.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = H[i] - H0[i];
    return v;
  }
};

inline State pack(const SWEState& s) {
  const size_t N = s.H.size();
  State y(3 * N);
  for (size_t i = 0; i < N; ++i) {
    y[i] = s.H[i];
    y[N + i] = s.Hu1[i];
    y[2 * N + i] = s.Hu2[i];
  }
  return y;
}

inline SWEState williamson_initial_state(const WilliamsonCase& c, const SurfaceDiscretization& d) {
  const auto& g = d.geom;
  const int N = d.num_nodes();
  std::vector<double> H(N), Hu1(N), Hu2(N), H0(N), f(N);
  for (int i = 0; i < N; ++i) {
    const auto s = c.evaluate(g.position[i], 0.0);
    H[i] = s.H;
    H0[i] = s.H0;
    f[i] = s.f;
    Hu1[i] = s.H * dot(s.u, d.frames.e1[i]);
    Hu2[i] = s.H * dot(s.u, d.frames.e2[i]);
  }
  return {ScalarField(g, std::move(H)), ScalarField(g, std::move(Hu1)), ScalarField(g, std::move(Hu2)),
          ScalarField(g, std::move(H0)), ScalarField(g, std::move(f))};
}

// DG residual of the moving-frame shallow-water system:
//   H:    +int H u.grad(phi) - int_edges (H u.n)^ phi
//   Hu_i: +int (H u u_i + g H^2/2 e^i).grad(phi) + int g H^2/2 div(e^i) phi
//         + int H u_j u_k (grad_{e^j} e^i).e^k phi - int H (u_m de^m/dt).e^i phi
//         + (-1)^{i+1} int f H u_{3-i} phi + int g H grad(H0).e^i phi
//         - int_edges (F^ . e^i) phi
// with Lax-Friedrichs traces on the 3D normal fluxes, wave speed |u.n| + sqrt(g H).
// With quadrature_order > p the advective flux H u u_i and the connection term
// are integrated on a GLL(quadrature_order) grid; pressure stays collocated so
// the lake at rest remains an exact discrete steady state.
class SweOperator {
 public:
  SweOperator(const SurfaceDiscretization& d, const ScalarField& H0, const ScalarField& f, double g_tilde,
              int quadrature_order = 0)
      : d_(d), f_(f.values()), g_(g_tilde) {
    gradH0_ = grad_physical(H0, d.geom, d.ref);
    // stationary frames
    de1_dt_.assign(d.num_nodes(), Vec3{});
    de2_dt_.assign(d.num_nodes(), Vec3{});
    if (quadrature_order > d.order()) {
      oi_ = std::make_shared<OverIntegration>(*d.mesh, d.order(), quadrature_order);
      const int mf = oi_->fine_npe(), npe = d.npe();
      const size_t nf = static_cast<size_t>(d.n_elements()) * mf;
      fe1_.resize(nf);
      fe2_.resize(nf);
      fg11_.resize(nf);
      fg21_.resize(nf);
      for (int e = 0; e < d.n_elements(); ++e) {
        oi_->interpolate(d.frames.e1.data() + e * npe, fe1_.data() + e * mf);
        oi_->interpolate(d.frames.e2.data() + e * npe, fe2_.data() + e * mf);
        oi_->interpolate(d.conn.gamma_2_11.data() + e * npe, fg11_.data() + e * mf);
        oi_->interpolate(d.conn.gamma_2_21.data() + e * npe, fg21_.data() + e * mf);
      }
    }
  }

  bool over_integrated() const { return oi_ != nullptr; }

  void operator()(double t, const State& y, State& dy) {
    const auto& g = d_.geom;
    const auto& fr = d_.frames;
    const auto& cn = d_.conn;
    const int N = g.num_nodes(), NE = g.num_edge_points();
    const double* H = y.data();
    const double* Q1 = y.data() + N;
    const double* Q2 = y.data() + 2 * N;
    for (int i = 0; i < N; ++i)
      if (!(H[i] > 0.0)) throw PositivityLoss("non-positive depth at t=" + std::to_string(t), t);
    dy.assign(3 * N, 0.0);
    double* dH = dy.data();
    double* dQ1 = dy.data() + N;
    double* dQ2 = dy.data() + 2 * N;
    m_.resize(N);
    for (int i = 0; i < N; ++i) m_[i] = Q1[i] * fr.e1[i] + Q2[i] * fr.e2[i];

    for_each_element(g.n_elements, [&](int e) {
      thread_local std::vector<Vec3> V;
      V.resize(g.npe);
      const int b = e * g.npe;
      for (int k = 0; k < g.npe; ++k) V[k] = m_[b + k];
      add_weak_divergence_volume(V.data(), g, d_.ref, e, dH + b, -1.0);
      const bool fine = oi_ != nullptr;
      for (int k = 0; k < g.npe; ++k) {
        const int id = b + k;
        V[k] = (0.5 * g_ * H[id] * H[id]) * fr.e1[id];
        if (!fine) V[k] += (Q1[id] / H[id]) * m_[id];
      }
      add_weak_divergence_volume(V.data(), g, d_.ref, e, dQ1 + b, -1.0);
      for (int k = 0; k < g.npe; ++k) {
        const int id = b + k;
        V[k] = (0.5 * g_ * H[id] * H[id]) * fr.e2[id];
        if (!fine) V[k] += (Q2[id] / H[id]) * m_[id];
      }
      add_weak_divergence_volume(V.data(), g, d_.ref, e, dQ2 + b, -1.0);
      for (int k = 0; k < g.npe; ++k) {
        const int id = b + k;
        const double h = H[id], u1 = Q1[id] / h, u2 = Q2[id] / h;
        const double p = 0.5 * g_ * h * h;
        const double kappa = fine ? 0.0 : u1 * cn.gamma_2_11[id] + u2 * cn.gamma_2_21[id];
        const Vec3 dedt = u1 * de1_dt_[id] + u2 * de2_dt_[id];
        const double s1 = p * cn.div_e1[id] + h * u2 * kappa - h * dot(dedt, fr.e1[id]) + f_[id] * h * u2 +
                          g_ * h * dot(gradH0_[id], fr.e1[id]);
        const double s2 = p * cn.div_e2[id] - h * u1 * kappa - h * dot(dedt, fr.e2[id]) - f_[id] * h * u1 +
                          g_ * h * dot(gradH0_[id], fr.e2[id]);
        dQ1[id] += g.mass[id] * s1;
        dQ2[id] += g.mass[id] * s2;
      }
      if (fine) add_fine_terms(e, H + b, b, dQ1 + b, dQ2 + b);
    });

    gather_traces(H, g, hin_, hout_);
    gather_traces(m_.data(), g, min_, mout_);
    fh_.resize(NE);
    f1_.resize(NE);
    f2_.resize(NE);
    for (int e = 0; e < g.n_elements; ++e)
      for (int le = 0; le < 4; ++le)
        for (int k = 0; k < g.n1d; ++k) {
          const int i = g.edge_index(e, le, k);
          const int v = g.volume_index_of_edge(e, le, k);
          const Vec3& n = g.edge_normal[i];
          const double hm = hin_[i], hp = hout_[i];
          const Vec3 &mm = min_[i], &mp = mout_[i];
          const double unm = dot(mm, n) / hm, unp = dot(mp, n) / hp;
          const double lam = std::max(std::abs(unm) + std::sqrt(g_ * hm), std::abs(unp) + std::sqrt(g_ * hp));
          fh_[i] = -(0.5 * (dot(mm, n) + dot(mp, n)) + 0.5 * lam * (hm - hp));
          const Vec3 F = 0.5 * (unm * mm + unp * mp + (0.5 * g_ * (hm * hm + hp * hp)) * n) + 0.5 * lam * (mm - mp);
          f1_[i] = -dot(F, fr.e1[v]);
          f2_[i] = -dot(F, fr.e2[v]);
        }
    lift_edge_flux(fh_, g, d_.ref, std::span<double>(dH, N));
    lift_edge_flux(f1_, g, d_.ref, std::span<double>(dQ1, N));
    lift_edge_flux(f2_, g, d_.ref, std::span<double>(dQ2, N));
    for (int i = 0; i < N; ++i) {
      const double m = g.mass[i];
      dH[i] /= m;
      dQ1[i] /= m;
      dQ2[i] /= m;
    }
  }

 private:
  void add_fine_terms(int e, const double* H, int b, double* r1, double* r2) const {
    const int mf = oi_->fine_npe();
    thread_local std::vector<double> h, s1, s2;
    thread_local std::vector<Vec3> m, V1, V2;
    h.resize(mf);
    m.resize(mf);
    V1.resize(mf);
    V2.resize(mf);
    s1.resize(mf);
    s2.resize(mf);
    oi_->interpolate(H, h.data());
    oi_->interpolate(m_.data() + b, m.data());
    const size_t fb = static_cast<size_t>(e) * mf;
    for (int k = 0; k < mf; ++k) {
      const double u1 = dot(m[k], fe1_[fb + k]) / h[k], u2 = dot(m[k], fe2_[fb + k]) / h[k];
      V1[k] = u1 * m[k];
      V2[k] = u2 * m[k];
      const double kappa = u1 * fg11_[fb + k] + u2 * fg21_[fb + k];
      s1[k] = h[k] * u2 * kappa;
      s2[k] = -h[k] * u1 * kappa;
    }
    oi_->add_weak_divergence(V1.data(), e, r1, -1.0);
    oi_->add_weak_divergence(V2.data(), e, r2, -1.0);
    oi_->add_source(s1.data(), e, r1);
    oi_->add_source(s2.data(), e, r2);
  }

  const SurfaceDiscretization& d_;
  std::shared_ptr<const OverIntegration> oi_;
  std::vector<Vec3> fe1_, fe2_;
  std::vector<double> fg11_, fg21_;
  std::vector<double> f_;
  double g_;
  std::vector<Vec3> gradH0_, de1_dt_, de2_dt_;
  std::vector<Vec3> m_, min_, mout_;
  std::vector<double> hin_, hout_, fh_, f1_, f2_;
};

inline State swe_rhs(const SWEState& s, const SurfaceDiscretization& d, double t = 0.0) {
  SweOperator op(d, s.H0, s.f, s.g_tilde);
  State y = pack(s), dy;
  op(t, y, dy);
  return dy;
}

// E = int (H |u|^2 / 2 + g (H^2 - H0^2) / 2) with the given quadrature weights.
inline double swe_energy(const State& y, const SurfaceDiscretization& d, const std::vector<double>& H0, double g,
                         std::span<const double> w) {
  const int N = d.num_nodes();
  double E = 0.0;
  for (int i = 0; i < N; ++i) {
    const double h = y[i];
    const double q2 = y[N + i] * y[N + i] + y[2 * N + i] * y[2 * N + i];
    E += w[i] * (0.5 * q2 / h + 0.5 * g * (h * h - H0[i] * H0[i]));
  }
  return E;
}

struct SweResult {
  DiagnosticsSeries series;
  State final_state;
};

// Errors: normalized depth error ||H - H_exact|| / ||H_exact|| (L2) and
// max|H - H_exact| / max|H_exact| on the over-integration grid, for cases with
// a closed-form solution. Mass and energy are measured on the true sphere.
inline SweResult swe_run_case(const SurfaceDiscretization& d, const WilliamsonCase& c, int cadence = 100) {
  const auto& g = d.geom;
  const int N = d.num_nodes();
  const SWEState s0 = williamson_initial_state(c, d);
  State y = pack(s0);
  SweOperator op(d, s0.H0, s0.f, s0.g_tilde, c.quadrature_for(d.order()));
  const auto w = sphere_mass_weights(g);
  const double mass0 = weighted_sum(std::span<const double>(y.data(), N), w);
  const double E0 = swe_energy(y, d, s0.H0.values(), s0.g_tilde, w);
  SweResult res;
  const bool exact = c.has_exact();
  res.series = exact ? DiagnosticsSeries({"l2", "linf", "mass_rel_err", "energy_rel_err"})
                     : DiagnosticsSeries({"mass_rel_err", "energy_rel_err"});
  res.series.metadata["case"] = to_string(c.kind);
  std::optional<FineGrid> fine;
  if (exact) fine = make_fine_grid(*d.mesh, d.order(), d.order() + kFineOversampling);
  integrate_rk4(y, c.step(), c.final_time(), cadence, op, [&](double t, const State& s) {
    const double mass = weighted_sum(std::span<const double>(s.data(), N), w);
    const double E = swe_energy(s, d, s0.H0.values(), s0.g_tilde, w);
    std::vector<double> row;
    if (exact) {
      const auto err = absolute_error_fine(std::span<const double>(s.data(), N), *fine,
                                           [&](const Vec3& x) { return c.evaluate(x, t).H; });
      const auto ref = absolute_error_fine(std::vector<double>(N, 0.0), *fine,
                                           [&](const Vec3& x) { return -c.evaluate(x, t).H; });
      row = {err.l2 / ref.l2, err.linf / ref.linf};
    }
    row.push_back(relative_change(mass, mass0));
    row.push_back(relative_change(E, E0));
    res.series.add(t, row);
  });
  res.final_state = std::move(y);
  return res;
}

}  // namespace mmf
