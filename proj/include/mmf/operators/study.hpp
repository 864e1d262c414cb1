#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "mmf/diagnostics/norms.hpp"
#include "mmf/mesh/high_order_mesh.hpp"
#include "mmf/operators/operators.hpp"
#include "mmf/operators/rossby_haurwitz.hpp"

namespace mmf {

struct OperatorResult {
  std::vector<double> values;   // scalar result, or Cartesian x,y,z triples for gradients
  double l2_error = 0.0;
  double linf_error = 0.0;
};

// Extra sampling orders used to integrate error norms.
inline constexpr int kNormOversampling = 10;

// Applies `op` to the Rossby-Haurwitz field sampled at the (radially projected)
// nodes and measures the error on an over-integration grid. Divergence and curl
// errors are scaled by the RMS of the exact curl, gradient errors by the RMS of
// the exact gradient magnitude.
inline OperatorResult evaluate_operator_on_rh(OperatorId op, const SurfaceDiscretization& d,
                                              const RossbyHaurwitzParams& params = {}) {
  const auto& g = d.geom;
  const int n = d.num_nodes();
  OperatorResult res;
  const auto fine = make_fine_grid(*d.mesh, d.order(), d.order() + kNormOversampling);
  const auto& fg = fine.geom;
  const int nf = fg.num_nodes();
  std::vector<double> err(nf), ref(nf);

  if (is_gradient(op)) {
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = rh_scalar(UnitSpherePoint(g.position[i]), params);
    const ScalarField F(g, std::move(f));
    const auto G = op == OperatorId::GradDirect ? gradient_direct(F, d) : gradient_weak(F, d);
    std::vector<double> cart[3];
    res.values.resize(3 * n);
    for (int c = 0; c < 3; ++c) {
      std::vector<double> comp(n);
      for (int i = 0; i < n; ++i) {
        comp[i] = G.v1[i] * d.frames.e1[i][c] + G.v2[i] * d.frames.e2[i][c];
        res.values[3 * i + c] = comp[i];
      }
      cart[c] = interpolate_to_fine(comp, fine);
    }
    for (int i = 0; i < nf; ++i) {
      const Vec3 N = fg.normal[i];
      Vec3 ex = rh_scalar_gradient(UnitSpherePoint(fg.position[i]), params);
      ex = ex - dot(ex, N) * N;
      err[i] = norm(Vec3{cart[0][i], cart[1][i], cart[2][i]} - ex);
      ref[i] = norm(ex);
    }
  } else {
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      const Vec3 V = rh_velocity_vector(UnitSpherePoint(g.position[i]), params);
      a[i] = dot(V, d.frames.e1[i]);
      b[i] = dot(V, d.frames.e2[i]);
    }
    const FrameVectorField v{ScalarField(g, std::move(a)), ScalarField(g, std::move(b))};
    ScalarField r;
    switch (op) {
      case OperatorId::DivDirect: r = divergence_direct(v, d); break;
      case OperatorId::DivWeak: r = divergence_weak(v, d); break;
      case OperatorId::CurlDirect: r = curl_direct(v, d); break;
      default: r = curl_weak(v, d); break;
    }
    res.values = r.values();
    const auto rf = interpolate_to_fine(r.view(), fine);
    const bool is_div = op == OperatorId::DivDirect || op == OperatorId::DivWeak;
    for (int i = 0; i < nf; ++i) {
      const double curl = rh_curl(UnitSpherePoint(fg.position[i]), params);
      err[i] = std::abs(rf[i] - (is_div ? 0.0 : curl));
      ref[i] = curl;
    }
  }
  // The gradient test scalar has a cone point at each pole. Elements within one
  // element of it converge only algebraically-slowly, so the cap and its first
  // ring are left out of the gradient norm for either alignment.
  // On very coarse meshes the ring covers everything; fall back to the caps.
  auto active = d.active;
  if (is_gradient(op)) {
    const auto caps = pole_cap_mask(d.mesh->linear, kPoleCapColatitude + d.mesh->linear.h);
    bool any = false;
    for (size_t e = 0; e < active.size(); ++e) any = any || (active[e] && caps[e]);
    if (any)
      for (size_t e = 0; e < active.size(); ++e) active[e] = active[e] && caps[e];
  }
  const double scale = rms_over(ref, fg, active);
  const auto nrm = normalized_error(err, fg, active, scale);
  res.l2_error = nrm.l2;
  res.linf_error = nrm.linf;
  return res;
}

struct StudyRow {
  int p = 0;
  long long dof = 0;
  double l2 = 0.0;
  double linf = 0.0;
};

inline long long quad_dof(int n_per_face, int p) { return 6LL * n_per_face * n_per_face * (p + 1) * (p + 1); }

inline std::vector<StudyRow> run_operator_study(OperatorId op, const NodeStrategy& strategy, FrameAlignment alignment,
                                                int p_min, int p_max, int n_per_face,
                                                const RossbyHaurwitzParams& params = {}) {
  if (p_min < 1 || p_max < p_min) throw UsageError("invalid p range");
  const auto lin = generate_cubed_sphere(n_per_face);
  std::vector<StudyRow> rows;
  for (int p = p_min; p <= p_max; ++p) {
    auto mesh = std::make_shared<const HighOrderMesh>(insert_high_order_nodes(lin, p, strategy));
    const auto d = make_discretization(mesh, p, alignment);
    const auto r = evaluate_operator_on_rh(op, d, params);
    rows.push_back({p, quad_dof(n_per_face, p), r.l2_error, r.linf_error});
  }
  return rows;
}

// Least-squares slope of log10(y) against x.
inline double log10_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += std::log10(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (std::log10(y[i]) - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Fitted exponential decay rate of the L2 column in decades per order.
inline double fitted_decay_rate(const std::vector<StudyRow>& rows) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(r.p);
    y.push_back(r.l2);
  }
  return -log10_slope(x, y);
}

}  // namespace mmf
