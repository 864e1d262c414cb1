#pragma once

#include <span>
#include <string>
#include <vector>

#include "mmf/discretization.hpp"

namespace mmf {

namespace detail {
inline std::vector<Vec3> frame_to_cartesian(const FrameVectorField& v, const SurfaceDiscretization& d) {
  std::vector<Vec3> V(d.num_nodes());
  for (int i = 0; i < d.num_nodes(); ++i) V[i] = v.v1[i] * d.frames.e1[i] + v.v2[i] * d.frames.e2[i];
  return V;
}
inline void divide_by_mass(std::vector<double>& r, const ElementGeometry& g) {
  for (size_t i = 0; i < r.size(); ++i) r[i] /= g.mass[i];
}
}  // namespace detail

inline std::vector<Vec3> frame_to_cartesian(const FrameVectorField& v, const SurfaceDiscretization& d) {
  return detail::frame_to_cartesian(v, d);
}

inline ScalarField divergence_direct(const FrameVectorField& v, const SurfaceDiscretization& d) {
  const auto g1 = grad_physical(v.v1, d.geom, d.ref);
  const auto g2 = grad_physical(v.v2, d.geom, d.ref);
  std::vector<double> out(d.num_nodes());
  const auto& c = d.conn;
  for (int i = 0; i < d.num_nodes(); ++i)
    out[i] = dot(g1[i], d.frames.e1[i]) - c.gamma_2_11[i] * v.v2[i] + dot(g2[i], d.frames.e2[i]) +
             c.gamma_2_21[i] * v.v1[i];
  return ScalarField(d.geom, std::move(out));
}

inline ScalarField curl_direct(const FrameVectorField& v, const SurfaceDiscretization& d) {
  const auto g1 = grad_physical(v.v1, d.geom, d.ref);
  const auto g2 = grad_physical(v.v2, d.geom, d.ref);
  std::vector<double> out(d.num_nodes());
  const auto& c = d.conn;
  for (int i = 0; i < d.num_nodes(); ++i)
    out[i] = dot(g2[i], d.frames.e1[i]) - dot(g1[i], d.frames.e2[i]) + c.gamma_2_11[i] * v.v1[i] +
             c.gamma_2_21[i] * v.v2[i];
  return ScalarField(d.geom, std::move(out));
}

// -int grad(phi).v + int_edges phi {v}.n, central interface value.
inline ScalarField divergence_weak(const FrameVectorField& v, const SurfaceDiscretization& d) {
  const auto& g = d.geom;
  const auto V = detail::frame_to_cartesian(v, d);
  std::vector<double> r(d.num_nodes(), 0.0);
  for (int e = 0; e < g.n_elements; ++e)
    add_weak_divergence_volume(V.data() + e * g.npe, g, d.ref, e, r.data() + e * g.npe);
  const auto tr = edge_trace_exchange<Vec3>(V, g);
  std::vector<double> flux(g.num_edge_points());
  for (int i = 0; i < g.num_edge_points(); ++i) flux[i] = dot(0.5 * (tr.inner[i] + tr.outer[i]), g.edge_normal[i]);
  lift_edge_flux(flux, g, d.ref, r);
  detail::divide_by_mass(r, g);
  return ScalarField(g, std::move(r));
}

// Radial curl: sum_m [int (grad(phi).e3 x e^m) v_m + int v_m e^m.curl(e3) phi]
// + int_edges e3.(n x v*) phi with the central v*.
inline ScalarField curl_weak(const FrameVectorField& v, const SurfaceDiscretization& d) {
  const auto& g = d.geom;
  const auto V = detail::frame_to_cartesian(v, d);
  std::vector<Vec3> W(d.num_nodes());
  for (int i = 0; i < d.num_nodes(); ++i) W[i] = cross(d.frames.e3[i], V[i]);
  std::vector<double> r(d.num_nodes(), 0.0);
  for (int e = 0; e < g.n_elements; ++e)
    add_weak_divergence_volume(W.data() + e * g.npe, g, d.ref, e, r.data() + e * g.npe, -1.0);
  for (int i = 0; i < d.num_nodes(); ++i)
    r[i] += g.mass[i] * (v.v1[i] * d.conn.curl_e3_dot_e1[i] + v.v2[i] * d.conn.curl_e3_dot_e2[i]);
  const auto tr = edge_trace_exchange<Vec3>(V, g);
  std::vector<double> flux(g.num_edge_points());
  for (int e = 0; e < g.n_elements; ++e)
    for (int le = 0; le < 4; ++le)
      for (int k = 0; k < g.n1d; ++k) {
        const int i = g.edge_index(e, le, k);
        const Vec3 vs = 0.5 * (tr.inner[i] + tr.outer[i]);
        flux[i] = dot(d.frames.e3[g.volume_index_of_edge(e, le, k)], cross(g.edge_normal[i], vs));
      }
  lift_edge_flux(flux, g, d.ref, r);
  detail::divide_by_mass(r, g);
  return ScalarField(g, std::move(r));
}

inline FrameVectorField gradient_direct(const ScalarField& f, const SurfaceDiscretization& d) {
  const auto gr = grad_physical(f, d.geom, d.ref);
  std::vector<double> a(d.num_nodes()), b(d.num_nodes());
  for (int i = 0; i < d.num_nodes(); ++i) {
    a[i] = dot(gr[i], d.frames.e1[i]);
    b[i] = dot(gr[i], d.frames.e2[i]);
  }
  return {ScalarField(d.geom, std::move(a)), ScalarField(d.geom, std::move(b))};
}

// Component i: -int (grad(phi).e^i) f - int f div(e^i) phi + int_edges (e^i.n) phi f~
// with the upwind trace f~ = f- when e^i.n >= 0, else f+.
inline FrameVectorField gradient_weak(const ScalarField& f, const SurfaceDiscretization& d) {
  const auto& g = d.geom;
  const auto tr = edge_trace_exchange(f, g);
  FrameVectorField out;
  for (int comp = 0; comp < 2; ++comp) {
    const auto& E = comp == 0 ? d.frames.e1 : d.frames.e2;
    const auto& div = comp == 0 ? d.conn.div_e1 : d.conn.div_e2;
    std::vector<Vec3> V(d.num_nodes());
    std::vector<double> r(d.num_nodes(), 0.0);
    for (int i = 0; i < d.num_nodes(); ++i) {
      V[i] = f[i] * E[i];
      r[i] = -g.mass[i] * f[i] * div[i];
    }
    for (int e = 0; e < g.n_elements; ++e)
      add_weak_divergence_volume(V.data() + e * g.npe, g, d.ref, e, r.data() + e * g.npe);
    std::vector<double> flux(g.num_edge_points());
    for (int e = 0; e < g.n_elements; ++e)
      for (int le = 0; le < 4; ++le)
        for (int k = 0; k < g.n1d; ++k) {
          const int i = g.edge_index(e, le, k);
          const double en = dot(E[g.volume_index_of_edge(e, le, k)], g.edge_normal[i]);
          flux[i] = en * (en >= 0.0 ? tr.inner[i] : tr.outer[i]);
        }
    lift_edge_flux(flux, g, d.ref, r);
    detail::divide_by_mass(r, g);
    (comp == 0 ? out.v1 : out.v2) = ScalarField(g, std::move(r));
  }
  return out;
}

enum class OperatorId { DivDirect, DivWeak, CurlDirect, CurlWeak, GradDirect, GradWeak };

inline OperatorId parse_operator(const std::string& s) {
  if (s == "div-direct") return OperatorId::DivDirect;
  if (s == "div-weak") return OperatorId::DivWeak;
  if (s == "curl-direct") return OperatorId::CurlDirect;
  if (s == "curl-weak") return OperatorId::CurlWeak;
  if (s == "grad-direct") return OperatorId::GradDirect;
  if (s == "grad-weak") return OperatorId::GradWeak;
  throw UsageError("unknown operator '" + s + "' (div-direct|div-weak|curl-direct|curl-weak|grad-direct|grad-weak)");
}

inline std::string to_string(OperatorId op) {
  switch (op) {
    case OperatorId::DivDirect: return "div-direct";
    case OperatorId::DivWeak: return "div-weak";
    case OperatorId::CurlDirect: return "curl-direct";
    case OperatorId::CurlWeak: return "curl-weak";
    case OperatorId::GradDirect: return "grad-direct";
    default: return "grad-weak";
  }
}

inline bool is_gradient(OperatorId op) { return op == OperatorId::GradDirect || op == OperatorId::GradWeak; }

}  // namespace mmf
