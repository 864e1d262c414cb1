#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mmf/core/errors.hpp"
#include "mmf/mesh/cubed_sphere.hpp"
#include "mmf/sem/fields.hpp"

namespace mmf {

enum class FrameAlignment { Spherical, Local };

inline FrameAlignment parse_alignment(const std::string& s) {
  if (s == "spherical") return FrameAlignment::Spherical;
  if (s == "local") return FrameAlignment::Local;
  throw UsageError("unknown alignment '" + s + "' (expected spherical|local)");
}
inline std::string to_string(FrameAlignment a) { return a == FrameAlignment::Spherical ? "spherical" : "local"; }

struct MovingFrameField {
  FrameAlignment alignment = FrameAlignment::Local;
  std::vector<Vec3> e1, e2, e3;
  // elements that received Local frames because Spherical ones are undefined there
  std::vector<char> local_fallback;
};

inline constexpr double kPoleCapColatitude = 0.15;

// 1 for elements away from both poles: no vertex within `colatitude` of a pole.
inline std::vector<char> pole_cap_mask(const LinearSphereMesh& m, double colatitude = kPoleCapColatitude) {
  std::vector<char> active(m.num_elements(), 1);
  for (int e = 0; e < m.num_elements(); ++e)
    for (int c = 0; c < 4; ++c) {
      const double th = m.vertices[m.elements[e][c]].colatitude();
      if (th < colatitude || th > std::numbers::pi - colatitude) active[e] = 0;
    }
  return active;
}

// Spherical frames follow east/north projected onto the tangent plane of the
// discrete surface. Elements with active[e] == 0 get Local frames instead; an
// empty mask means every element is active.
inline MovingFrameField build_frames(const ElementGeometry& g, FrameAlignment alignment,
                                     const std::vector<char>& active = {}) {
  MovingFrameField f;
  f.alignment = alignment;
  const int total = g.num_nodes();
  f.e1.resize(total);
  f.e2.resize(total);
  f.e3.resize(total);
  f.local_fallback.assign(g.n_elements, 0);
  for (int e = 0; e < g.n_elements; ++e) {
    const bool spherical = alignment == FrameAlignment::Spherical && (active.empty() || active[e]);
    f.local_fallback[e] = alignment == FrameAlignment::Spherical && !spherical;
    for (int k = 0; k < g.npe; ++k) {
      const int id = e * g.npe + k;
      const Vec3 N = g.normal[id];
      Vec3 a;
      if (spherical) {
        const Vec3 x = g.position[id];
        if (std::abs(x.z) > (1.0 - 1e-8) * norm(x))
          throw PoleProximity("spherical frame requested at a point within 1e-8 of a pole (element " +
                              std::to_string(e) + ")");
        a = Vec3{-x.y, x.x, 0.0};
      } else {
        a = g.t1[id];
      }
      a = normalized(a - dot(a, N) * N);
      f.e1[id] = a;
      f.e3[id] = N;
      f.e2[id] = cross(N, a);
    }
  }
  return f;
}

// Connection data per node. Gamma^i_jk is (grad_{e^j} e^k) . e^i, so that
// div v = grad v1.e1 - G2_11 v2 + grad v2.e2 + G2_21 v1.
struct ConnectionField {
  std::vector<double> div_e1, div_e2;
  std::vector<double> curl3_e1, curl3_e2;          // e3 . curl e^i
  std::vector<double> curl_e3_dot_e1, curl_e3_dot_e2;  // e^m . curl e3
  std::vector<double> gamma_2_11, gamma_2_21, gamma_2_12;
};

// Divergences use the conservative form (1/J) d_a(J g^a . e^i); the radial curl
// of e^i uses the identity e3 . curl e^i = -div(e3 x e^i) + e^i . curl e3 with the
// last term dropped (it vanishes for the exact normal of the discrete surface).
// Both choices make constant states exact steady states of the schemes.
// Christoffel symbols and curl e3 use chain-rule gradients of the frame components.
inline ConnectionField build_connections(const MovingFrameField& f, const ElementGeometry& g,
                                         const ReferenceElement& ref) {
  ConnectionField c;
  const int total = g.num_nodes();
  for (auto* v : {&c.div_e1, &c.div_e2, &c.curl3_e1, &c.curl3_e2, &c.curl_e3_dot_e1, &c.curl_e3_dot_e2,
                  &c.gamma_2_11, &c.gamma_2_21, &c.gamma_2_12})
    v->assign(total, 0.0);
  const int npe = g.npe;
  for (int e = 0; e < g.n_elements; ++e) {
    const int base = e * npe;
    std::vector<Vec3> tmp(npe);
    std::vector<double> out(npe);
    element_conservative_divergence(f.e1.data() + base, g, ref, e, out.data());
    for (int k = 0; k < npe; ++k) c.div_e1[base + k] = out[k];
    element_conservative_divergence(f.e2.data() + base, g, ref, e, out.data());
    for (int k = 0; k < npe; ++k) c.div_e2[base + k] = out[k];
    for (int k = 0; k < npe; ++k) tmp[k] = cross(f.e3[base + k], f.e1[base + k]);
    element_conservative_divergence(tmp.data(), g, ref, e, out.data());
    for (int k = 0; k < npe; ++k) c.curl3_e1[base + k] = -out[k];
    for (int k = 0; k < npe; ++k) tmp[k] = cross(f.e3[base + k], f.e2[base + k]);
    element_conservative_divergence(tmp.data(), g, ref, e, out.data());
    for (int k = 0; k < npe; ++k) c.curl3_e2[base + k] = -out[k];

    // gradients of Cartesian components: grad[frame][comp][node]
    std::vector<Vec3> grad[3][3];
    const std::vector<Vec3>* frames[3] = {&f.e1, &f.e2, &f.e3};
    std::vector<double> comp(npe);
    for (int a = 0; a < 3; ++a)
      for (int d = 0; d < 3; ++d) {
        for (int k = 0; k < npe; ++k) comp[k] = (*frames[a])[base + k][d];
        grad[a][d].resize(npe);
        element_gradient(comp.data(), g, ref, e, grad[a][d].data());
      }
    for (int k = 0; k < npe; ++k) {
      const int id = base + k;
      const Vec3 e1 = f.e1[id], e2 = f.e2[id];
      Vec3 curl3;
      for (int d = 0; d < 3; ++d) {
        Vec3 unit;
        unit[d] = 1.0;
        curl3 += cross(grad[2][d][k], unit);
      }
      c.curl_e3_dot_e1[id] = dot(curl3, e1);
      c.curl_e3_dot_e2[id] = dot(curl3, e2);
      double g211 = 0.0, g221 = 0.0, g212 = 0.0;
      for (int d = 0; d < 3; ++d) {
        g211 += e2[d] * dot(grad[0][d][k], e1);
        g221 += e2[d] * dot(grad[0][d][k], e2);
        g212 += e2[d] * dot(grad[1][d][k], e1);
      }
      c.gamma_2_11[id] = g211;
      c.gamma_2_21[id] = g221;
      c.gamma_2_12[id] = g212;
    }
  }
  return c;
}

}  // namespace mmf
