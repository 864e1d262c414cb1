#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mmf/core/errors.hpp"
#include "mmf/core/vec3.hpp"
#include "mmf/mesh/high_order_mesh.hpp"
#include "mmf/sem/gll.hpp"

namespace mmf {

// Metric data at the collocation nodes. Volume arrays are indexed by
// e*npe + j*n1d + i; edge arrays by slot(e, le)*n1d + k where k walks local
// edge le counter-clockwise.
struct ElementGeometry {
  int n_elements = 0;
  int order = 0;
  int n1d = 0;
  int npe = 0;

  std::vector<Vec3> position, t1, t2, normal;
  std::vector<Vec3> g1, g2;  // contravariant vectors, g^a . t_b = delta_ab
  std::vector<double> jac;
  std::vector<double> mass;  // w_i w_j J

  std::vector<double> edge_jac;
  std::vector<Vec3> edge_normal;  // outward, in the element's tangent plane
  std::vector<Vec3> edge_tangent;  // unit, counter-clockwise

  // neighbor across each (element, local edge) slot, -1 on an open boundary
  std::vector<int> nb_element, nb_edge;
  std::vector<int> edge_volume_node;  // [le*n1d + k] -> local volume index

  int num_nodes() const { return n_elements * npe; }
  int slot(int e, int le) const { return e * 4 + le; }
  int edge_index(int e, int le, int k) const { return (e * 4 + le) * n1d + k; }
  int volume_index_of_edge(int e, int le, int k) const { return e * npe + edge_volume_node[le * n1d + k]; }
  // edge-point index on the other side of the shared edge (same physical point)
  int partner_edge_index(int e, int le, int k) const {
    const int s = slot(e, le);
    return edge_index(nb_element[s], nb_edge[s], n1d - 1 - k);
  }
  int num_edge_points() const { return n_elements * 4 * n1d; }
};

inline ElementGeometry compute_geometry(const std::vector<ElementMapping>& maps, const ReferenceElement& ref) {
  ElementGeometry g;
  const int p = ref.order(), n = ref.n1d();
  g.n_elements = static_cast<int>(maps.size());
  g.order = p;
  g.n1d = n;
  g.npe = n * n;
  const int total = g.n_elements * g.npe;
  g.position.resize(total);
  g.t1.resize(total);
  g.t2.resize(total);
  g.normal.resize(total);
  g.g1.resize(total);
  g.g2.resize(total);
  g.jac.resize(total);
  g.mass.resize(total);
  g.edge_volume_node.resize(4 * n);
  for (int le = 0; le < 4; ++le)
    for (int k = 0; k < n; ++k) {
      auto ij = edge_node_index(le, k, p);
      g.edge_volume_node[le * n + k] = ij[1] * n + ij[0];
    }
  const auto& w = ref.weights();

  int cached_q = -1;
  std::vector<double> I, DI;  // interpolation and derivative from GLL(q) to the solution nodes
  for (int e = 0; e < g.n_elements; ++e) {
    const auto& mp = maps[e];
    const int q = mp.p_geom, nq = q + 1;
    if (q != cached_q) {
      const auto src = gll_rule(q).nodes;
      I = interpolation_matrix(src, ref.nodes());
      const auto Dq = differentiation_matrix(src);
      DI.assign(n * nq, 0.0);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < nq; ++c)
          for (int k = 0; k < nq; ++k) DI[r * nq + c] += I[r * nq + k] * Dq[k * nq + c];
      cached_q = q;
    }
    // tensor evaluation: first along xi1 (value and derivative), then along xi2
    std::vector<Vec3> a(nq * n), da(nq * n);
    for (int b = 0; b < nq; ++b)
      for (int i = 0; i < n; ++i) {
        Vec3 x, dx;
        for (int c = 0; c < nq; ++c) {
          x += I[i * nq + c] * mp.node(c, b);
          dx += DI[i * nq + c] * mp.node(c, b);
        }
        a[b * n + i] = x;
        da[b * n + i] = dx;
      }
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        Vec3 x, x1, x2;
        for (int b = 0; b < nq; ++b) {
          x += I[j * nq + b] * a[b * n + i];
          x1 += I[j * nq + b] * da[b * n + i];
          x2 += DI[j * nq + b] * a[b * n + i];
        }
        const int id = e * g.npe + j * n + i;
        const Vec3 c = cross(x1, x2);
        const double J = norm(c);
        if (!(J > 0.0) || !std::isfinite(J))
          throw DegenerateElement("element " + std::to_string(e) + " has non-positive Jacobian");
        const Vec3 N = c / J;
        g.position[id] = x;
        g.t1[id] = x1;
        g.t2[id] = x2;
        g.normal[id] = N;
        g.jac[id] = J;
        g.g1[id] = cross(x2, N) / J;
        g.g2[id] = cross(N, x1) / J;
        g.mass[id] = w[i] * w[j] * J;
      }
  }

  g.edge_jac.resize(g.num_edge_points());
  g.edge_normal.resize(g.num_edge_points());
  g.edge_tangent.resize(g.num_edge_points());
  for (int e = 0; e < g.n_elements; ++e)
    for (int le = 0; le < 4; ++le)
      for (int k = 0; k < n; ++k) {
        const int v = e * g.npe + g.edge_volume_node[le * n + k];
        Vec3 t = (le == 0) ? g.t1[v] : (le == 1) ? g.t2[v] : (le == 2) ? -g.t1[v] : -g.t2[v];
        const int s = g.edge_index(e, le, k);
        const double len = norm(t);
        g.edge_jac[s] = len;
        g.edge_tangent[s] = t / len;
        g.edge_normal[s] = normalized(cross(t, g.normal[v]));
      }
  g.nb_element.assign(g.n_elements * 4, -1);
  g.nb_edge.assign(g.n_elements * 4, -1);
  return g;
}

inline ElementGeometry compute_geometry(const HighOrderMesh& mesh, const ReferenceElement& ref) {
  auto g = compute_geometry(mesh.mappings, ref);
  for (const auto& ed : mesh.linear.edges) {
    g.nb_element[g.slot(ed.element, ed.local_edge)] = ed.neighbor;
    g.nb_edge[g.slot(ed.element, ed.local_edge)] = ed.neighbor_local_edge;
    g.nb_element[g.slot(ed.neighbor, ed.neighbor_local_edge)] = ed.element;
    g.nb_edge[g.slot(ed.neighbor, ed.neighbor_local_edge)] = ed.local_edge;
  }
  for (int s = 0; s < g.n_elements * 4; ++s)
    if (g.nb_element[s] < 0)
      throw NonConformingEdge("element " + std::to_string(s / 4) + " edge " + std::to_string(s % 4) +
                              " has no neighbor");
  return g;
}

}  // namespace mmf
