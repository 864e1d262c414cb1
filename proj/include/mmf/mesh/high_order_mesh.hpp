#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "mmf/core/errors.hpp"
#include "mmf/core/vec3.hpp"
#include "mmf/mesh/cubed_sphere.hpp"
#include "mmf/mesh/springs.hpp"
#include "mmf/sem/gll.hpp"

namespace mmf {

struct NodeStrategy {
  enum class Kind { NaiveProjection, GeodesicOptimized };
  Kind kind = Kind::GeodesicOptimized;
  int p_geom_fixed = 2;  // NaiveProjection only

  static NodeStrategy naive(int fixed_order = 2) {
    if (fixed_order < 1) throw UsageError("NaiveProjection fixed order must be >= 1");
    return {Kind::NaiveProjection, fixed_order};
  }
  static NodeStrategy optimized() { return {Kind::GeodesicOptimized, 2}; }

  bool is_naive() const { return kind == Kind::NaiveProjection; }
  std::string name() const { return is_naive() ? "naive" : "optimized"; }
};

inline NodeStrategy parse_strategy(const std::string& s, int fixed_order = 2) {
  if (s == "naive") return NodeStrategy::naive(fixed_order);
  if (s == "optimized") return NodeStrategy::optimized();
  throw UsageError("unknown strategy '" + s + "' (expected naive|optimized)");
}

// Tensor-product Lagrange map over GLL(p_geom) nodes; control node (i, j) sits at
// index j*(p_geom+1) + i with i running along xi1.
struct ElementMapping {
  int p_geom = 1;
  std::vector<Vec3> control_nodes;

  Vec3& node(int i, int j) { return control_nodes[j * (p_geom + 1) + i]; }
  const Vec3& node(int i, int j) const { return control_nodes[j * (p_geom + 1) + i]; }

  Vec3 evaluate(double xi1, double xi2) const {
    const auto r = gll_rule(p_geom);
    const auto lam = barycentric_weights(r.nodes);
    const auto l1 = lagrange_basis(r.nodes, lam, xi1);
    const auto l2 = lagrange_basis(r.nodes, lam, xi2);
    Vec3 x;
    for (int j = 0; j <= p_geom; ++j)
      for (int i = 0; i <= p_geom; ++i) x += (l1[i] * l2[j]) * node(i, j);
    return x;
  }
};

struct HighOrderMesh {
  LinearSphereMesh linear;
  NodeStrategy strategy;
  int p_geom = 1;
  std::vector<ElementMapping> mappings;

  int num_elements() const { return linear.num_elements(); }
};

// Reference index (i, j) of the k-th node along local edge `le`, walking the
// edge counter-clockwise.
inline std::array<int, 2> edge_node_index(int le, int k, int p) {
  switch (le) {
    case 0: return {k, 0};
    case 1: return {p, k};
    case 2: return {p - k, p};
    default: return {0, p - k};
  }
}

namespace detail {

// Copies each shared edge of the lower-index element into its neighbor so that
// traces agree bitwise.
inline void weld_edges(HighOrderMesh& m) {
  const int p = m.p_geom;
  for (const auto& ed : m.linear.edges) {
    auto& a = m.mappings[ed.element];
    auto& b = m.mappings[ed.neighbor];
    for (int k = 0; k <= p; ++k) {
      auto ia = edge_node_index(ed.local_edge, k, p);
      auto ib = edge_node_index(ed.neighbor_local_edge, p - k, p);
      b.node(ib[0], ib[1]) = a.node(ia[0], ia[1]);
    }
  }
}

inline Vec3 slerp(const Vec3& a, const Vec3& b, double s) {
  const double w = angle_between(a, b);
  if (w == 0.0) return a;
  return (std::sin((1.0 - s) * w) * a + std::sin(s * w) * b) / std::sin(w);
}

// Order-q map with all control nodes on the sphere. Edge nodes sit on the
// geodesic between the end vertices at GLL arc-length spacing. Interior nodes
// start from the transfinite blend of the four edge curves, projected to the
// sphere, and are then relaxed by the spring system in the gnomonic plane of the
// owning face; the springs are at rest in the blended configuration, so
// relaxation restores that configuration from any interior perturbation.
inline std::vector<ElementMapping> geodesic_maps(const LinearSphereMesh& lin, int q, const SpringOptions& springs) {
  const auto xi = gll_rule(q).nodes;
  const int n = q + 1;
  const int ne = lin.num_elements();
  std::vector<ElementMapping> maps(ne);

  // canonical edge node sequences, generated once per global edge
  std::vector<std::vector<Vec3>> edge_nodes(lin.num_edges());
  for (int id = 0; id < lin.num_edges(); ++id) {
    const auto& ed = lin.edges[id];
    const Vec3 va = lin.vertices[lin.elements[ed.element][ed.local_edge]].vec();
    const Vec3 vb = lin.vertices[lin.elements[ed.element][(ed.local_edge + 1) % 4]].vec();
    auto& seq = edge_nodes[id];
    seq.resize(n);
    for (int k = 0; k < n; ++k) seq[k] = slerp(va, vb, 0.5 * (1.0 + xi[k]));
    seq.front() = va;
    seq.back() = vb;
  }

  for (int e = 0; e < ne; ++e) {
    auto& mp = maps[e];
    mp.p_geom = q;
    mp.control_nodes.assign(n * n, Vec3{});
    for (int le = 0; le < 4; ++le) {
      const int id = lin.element_edges[e][le];
      const bool forward = lin.edges[id].element == e;
      for (int k = 0; k < n; ++k) {
        auto ij = edge_node_index(le, k, q);
        mp.node(ij[0], ij[1]) = edge_nodes[id][forward ? k : q - k];
      }
    }
    if (q < 2) continue;
    const int f = lin.element_face[e];
    const Vec3 c00 = mp.node(0, 0), c10 = mp.node(q, 0), c11 = mp.node(q, q), c01 = mp.node(0, q);
    PlaneGrid plane(n * n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (i == 0 || j == 0 || i == q || j == q) {
          plane[j * n + i] = gnomonic_coords(mp.node(i, j), f);
          continue;
        }
        const double s = 0.5 * (1.0 + xi[i]), t = 0.5 * (1.0 + xi[j]);
        Vec3 x = (1 - t) * mp.node(i, 0) + t * mp.node(i, q) + (1 - s) * mp.node(0, j) + s * mp.node(q, j) -
                 ((1 - s) * (1 - t) * c00 + s * (1 - t) * c10 + s * t * c11 + (1 - s) * t * c01);
        plane[j * n + i] = gnomonic_coords(normalized(x), f);
      }
    const auto rest = rest_lengths_of(plane, n);
    relax_springs(plane, n, rest, springs);
    for (int j = 1; j < q; ++j)
      for (int i = 1; i < q; ++i)
        mp.node(i, j) = normalized(gnomonic_point(plane[j * n + i][0], plane[j * n + i][1], f));
  }
  return maps;
}

}  // namespace detail

inline HighOrderMesh insert_high_order_nodes(const LinearSphereMesh& mesh, int p_geom, const NodeStrategy& strategy,
                                             const SpringOptions& springs = {}) {
  if (p_geom < 1) throw OrderOutOfRange("p_geom must be >= 1");
  HighOrderMesh out;
  out.linear = mesh;
  out.strategy = strategy;
  out.p_geom = p_geom;
  if (!strategy.is_naive()) {
    out.mappings = detail::geodesic_maps(mesh, p_geom, springs);
    return out;
  }
  // frozen low-order map re-sampled at the requested order
  const int q = strategy.p_geom_fixed;
  const auto fixed = detail::geodesic_maps(mesh, q, springs);
  const auto src = gll_rule(q).nodes;
  const auto dst = gll_rule(p_geom).nodes;
  const auto I = interpolation_matrix(src, dst);
  const int nq = q + 1, np = p_geom + 1;
  out.mappings.resize(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    auto& mp = out.mappings[e];
    mp.p_geom = p_geom;
    mp.control_nodes.assign(np * np, Vec3{});
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i) {
        Vec3 x;
        for (int b = 0; b < nq; ++b)
          for (int a = 0; a < nq; ++a) x += (I[i * nq + a] * I[j * nq + b]) * fixed[e].node(a, b);
        mp.node(i, j) = x;
      }
    // corners are exact vertices
    for (int c = 0; c < 4; ++c) {
      auto ij = edge_node_index(c, 0, p_geom);
      mp.node(ij[0], ij[1]) = mesh.vertices[mesh.elements[e][c]].vec();
    }
  }
  detail::weld_edges(out);
  return out;
}

}  // namespace mmf
