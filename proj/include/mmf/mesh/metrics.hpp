#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "mmf/mesh/high_order_mesh.hpp"

namespace mmf {

inline double mesh_error(std::span<const Vec3> vertices) {
  if (vertices.empty()) return 0.0;
  double s = 0.0;
  for (const auto& v : vertices) {
    double d = 1.0 - norm(v);
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(vertices.size()));
}

// Vertex radii as realized by the element maps (corner control nodes).
inline std::vector<Vec3> mapped_vertices(const HighOrderMesh& m) {
  std::vector<Vec3> v(m.linear.num_vertices());
  std::vector<char> seen(v.size(), 0);
  const int p = m.p_geom;
  for (int e = 0; e < m.num_elements(); ++e)
    for (int c = 0; c < 4; ++c) {
      int id = m.linear.elements[e][c];
      if (seen[id]) continue;
      auto ij = edge_node_index(c, 0, p);
      v[id] = m.mappings[e].node(ij[0], ij[1]);
      seen[id] = 1;
    }
  return v;
}

inline double mesh_error(const HighOrderMesh& m) {
  auto v = mapped_vertices(m);
  return mesh_error(std::span<const Vec3>(v));
}

inline int default_sampling_order(const HighOrderMesh& m) { return m.p_geom + 3; }

// Sum of squared radial deviations per element on a (s+1)^2 GLL grid.
inline std::vector<double> radial_square_sums(const HighOrderMesh& m, int sampling_order) {
  const auto src = gll_rule(m.p_geom).nodes;
  const auto dst = gll_rule(sampling_order).nodes;
  const auto I = interpolation_matrix(src, dst);
  const int np = m.p_geom + 1, ns = sampling_order + 1;
  std::vector<double> sums(m.num_elements(), 0.0);
  std::vector<Vec3> tmp(ns * np);
  for (int e = 0; e < m.num_elements(); ++e) {
    const auto& mp = m.mappings[e];
    // interpolate along xi1 first, then xi2
    for (int j = 0; j < np; ++j)
      for (int a = 0; a < ns; ++a) {
        Vec3 x;
        for (int i = 0; i < np; ++i) x += I[a * np + i] * mp.node(i, j);
        tmp[j * ns + a] = x;
      }
    double s = 0.0;
    for (int b = 0; b < ns; ++b)
      for (int a = 0; a < ns; ++a) {
        Vec3 x;
        for (int j = 0; j < np; ++j) x += I[b * np + j] * tmp[j * ns + a];
        double d = 1.0 - norm(x);
        s += d * d;
      }
    sums[e] = s;
  }
  return sums;
}

inline double geometric_approximation_error(const HighOrderMesh& m, int sampling_order = -1) {
  if (sampling_order < 0) sampling_order = default_sampling_order(m);
  const auto sums = radial_square_sums(m, sampling_order);
  double s = 0.0;
  for (double v : sums) s += v;
  const double n = static_cast<double>(m.num_elements()) * (sampling_order + 1) * (sampling_order + 1);
  return std::sqrt(s / n);
}

inline std::vector<double> per_element_gae_map(const HighOrderMesh& m, int sampling_order = -1) {
  if (sampling_order < 0) sampling_order = default_sampling_order(m);
  auto sums = radial_square_sums(m, sampling_order);
  const double ne = static_cast<double>(sampling_order + 1) * (sampling_order + 1);
  for (double& v : sums) v = std::sqrt(v / ne);
  return sums;
}

}  // namespace mmf
