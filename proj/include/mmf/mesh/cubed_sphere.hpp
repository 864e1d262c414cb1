#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "mmf/core/errors.hpp"
#include "mmf/core/vec3.hpp"

namespace mmf {

class UnitSpherePoint {
 public:
  UnitSpherePoint() = default;
  explicit UnitSpherePoint(const Vec3& v) : p_(normalized(v)) {}
  UnitSpherePoint(double x, double y, double z) : UnitSpherePoint(Vec3{x, y, z}) {}

  double x() const { return p_.x; }
  double y() const { return p_.y; }
  double z() const { return p_.z; }
  const Vec3& vec() const { return p_; }

  // colatitude in [0, pi], longitude in (-pi, pi]
  double colatitude() const { return std::atan2(std::hypot(p_.x, p_.y), p_.z); }
  double latitude() const { return std::atan2(p_.z, std::hypot(p_.x, p_.y)); }
  double longitude() const { return std::atan2(p_.y, p_.x); }

 private:
  Vec3 p_{1.0, 0.0, 0.0};
};

// One cube face: outward axis c and in-face axes u, v with u x v = c.
struct CubeFace {
  Vec3 c, u, v;
};

inline const std::array<CubeFace, 6>& cube_faces() {
  static const std::array<CubeFace, 6> faces = {{
      {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
      {{-1, 0, 0}, {0, 0, 1}, {0, 1, 0}},
      {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}},
      {{0, -1, 0}, {1, 0, 0}, {0, 0, 1}},
      {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}},
      {{0, 0, -1}, {0, 1, 0}, {1, 0, 0}},
  }};
  return faces;
}

// Face whose outward axis is closest to direction d.
inline int face_of_direction(const Vec3& d) {
  int best = 0;
  double bv = -1e300;
  for (int f = 0; f < 6; ++f) {
    double s = dot(d, cube_faces()[f].c);
    if (s > bv) {
      bv = s;
      best = f;
    }
  }
  return best;
}

// Coordinates (a, b) of the point in the gnomonic plane of face f.
inline std::array<double, 2> gnomonic_coords(const Vec3& x, int f) {
  const auto& F = cube_faces()[f];
  const double s = dot(x, F.c);
  return {dot(x, F.u) / s, dot(x, F.v) / s};
}

inline Vec3 gnomonic_point(double a, double b, int f) {
  const auto& F = cube_faces()[f];
  return F.c + a * F.u + b * F.v;
}

struct MeshEdge {
  int element;
  int local_edge;
  int neighbor;
  int neighbor_local_edge;
};

// Quad elements list corners counter-clockwise seen from outside. Local edge k
// runs from corner k to corner (k+1)%4.
struct LinearSphereMesh {
  int n_per_face = 0;
  double h = 0.0;
  std::vector<UnitSpherePoint> vertices;
  std::vector<std::array<int, 4>> elements;
  std::vector<MeshEdge> edges;
  std::vector<int> element_face;
  // per element, per local edge: index into `edges`
  std::vector<std::array<int, 4>> element_edges;

  int num_elements() const { return static_cast<int>(elements.size()); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
};

// Fills edges, element_edges, element_face and h; validates manifoldness and orientation.
inline void build_topology(LinearSphereMesh& m) {
  const int ne = m.num_elements();
  const int nv = m.num_vertices();
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> owners;
  for (int e = 0; e < ne; ++e) {
    for (int k = 0; k < 4; ++k) {
      int a = m.elements[e][k], b = m.elements[e][(k + 1) % 4];
      if (a < 0 || a >= nv || b < 0 || b >= nv)
        throw MeshFormatError("element " + std::to_string(e) + " references a missing vertex");
      if (a == b) throw MeshFormatError("element " + std::to_string(e) + " has a collapsed edge");
      owners[{std::min(a, b), std::max(a, b)}].push_back({e, k});
    }
  }
  m.edges.clear();
  m.element_edges.assign(ne, {-1, -1, -1, -1});
  for (const auto& [key, list] : owners) {
    if (list.size() != 2)
      throw NonConformingEdge("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                              ") is shared by " + std::to_string(list.size()) + " elements");
    auto [e0, k0] = list[0];
    auto [e1, k1] = list[1];
    if (e0 > e1) {
      std::swap(e0, e1);
      std::swap(k0, k1);
    }
    // consistent orientation: the neighbor traverses the edge in reverse
    if (m.elements[e0][k0] != m.elements[e1][(k1 + 1) % 4])
      throw NonConformingEdge("elements " + std::to_string(e0) + " and " + std::to_string(e1) +
                              " traverse their shared edge in the same direction");
    int id = static_cast<int>(m.edges.size());
    m.edges.push_back({e0, k0, e1, k1});
    m.element_edges[e0][k0] = id;
    m.element_edges[e1][k1] = id;
  }
  m.element_face.assign(ne, 0);
  m.h = 0.0;
  for (int e = 0; e < ne; ++e) {
    const auto& q = m.elements[e];
    Vec3 v0 = m.vertices[q[0]].vec(), v1 = m.vertices[q[1]].vec(), v2 = m.vertices[q[2]].vec(),
         v3 = m.vertices[q[3]].vec();
    Vec3 centroid = 0.25 * (v0 + v1 + v2 + v3);
    Vec3 nrm = cross(v2 - v0, v3 - v1);
    if (dot(nrm, centroid) <= 0.0)
      throw MeshFormatError("element " + std::to_string(e) + " is not oriented outward");
    m.element_face[e] = face_of_direction(centroid);
  }
  for (const auto& ed : m.edges) {
    int a = m.elements[ed.element][ed.local_edge];
    int b = m.elements[ed.element][(ed.local_edge + 1) % 4];
    m.h = std::max(m.h, angle_between(m.vertices[a].vec(), m.vertices[b].vec()));
  }
}

// Cubed sphere with equiangular subdivision of each face, vertices projected radially.
inline LinearSphereMesh generate_cubed_sphere(int n_per_face) {
  if (n_per_face < 1) throw UsageError("n_per_face must be >= 1");
  const int n = n_per_face;
  LinearSphereMesh m;
  m.n_per_face = n;
  auto param = [n](int i) {
    int k = 2 * i - n;
    if (k == n) return 1.0;
    if (k == -n) return -1.0;
    return std::tan(k * std::numbers::pi / (4.0 * n));
  };
  std::map<std::array<int, 3>, int> index;
  auto vertex = [&](int f, int i, int j) {
    const auto& F = cube_faces()[f];
    std::array<int, 3> key{};
    for (int d = 0; d < 3; ++d)
      key[d] = static_cast<int>(n * F.c[d] + (2 * i - n) * F.u[d] + (2 * j - n) * F.v[d]);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(m.vertices.size());
    m.vertices.emplace_back(gnomonic_point(param(i), param(j), f));
    index.emplace(key, id);
    return id;
  };
  for (int f = 0; f < 6; ++f)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        m.elements.push_back({vertex(f, i, j), vertex(f, i + 1, j), vertex(f, i + 1, j + 1), vertex(f, i, j + 1)});
  build_topology(m);
  return m;
}

}  // namespace mmf
