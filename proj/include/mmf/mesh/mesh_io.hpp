#pragma once

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "mmf/mesh/high_order_mesh.hpp"

namespace mmf {

inline nlohmann::json mesh_to_json(const HighOrderMesh& m) {
  using nlohmann::json;
  json j;
  j["n_per_face"] = m.linear.n_per_face;
  j["p_geom"] = m.p_geom;
  j["strategy"] = m.strategy.name();
  if (m.strategy.is_naive()) j["p_geom_fixed"] = m.strategy.p_geom_fixed;
  json verts = json::array();
  for (const auto& v : m.linear.vertices) verts.push_back({v.x(), v.y(), v.z()});
  j["vertices"] = std::move(verts);
  json elems = json::array();
  for (const auto& q : m.linear.elements) elems.push_back({q[0], q[1], q[2], q[3]});
  j["elements"] = std::move(elems);
  json cn = json::array();
  for (const auto& mp : m.mappings) {
    json a = json::array();
    for (const auto& x : mp.control_nodes) a.push_back({x.x, x.y, x.z});
    cn.push_back(std::move(a));
  }
  j["control_nodes"] = std::move(cn);
  return j;
}

namespace detail {
inline Vec3 json_vec3(const nlohmann::json& a, const std::string& what) {
  if (!a.is_array() || a.size() != 3 || !a[0].is_number() || !a[1].is_number() || !a[2].is_number())
    throw MeshFormatError(what + ": expected [x, y, z]");
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}
}  // namespace detail

// Rebuilds a mesh and checks every structural invariant; throws MeshFormatError
// (or NonConformingEdge) with a description of the first violation found.
inline HighOrderMesh mesh_from_json(const nlohmann::json& j) {
  constexpr double tol = 1e-12;
  for (const char* key : {"n_per_face", "p_geom", "strategy", "vertices", "elements", "control_nodes"})
    if (!j.contains(key)) throw MeshFormatError(std::string("missing key '") + key + "'");
  HighOrderMesh m;
  const int n = j["n_per_face"].get<int>();
  const int p = j["p_geom"].get<int>();
  if (n < 1) throw MeshFormatError("n_per_face must be >= 1");
  if (p < 1) throw MeshFormatError("p_geom must be >= 1");
  const std::string strat = j["strategy"].get<std::string>();
  if (strat == "naive")
    m.strategy = NodeStrategy::naive(j.value("p_geom_fixed", 2));
  else if (strat == "optimized")
    m.strategy = NodeStrategy::optimized();
  else
    throw MeshFormatError("unknown strategy '" + strat + "'");
  m.p_geom = p;
  auto& lin = m.linear;
  lin.n_per_face = n;
  const auto& verts = j["vertices"];
  const auto& elems = j["elements"];
  if (!verts.is_array() || verts.size() != static_cast<size_t>(6 * n * n + 2))
    throw MeshFormatError("expected " + std::to_string(6 * n * n + 2) + " vertices");
  if (!elems.is_array() || elems.size() != static_cast<size_t>(6 * n * n))
    throw MeshFormatError("expected " + std::to_string(6 * n * n) + " elements");
  for (size_t i = 0; i < verts.size(); ++i) {
    Vec3 v = detail::json_vec3(verts[i], "vertex " + std::to_string(i));
    if (std::abs(norm(v) - 1.0) > tol) throw MeshFormatError("vertex " + std::to_string(i) + " is off the unit sphere");
    lin.vertices.emplace_back(v);
  }
  for (size_t e = 0; e < elems.size(); ++e) {
    const auto& q = elems[e];
    if (!q.is_array() || q.size() != 4) throw MeshFormatError("element " + std::to_string(e) + ": expected 4 indices");
    lin.elements.push_back({q[0].get<int>(), q[1].get<int>(), q[2].get<int>(), q[3].get<int>()});
  }
  build_topology(lin);
  const auto& cn = j["control_nodes"];
  if (!cn.is_array() || cn.size() != elems.size()) throw MeshFormatError("control_nodes: one list per element expected");
  const size_t npe = static_cast<size_t>((p + 1) * (p + 1));
  m.mappings.resize(elems.size());
  for (size_t e = 0; e < elems.size(); ++e) {
    if (!cn[e].is_array() || cn[e].size() != npe)
      throw MeshFormatError("element " + std::to_string(e) + ": expected " + std::to_string(npe) + " control nodes");
    auto& mp = m.mappings[e];
    mp.p_geom = p;
    for (size_t k = 0; k < npe; ++k)
      mp.control_nodes.push_back(detail::json_vec3(cn[e][k], "control node " + std::to_string(k) + " of element " + std::to_string(e)));
    for (int c = 0; c < 4; ++c) {
      auto ij = edge_node_index(c, 0, p);
      if (norm(mp.node(ij[0], ij[1]) - lin.vertices[lin.elements[e][c]].vec()) > tol)
        throw MeshFormatError("element " + std::to_string(e) + ": corner control node does not match its vertex");
    }
    if (!m.strategy.is_naive())
      for (const auto& x : mp.control_nodes)
        if (std::abs(norm(x) - 1.0) > tol)
          throw MeshFormatError("element " + std::to_string(e) + ": optimized control node off the sphere");
  }
  for (const auto& ed : lin.edges)
    for (int k = 0; k <= p; ++k) {
      auto ia = edge_node_index(ed.local_edge, k, p);
      auto ib = edge_node_index(ed.neighbor_local_edge, p - k, p);
      if (norm(m.mappings[ed.element].node(ia[0], ia[1]) - m.mappings[ed.neighbor].node(ib[0], ib[1])) > tol)
        throw MeshFormatError("elements " + std::to_string(ed.element) + " and " + std::to_string(ed.neighbor) +
                              " are not watertight along their shared edge");
    }
  return m;
}

inline void write_mesh(const HighOrderMesh& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << mesh_to_json(m).dump() << '\n';
}

inline HighOrderMesh read_mesh(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw MeshFormatError("cannot open " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw MeshFormatError(std::string("malformed JSON: ") + ex.what());
  }
  try {
    return mesh_from_json(j);
  } catch (const nlohmann::json::exception& ex) {
    throw MeshFormatError(std::string("bad field type: ") + ex.what());
  }
}

}  // namespace mmf
