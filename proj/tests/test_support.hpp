#pragma once

#include <map>
#include <memory>
#include <tuple>

#include "mmf/discretization.hpp"
#include "mmf/mesh/high_order_mesh.hpp"

namespace mmf::testing {

// Meshes and discretizations are expensive; share them within one test binary.
inline std::shared_ptr<const HighOrderMesh> shared_mesh(int n, int p, bool naive) {
  static std::map<std::tuple<int, int, bool>, std::shared_ptr<const HighOrderMesh>> cache;
  auto& m = cache[{n, p, naive}];
  if (!m)
    m = std::make_shared<const HighOrderMesh>(insert_high_order_nodes(
        generate_cubed_sphere(n), p, naive ? NodeStrategy::naive() : NodeStrategy::optimized()));
  return m;
}

inline const SurfaceDiscretization& shared_disc(int n, int p, bool naive,
                                                FrameAlignment a = FrameAlignment::Local) {
  static std::map<std::tuple<int, int, bool, int>, std::unique_ptr<SurfaceDiscretization>> cache;
  auto& d = cache[{n, p, naive, static_cast<int>(a)}];
  if (!d) d = std::make_unique<SurfaceDiscretization>(make_discretization(shared_mesh(n, p, naive), p, a));
  return *d;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace mmf::testing
