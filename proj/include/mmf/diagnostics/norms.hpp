#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "mmf/mesh/high_order_mesh.hpp"
#include "mmf/sem/geometry.hpp"

namespace mmf {

// Over-integration grid: the mesh maps evaluated on GLL(s) with s above the
// solution order, plus the interpolation from solution nodes to it.
struct FineGrid {
  int solution_order = 0;
  int sampling_order = 0;
  std::vector<double> interp;  // (s+1) x (p+1)
  ElementGeometry geom;
};

inline FineGrid make_fine_grid(const HighOrderMesh& mesh, int solution_order, int sampling_order) {
  FineGrid f;
  f.solution_order = solution_order;
  f.sampling_order = sampling_order;
  f.interp = interpolation_matrix(gll_rule(solution_order).nodes, gll_rule(sampling_order).nodes);
  f.geom = compute_geometry(mesh.mappings, ReferenceElement::sampling(sampling_order));
  return f;
}

inline std::vector<double> interpolate_to_fine(std::span<const double> nodal, const FineGrid& f) {
  const int n = f.solution_order + 1, m = f.sampling_order + 1;
  const int ne = f.geom.n_elements;
  std::vector<double> out(static_cast<size_t>(ne) * m * m);
  std::vector<double> tmp(n * m);
  for (int e = 0; e < ne; ++e) {
    const double* u = nodal.data() + static_cast<size_t>(e) * n * n;
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < m; ++a) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += f.interp[a * n + i] * u[j * n + i];
        tmp[j * m + a] = s;
      }
    for (int b = 0; b < m; ++b)
      for (int a = 0; a < m; ++a) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += f.interp[b * n + j] * tmp[j * m + a];
        out[static_cast<size_t>(e) * m * m + b * m + a] = s;
      }
  }
  return out;
}

struct ErrorNorms {
  double l2 = 0.0;
  double linf = 0.0;
};

// RMS and max of a pointwise error over the active elements of a grid, both
// divided by `scale`.
inline ErrorNorms normalized_error(std::span<const double> err_magnitude, const ElementGeometry& g,
                                   const std::vector<char>& active, double scale) {
  double num = 0.0, area = 0.0, mx = 0.0;
  for (int e = 0; e < g.n_elements; ++e) {
    if (!active.empty() && !active[e]) continue;
    double s = 0.0, a = 0.0;
    for (int k = 0; k < g.npe; ++k) {
      const int id = e * g.npe + k;
      s += err_magnitude[id] * err_magnitude[id] * g.mass[id];
      a += g.mass[id];
      mx = std::max(mx, std::abs(err_magnitude[id]));
    }
    num += s;
    area += a;
  }
  return {std::sqrt(num / area) / scale, mx / scale};
}

// RMS of a pointwise quantity over the active elements.
inline double rms_over(std::span<const double> v, const ElementGeometry& g, const std::vector<char>& active) {
  double num = 0.0, area = 0.0;
  for (int e = 0; e < g.n_elements; ++e) {
    if (!active.empty() && !active[e]) continue;
    for (int k = 0; k < g.npe; ++k) {
      const int id = e * g.npe + k;
      num += v[id] * v[id] * g.mass[id];
      area += g.mass[id];
    }
  }
  return std::sqrt(num / area);
}

// Relative collocation L2 and Linf errors: ||u - u_ex|| / ||u_ex|| and
// max|u - u_ex| / max|u_ex|.
inline ErrorNorms relative_error(std::span<const double> u, std::span<const double> exact, const ElementGeometry& g) {
  double num = 0.0, den = 0.0, mx = 0.0, mxe = 0.0;
  for (int e = 0; e < g.n_elements; ++e) {
    double a = 0.0, b = 0.0;
    for (int k = 0; k < g.npe; ++k) {
      const int id = e * g.npe + k;
      const double d = u[id] - exact[id];
      a += d * d * g.mass[id];
      b += exact[id] * exact[id] * g.mass[id];
      mx = std::max(mx, std::abs(d));
      mxe = std::max(mxe, std::abs(exact[id]));
    }
    num += a;
    den += b;
  }
  return {std::sqrt(num / den), mxe > 0 ? mx / mxe : mx};
}

// Absolute L2 (sqrt of the integrated squared error) and max error of a nodal
// field against exact(x), both on the over-integration grid.
template <class Exact>
ErrorNorms absolute_error_fine(std::span<const double> nodal, const FineGrid& f, Exact&& exact) {
  const auto uf = interpolate_to_fine(nodal, f);
  const auto& g = f.geom;
  double num = 0.0, mx = 0.0;
  for (int e = 0; e < g.n_elements; ++e) {
    double s = 0.0;
    for (int k = 0; k < g.npe; ++k) {
      const int id = e * g.npe + k;
      const double d = uf[id] - exact(g.position[id]);
      s += d * d * g.mass[id];
      mx = std::max(mx, std::abs(d));
    }
    num += s;
  }
  return {std::sqrt(num), mx};
}

// Quadrature weights for integrals over the true unit sphere: the element maps
// radially projected, w_i w_j J (N . x^) / |x|^2 at each node.
inline std::vector<double> sphere_mass_weights(const ElementGeometry& g) {
  std::vector<double> w(g.num_nodes());
  for (int i = 0; i < g.num_nodes(); ++i) {
    const Vec3 x = g.position[i];
    const double r2 = dot(x, x);
    w[i] = g.mass[i] * std::abs(dot(g.normal[i], x)) / (r2 * std::sqrt(r2));
  }
  return w;
}

inline double weighted_sum(std::span<const double> f, std::span<const double> w) {
  double s = 0.0;
  for (size_t i = 0; i < f.size(); ++i) s += f[i] * w[i];
  return s;
}

}  // namespace mmf
