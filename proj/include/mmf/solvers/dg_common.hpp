#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mmf/core/parallel.hpp"
#include "mmf/diagnostics/norms.hpp"
#include "mmf/diagnostics/series.hpp"
#include "mmf/discretization.hpp"
#include "mmf/operators/operators.hpp"
#include "mmf/solvers/rk4.hpp"

namespace mmf {

inline Vec3 rotate_about(const Vec3& x, const Vec3& axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return c * x + s * cross(axis, x) + (1.0 - c) * dot(axis, x) * axis;
}

inline double great_circle_distance(const Vec3& a, const Vec3& b) { return angle_between(a, b); }

inline Vec3 point_from_angles(double phi, double colatitude) {
  return {std::sin(colatitude) * std::cos(phi), std::sin(colatitude) * std::sin(phi), std::cos(colatitude)};
}

// Frame components of a Cartesian vector field sampled at the nodes.
template <class F>
FrameVectorField project_on_frames(const SurfaceDiscretization& d, F&& vec) {
  std::vector<double> a(d.num_nodes()), b(d.num_nodes());
  for (int i = 0; i < d.num_nodes(); ++i) {
    const Vec3 v = vec(d.geom.position[i]);
    a[i] = dot(v, d.frames.e1[i]);
    b[i] = dot(v, d.frames.e2[i]);
  }
  return {ScalarField(d.geom, std::move(a)), ScalarField(d.geom, std::move(b))};
}

// Per-node own/neighbor traces, gathered into preallocated storage.
template <class T>
void gather_traces(const T* values, const ElementGeometry& g, std::vector<T>& inner, std::vector<T>& outer) {
  const int ne = g.num_edge_points();
  inner.resize(ne);
  outer.resize(ne);
  for (int e = 0; e < g.n_elements; ++e)
    for (int le = 0; le < 4; ++le)
      for (int k = 0; k < g.n1d; ++k) inner[g.edge_index(e, le, k)] = values[g.volume_index_of_edge(e, le, k)];
  for (int e = 0; e < g.n_elements; ++e)
    for (int le = 0; le < 4; ++le) {
      const bool open = g.nb_element[g.slot(e, le)] < 0;
      for (int k = 0; k < g.n1d; ++k) {
        const int id = g.edge_index(e, le, k);
        outer[id] = open ? inner[id] : inner[g.partner_edge_index(e, le, k)];
      }
    }
}

// Runs RK4 from t=0 to t_final in steps of dt (the last step is shortened to
// land on t_final). `on_step(t, y, step, last)` sees the initial state
// (step 0) and the state after every step.
template <class Rhs, class OnStep>
void march_rk4(State& y, double dt, double t_final, Rhs&& rhs, OnStep&& on_step) {
  if (!(dt > 0.0)) throw UsageError("dt must be positive");
  if (!(t_final >= 0.0)) throw UsageError("t_final must be non-negative");
  Rk4 rk;
  const long steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
  on_step(0.0, y, 0L, steps == 0);
  double t = 0.0;
  for (long s = 1; s <= steps; ++s) {
    const double h = std::min(dt, t_final - t);
    rk.step(y, t, h, rhs);
    t = (s == steps) ? t_final : t + h;
    on_step(t, y, s, s == steps);
  }
}

// As march_rk4, calling `record(t, y)` at t=0, every `cadence` steps and at the end.
template <class Rhs, class Record>
void integrate_rk4(State& y, double dt, double t_final, int cadence, Rhs&& rhs, Record&& record) {
  if (cadence < 1) cadence = 1;
  march_rk4(y, dt, t_final, rhs, [&](double t, const State& s, long step, bool last) {
    if (step % cadence == 0 || last) record(t, s);
  });
}

// Extra GLL order of the grid used to integrate solution errors.
inline constexpr int kFineOversampling = 10;

inline double series_max(const DiagnosticsSeries& s, const std::string& column) {
  double m = 0.0;
  for (double v : s.column(column)) m = std::max(m, v);
  return m;
}

inline double relative_change(double now, double initial) {
  return initial != 0.0 ? std::abs(now - initial) / std::abs(initial) : std::abs(now - initial);
}

}  // namespace mmf
