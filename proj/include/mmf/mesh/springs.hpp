#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "mmf/core/errors.hpp"

namespace mmf {

struct SpringOptions {
  double tolerance = 1e-12;  // on the max node displacement of one sweep
  int max_iterations = 10000;
  double step = 0.1;
};

using PlaneGrid = std::vector<std::array<double, 2>>;

// Rest lengths of the 4-neighbor springs of an (n x n) grid (index j*n + i).
// horizontal[j*(n-1) + i] joins (i, j)-(i+1, j); vertical[j*n + i] joins (i, j)-(i, j+1).
struct SpringRestLengths {
  std::vector<double> horizontal, vertical;
};

// Rest lengths of the grid as currently placed.
inline SpringRestLengths rest_lengths_of(const PlaneGrid& g, int n) {
  SpringRestLengths r;
  r.horizontal.resize(n * (n - 1));
  r.vertical.resize((n - 1) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i + 1 < n; ++i) {
      const auto &a = g[j * n + i], &b = g[j * n + i + 1];
      r.horizontal[j * (n - 1) + i] = std::hypot(a[0] - b[0], a[1] - b[1]);
    }
  for (int j = 0; j + 1 < n; ++j)
    for (int i = 0; i < n; ++i) {
      const auto &a = g[j * n + i], &b = g[(j + 1) * n + i];
      r.vertical[j * n + i] = std::hypot(a[0] - b[0], a[1] - b[1]);
    }
  return r;
}

// Rest lengths of the affine GLL grid on a width x height rectangle.
inline SpringRestLengths gll_rest_lengths(const std::vector<double>& xi, double width, double height) {
  const int n = static_cast<int>(xi.size());
  SpringRestLengths r;
  r.horizontal.resize(n * (n - 1));
  r.vertical.resize((n - 1) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i + 1 < n; ++i) r.horizontal[j * (n - 1) + i] = 0.5 * width * (xi[i + 1] - xi[i]);
  for (int j = 0; j + 1 < n; ++j)
    for (int i = 0; i < n; ++i) r.vertical[j * n + i] = 0.5 * height * (xi[j + 1] - xi[j]);
  return r;
}

// Gradient descent on sum (length - rest)^2 over unit-stiffness springs.
// Boundary nodes never move. Returns the number of sweeps taken.
inline int relax_springs(PlaneGrid& grid, int n, const SpringRestLengths& rest, const SpringOptions& opt = {}) {
  if (n < 3) return 0;
  PlaneGrid grad(grid.size());
  auto add_spring = [&](int a, int b, double r) {
    double dx = grid[a][0] - grid[b][0], dy = grid[a][1] - grid[b][1];
    double len = std::hypot(dx, dy);
    if (len == 0.0) return;
    double s = 2.0 * (len - r) / len;
    grad[a][0] += s * dx;
    grad[a][1] += s * dy;
    grad[b][0] -= s * dx;
    grad[b][1] -= s * dy;
  };
  for (int it = 1; it <= opt.max_iterations; ++it) {
    for (auto& g : grad) g = {0.0, 0.0};
    for (int j = 0; j < n; ++j)
      for (int i = 0; i + 1 < n; ++i) add_spring(j * n + i, j * n + i + 1, rest.horizontal[j * (n - 1) + i]);
    for (int j = 0; j + 1 < n; ++j)
      for (int i = 0; i < n; ++i) add_spring(j * n + i, (j + 1) * n + i, rest.vertical[j * n + i]);
    double max_move = 0.0;
    for (int j = 1; j + 1 < n; ++j)
      for (int i = 1; i + 1 < n; ++i) {
        auto& g = grad[j * n + i];
        grid[j * n + i][0] -= opt.step * g[0];
        grid[j * n + i][1] -= opt.step * g[1];
        max_move = std::max(max_move, opt.step * std::hypot(g[0], g[1]));
      }
    if (!std::isfinite(max_move)) break;
    if (max_move <= opt.tolerance) return it;
  }
  throw SpringNonConvergence("spring relaxation did not reach tolerance " + std::to_string(opt.tolerance) +
                             " within " + std::to_string(opt.max_iterations) + " iterations");
}

}  // namespace mmf
