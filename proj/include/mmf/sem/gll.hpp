#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "mmf/core/errors.hpp"

namespace mmf {

// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
inline std::pair<double, double> legendre_and_derivative(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  // derivative from (1-x^2) P_n' = n (P_{n-1} - x P_n); endpoints closed form
  double dp;
  if (std::abs(1.0 - x * x) < 1e-300) {
    dp = (x > 0 ? 1.0 : (n % 2 ? 1.0 : -1.0)) * 0.5 * n * (n + 1);
  } else {
    dp = n * (p0 - x * p1) / (1.0 - x * x);
  }
  return {p1, dp};
}

struct GllRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Lobatto-Legendre rule with p+1 points, symmetric to the last bit.
inline GllRule gll_rule(int p) {
  if (p < 1) throw OrderOutOfRange("GLL rule needs p >= 1, got " + std::to_string(p));
  const int n = p + 1;
  GllRule r;
  r.nodes.assign(n, 0.0);
  r.weights.assign(n, 0.0);
  r.nodes[0] = -1.0;
  r.nodes[p] = 1.0;
  for (int i = 1; i < p; ++i) {
    // interior nodes are roots of P_p'; Newton from the Chebyshev-Lobatto guess
    double x = -std::cos(std::numbers::pi * i / p);
    for (int it = 0; it < 100; ++it) {
      auto [pp, dp] = legendre_and_derivative(p, x);
      double d2p = (2.0 * x * dp - p * (p + 1.0) * pp) / (1.0 - x * x);
      double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
  }
  for (int i = 0; i < n / 2; ++i) {
    double a = 0.5 * (r.nodes[p - i] - r.nodes[i]);
    r.nodes[i] = -a;
    r.nodes[p - i] = a;
  }
  if (p % 2 == 0) r.nodes[p / 2] = 0.0;
  for (int i = 0; i < n; ++i) {
    double pp = legendre_and_derivative(p, r.nodes[i]).first;
    r.weights[i] = 2.0 / (p * (p + 1.0) * pp * pp);
  }
  for (int i = 0; i < n / 2; ++i) {
    double w = 0.5 * (r.weights[i] + r.weights[p - i]);
    r.weights[i] = w;
    r.weights[p - i] = w;
  }
  return r;
}

inline std::vector<double> barycentric_weights(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> lam(n, 1.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (k != j) lam[j] /= (x[j] - x[k]);
  return lam;
}

// Lagrange basis values of the interpolant through `x` evaluated at `t`.
inline std::vector<double> lagrange_basis(const std::vector<double>& x, const std::vector<double>& lam,
                                          double t) {
  const int n = static_cast<int>(x.size());
  std::vector<double> l(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (t == x[j]) {
      l[j] = 1.0;
      return l;
    }
  }
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    l[j] = lam[j] / (t - x[j]);
    s += l[j];
  }
  for (int j = 0; j < n; ++j) l[j] /= s;
  return l;
}

// Dense matrix (row-major, rows = targets) interpolating from nodes `x` to `targets`.
inline std::vector<double> interpolation_matrix(const std::vector<double>& x,
                                                const std::vector<double>& targets) {
  const auto lam = barycentric_weights(x);
  const size_t n = x.size();
  std::vector<double> m(targets.size() * n);
  for (size_t r = 0; r < targets.size(); ++r) {
    auto l = lagrange_basis(x, lam, targets[r]);
    for (size_t c = 0; c < n; ++c) m[r * n + c] = l[c];
  }
  return m;
}

// D[i*n + j] = l_j'(x_i)
inline std::vector<double> differentiation_matrix(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  const auto lam = barycentric_weights(x);
  std::vector<double> d(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double v = (lam[j] / lam[i]) / (x[i] - x[j]);
      d[i * n + j] = v;
      diag -= v;
    }
    d[i * n + i] = diag;
  }
  return d;
}

class ReferenceElement {
 public:
  static constexpr int kMaxOrder = 16;

  explicit ReferenceElement(int p) : ReferenceElement(p, kMaxOrder) {}

  // Element used only as a sampling/quadrature grid, allowed above kMaxOrder.
  static ReferenceElement sampling(int p) { return ReferenceElement(p, 64); }

  int order() const { return p_; }
  int n1d() const { return p_ + 1; }
  int n2d() const { return (p_ + 1) * (p_ + 1); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  // diff(i, j) = derivative of the j-th cardinal function at node i
  double diff(int i, int j) const { return diff_[i * (p_ + 1) + j]; }
  const std::vector<double>& diff_matrix() const { return diff_; }

 private:
  ReferenceElement(int p, int max_order) : p_(p) {
    if (p < 1 || p > max_order)
      throw OrderOutOfRange("order " + std::to_string(p) + " outside [1, " + std::to_string(max_order) + "]");
    auto r = gll_rule(p);
    nodes_ = std::move(r.nodes);
    weights_ = std::move(r.weights);
    diff_ = differentiation_matrix(nodes_);
  }

  int p_;
  std::vector<double> nodes_, weights_, diff_;
};

inline ReferenceElement make_reference_element(int p) { return ReferenceElement(p); }

}  // namespace mmf
