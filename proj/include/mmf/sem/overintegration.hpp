#pragma once

#include <vector>

#include "mmf/mesh/high_order_mesh.hpp"
#include "mmf/sem/geometry.hpp"
#include "mmf/sem/gll.hpp"

namespace mmf {

// Quadrature on a finer GLL grid for nonlinear volume terms (polynomial
// dealiasing). Nodal fields of order p are interpolated to the q grid, the
// integrand is evaluated there and tested against the order-p basis.
class OverIntegration {
 public:
  OverIntegration(const HighOrderMesh& mesh, int p, int q) : n_(p + 1), m_(q + 1) {
    const auto x = gll_rule(p).nodes;
    const auto y = gll_rule(q).nodes;
    I_ = interpolation_matrix(x, y);
    // derivative of the coarse cardinal functions at fine nodes
    const auto D = differentiation_matrix(x);
    DI_.assign(m_ * n_, 0.0);
    for (int a = 0; a < m_; ++a)
      for (int j = 0; j < n_; ++j) {
        double s = 0.0;
        for (int k = 0; k < n_; ++k) s += I_[a * n_ + k] * D[k * n_ + j];
        DI_[a * n_ + j] = s;
      }
    geom_ = compute_geometry(mesh.mappings, ReferenceElement::sampling(q));
  }

  int coarse_n1d() const { return n_; }
  int fine_n1d() const { return m_; }
  int fine_npe() const { return m_ * m_; }
  const ElementGeometry& geometry() const { return geom_; }

  // element-local interpolation; T is double or Vec3
  template <class T>
  void interpolate(const T* u, T* out) const {
    thread_local std::vector<T> tmp;
    tmp.assign(n_ * m_, T{});
    for (int j = 0; j < n_; ++j)
      for (int a = 0; a < m_; ++a) {
        T s{};
        for (int i = 0; i < n_; ++i) s = s + I_[a * n_ + i] * u[j * n_ + i];
        tmp[j * m_ + a] = s;
      }
    for (int b = 0; b < m_; ++b)
      for (int a = 0; a < m_; ++a) {
        T s{};
        for (int j = 0; j < n_; ++j) s = s + I_[b * n_ + j] * tmp[j * m_ + a];
        out[b * m_ + a] = s;
      }
  }

  // residual -= scale * int grad(phi) . V, V given on the fine grid of element e
  void add_weak_divergence(const Vec3* V, int e, double* residual, double scale = 1.0) const {
    thread_local std::vector<double> f1, f2, t1, t2;
    f1.resize(m_ * m_);
    f2.resize(m_ * m_);
    const int base = e * m_ * m_;
    for (int k = 0; k < m_ * m_; ++k) {
      f1[k] = geom_.mass[base + k] * dot(V[k], geom_.g1[base + k]);
      f2[k] = geom_.mass[base + k] * dot(V[k], geom_.g2[base + k]);
    }
    // contract the fine b index first
    t1.assign(n_ * m_, 0.0);
    t2.assign(n_ * m_, 0.0);
    for (int j = 0; j < n_; ++j)
      for (int a = 0; a < m_; ++a) {
        double s1 = 0.0, s2 = 0.0;
        for (int b = 0; b < m_; ++b) {
          s1 += I_[b * n_ + j] * f1[b * m_ + a];
          s2 += DI_[b * n_ + j] * f2[b * m_ + a];
        }
        t1[j * m_ + a] = s1;
        t2[j * m_ + a] = s2;
      }
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int a = 0; a < m_; ++a) s += DI_[a * n_ + i] * t1[j * m_ + a] + I_[a * n_ + i] * t2[j * m_ + a];
        residual[j * n_ + i] -= scale * s;
      }
  }

  // residual += int s phi, s given on the fine grid of element e
  void add_source(const double* s, int e, double* residual) const {
    thread_local std::vector<double> f, t;
    f.resize(m_ * m_);
    const int base = e * m_ * m_;
    for (int k = 0; k < m_ * m_; ++k) f[k] = geom_.mass[base + k] * s[k];
    t.assign(n_ * m_, 0.0);
    for (int j = 0; j < n_; ++j)
      for (int a = 0; a < m_; ++a) {
        double acc = 0.0;
        for (int b = 0; b < m_; ++b) acc += I_[b * n_ + j] * f[b * m_ + a];
        t[j * m_ + a] = acc;
      }
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (int a = 0; a < m_; ++a) acc += I_[a * n_ + i] * t[j * m_ + a];
        residual[j * n_ + i] += acc;
      }
  }

 private:
  int n_, m_;
  std::vector<double> I_, DI_;
  ElementGeometry geom_;
};

}  // namespace mmf
