#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmf/core/errors.hpp"
#include "mmf/sem/geometry.hpp"

namespace mmf {

// Nodal values on every element, laid out like ElementGeometry volume arrays.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const ElementGeometry& g, double value = 0.0)
      : n_elements_(g.n_elements), order_(g.order), v_(g.num_nodes(), value) {
    check_finite();
  }
  ScalarField(const ElementGeometry& g, std::vector<double> values)
      : n_elements_(g.n_elements), order_(g.order), v_(std::move(values)) {
    if (static_cast<int>(v_.size()) != g.num_nodes()) throw InvalidField("field size does not match the geometry");
    check_finite();
  }
  template <class F>
  static ScalarField from_function(const ElementGeometry& g, F&& f) {
    std::vector<double> v(g.num_nodes());
    for (int i = 0; i < g.num_nodes(); ++i) v[i] = f(g.position[i]);
    return ScalarField(g, std::move(v));
  }

  int n_elements() const { return n_elements_; }
  int order() const { return order_; }
  size_t size() const { return v_.size(); }
  double operator[](size_t i) const { return v_[i]; }
  double& operator[](size_t i) { return v_[i]; }
  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }
  std::span<const double> view() const { return v_; }

 private:
  void check_finite() const {
    for (double x : v_)
      if (!std::isfinite(x)) throw InvalidField("field contains a non-finite value");
  }
  int n_elements_ = 0;
  int order_ = 0;
  std::vector<double> v_;
};

// Components of a tangent field in the moving-frame basis.
struct FrameVectorField {
  ScalarField v1, v2;
};

inline double integrate(std::span<const double> f, const ElementGeometry& g) {
  double total = 0.0;
  for (int e = 0; e < g.n_elements; ++e) {
    double s = 0.0;
    for (int k = 0; k < g.npe; ++k) s += f[e * g.npe + k] * g.mass[e * g.npe + k];
    total += s;
  }
  return total;
}
inline double integrate(const ScalarField& f, const ElementGeometry& g) { return integrate(f.view(), g); }

// Tangential gradient of the element-local interpolant: sum_a (d_a f) g^a.
inline void element_gradient(const double* f, const ElementGeometry& g, const ReferenceElement& ref, int e,
                             Vec3* out) {
  const int n = g.n1d;
  const double* D = ref.diff_matrix().data();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double d1 = 0.0, d2 = 0.0;
      for (int k = 0; k < n; ++k) {
        d1 += D[i * n + k] * f[j * n + k];
        d2 += D[j * n + k] * f[k * n + i];
      }
      const int id = e * g.npe + j * n + i;
      out[j * n + i] = d1 * g.g1[id] + d2 * g.g2[id];
    }
}

inline std::vector<Vec3> grad_physical(std::span<const double> f, const ElementGeometry& g,
                                       const ReferenceElement& ref) {
  std::vector<Vec3> out(g.num_nodes());
  for (int e = 0; e < g.n_elements; ++e) element_gradient(f.data() + e * g.npe, g, ref, e, out.data() + e * g.npe);
  return out;
}
inline std::vector<Vec3> grad_physical(const ScalarField& f, const ElementGeometry& g, const ReferenceElement& ref) {
  return grad_physical(f.view(), g, ref);
}

// Own (u-) and neighbor (u+) values at every edge point, indexed like the
// geometry's edge arrays. Open-boundary slots mirror the interior value.
template <class T>
struct EdgeTraces {
  std::vector<T> inner, outer;
};

template <class T>
EdgeTraces<T> edge_trace_exchange(std::span<const T> values, const ElementGeometry& g) {
  EdgeTraces<T> tr;
  tr.inner.resize(g.num_edge_points());
  tr.outer.resize(g.num_edge_points());
  for (int e = 0; e < g.n_elements; ++e)
    for (int le = 0; le < 4; ++le)
      for (int k = 0; k < g.n1d; ++k) tr.inner[g.edge_index(e, le, k)] = values[g.volume_index_of_edge(e, le, k)];
  for (int e = 0; e < g.n_elements; ++e)
    for (int le = 0; le < 4; ++le) {
      const int s = g.slot(e, le);
      for (int k = 0; k < g.n1d; ++k) {
        const int id = g.edge_index(e, le, k);
        tr.outer[id] = g.nb_element[s] < 0 ? tr.inner[id] : tr.inner[g.partner_edge_index(e, le, k)];
      }
    }
  return tr;
}
inline EdgeTraces<double> edge_trace_exchange(const ScalarField& f, const ElementGeometry& g) {
  return edge_trace_exchange<double>(f.view(), g);
}

// Adds  integral over each edge of flux * phi ds  to the nodal residual.
inline void lift_edge_flux(std::span<const double> flux, const ElementGeometry& g, const ReferenceElement& ref,
                           std::span<double> residual) {
  const auto& w = ref.weights();
  for (int e = 0; e < g.n_elements; ++e)
    for (int le = 0; le < 4; ++le)
      for (int k = 0; k < g.n1d; ++k) {
        const int id = g.edge_index(e, le, k);
        residual[g.volume_index_of_edge(e, le, k)] += flux[id] * w[k] * g.edge_jac[id];
      }
}
inline std::vector<double> lift_edge_flux(std::span<const double> flux, const ElementGeometry& g,
                                          const ReferenceElement& ref) {
  std::vector<double> r(g.num_nodes(), 0.0);
  lift_edge_flux(flux, g, ref, r);
  return r;
}

// Adds -integral grad(phi) . V over each element (V given per node).
inline void add_weak_divergence_volume(const Vec3* V, const ElementGeometry& g, const ReferenceElement& ref, int e,
                                       double* residual, double scale = 1.0) {
  const int n = g.n1d, base = e * g.npe;
  const double* D = ref.diff_matrix().data();
  thread_local std::vector<double> f1, f2;
  f1.resize(g.npe);
  f2.resize(g.npe);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int id = base + j * n + i;
      f1[j * n + i] = g.mass[id] * dot(V[j * n + i], g.g1[id]);
      f2[j * n + i] = g.mass[id] * dot(V[j * n + i], g.g2[id]);
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int q = 0; q < n; ++q) s += D[q * n + i] * f1[j * n + q] + D[q * n + j] * f2[q * n + i];
      residual[j * n + i] -= scale * s;
    }
}

// (1/J) sum_a d_a (J g^a . V), the conservative surface divergence of an
// element-local vector field.
inline void element_conservative_divergence(const Vec3* V, const ElementGeometry& g, const ReferenceElement& ref,
                                            int e, double* out) {
  const int n = g.n1d, base = e * g.npe;
  const double* D = ref.diff_matrix().data();
  thread_local std::vector<double> f1, f2;
  f1.resize(g.npe);
  f2.resize(g.npe);
  for (int k = 0; k < g.npe; ++k) {
    f1[k] = g.jac[base + k] * dot(V[k], g.g1[base + k]);
    f2[k] = g.jac[base + k] * dot(V[k], g.g2[base + k]);
  }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int q = 0; q < n; ++q) s += D[i * n + q] * f1[j * n + q] + D[j * n + q] * f2[q * n + i];
      out[j * n + i] = s / g.jac[base + j * n + i];
    }
}

}  // namespace mmf
