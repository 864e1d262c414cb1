#pragma once

#include <cmath>

#include "mmf/core/vec3.hpp"
#include "mmf/mesh/cubed_sphere.hpp"

namespace mmf {

// Operator-test field. theta is colatitude, phi longitude; v_theta is the
// northward component, which makes the field divergence free.
struct RossbyHaurwitzParams {
  double omega = 7.848e-6;
  double K = 7.848e-6;
  int wave_number = 4;
};

struct SphericalComponents {
  double v_phi = 0.0;
  double v_theta = 0.0;
};

inline Vec3 east_unit(double phi) { return {-std::sin(phi), std::cos(phi), 0.0}; }
inline Vec3 north_unit(double theta, double phi) {
  return {-std::cos(theta) * std::cos(phi), -std::cos(theta) * std::sin(phi), std::sin(theta)};
}

inline SphericalComponents rh_velocity(const UnitSpherePoint& x, const RossbyHaurwitzParams& p = {}) {
  const double th = x.colatitude(), ph = x.longitude();
  const double s = std::sin(th), c = std::cos(th);
  return {p.omega * s + p.K * s * s * s * (4 * c * c - s * s) * std::cos(4 * ph),
          -4 * p.K * s * s * s * c * std::sin(4 * ph)};
}

inline Vec3 rh_velocity_vector(const UnitSpherePoint& x, const RossbyHaurwitzParams& p = {}) {
  const auto v = rh_velocity(x, p);
  const double th = x.colatitude(), ph = x.longitude();
  return v.v_phi * east_unit(ph) + v.v_theta * north_unit(th, ph);
}

// Radial vorticity of rh_velocity_vector.
inline double rh_curl(const UnitSpherePoint& x, const RossbyHaurwitzParams& p = {}) {
  const double th = x.colatitude(), ph = x.longitude();
  const double s = std::sin(th), c = std::cos(th);
  return 2 * p.omega * c - 30 * p.K * s * s * s * s * c * std::cos(4 * ph);
}

// The closed form with the opposite orientation, -2 w cos + 30 K sin^4 cos cos 4phi.
inline double rh_curl_printed(double theta, double phi, const RossbyHaurwitzParams& p = {}) {
  const double s = std::sin(theta), c = std::cos(theta);
  return -2 * p.omega * c + 30 * p.K * s * s * s * s * c * std::cos(4 * phi);
}

// Scalar field for the gradient tests: the v_phi expression.
inline double rh_scalar(const UnitSpherePoint& x, const RossbyHaurwitzParams& p = {}) {
  return rh_velocity(x, p).v_phi;
}

struct SphericalPartials {
  double d_theta = 0.0;
  double d_phi = 0.0;
};

inline SphericalPartials rh_scalar_partials(double theta, double phi, const RossbyHaurwitzParams& p = {}) {
  const double s = std::sin(theta), c = std::cos(theta);
  return {p.omega * c + p.K * s * s * (3 * c * (4 * c * c - s * s) - 10 * s * s * c) * std::cos(4 * phi),
          -4 * p.K * s * s * s * (4 * c * c - s * s) * std::sin(4 * phi)};
}

// Tangential gradient: d_theta f along the colatitude direction plus
// (1/sin theta) d_phi f along east.
// The omega*sin(theta) term makes f a cone at the poles, where the gradient is
// undefined; the value returned there is the limit along phi = 0.
inline Vec3 rh_scalar_gradient(const UnitSpherePoint& x, const RossbyHaurwitzParams& p = {}) {
  const double th = x.colatitude(), ph = x.longitude();
  const double s = std::sin(th), c = std::cos(th);
  const auto d = rh_scalar_partials(th, ph, p);
  const double d_phi_over_sin = -4 * p.K * s * s * (4 * c * c - s * s) * std::sin(4 * ph);
  return (-d.d_theta) * north_unit(th, ph) + d_phi_over_sin * east_unit(ph);
}

}  // namespace mmf
