#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mmf/core/errors.hpp"
#include "mmf/mesh/cubed_sphere.hpp"
#include "mmf/operators/rossby_haurwitz.hpp"

namespace mmf {

// Unit-radius, one-day time unit.
struct SweUnits {
  static constexpr double earth_radius = 6.37122e6;  // m
  static constexpr double gravity = 9.80616;         // m/s^2
  static constexpr double day = 86400.0;             // s
  static constexpr double rotation = 7.292e-5;       // 1/s

  static constexpr double omega() { return rotation * day; }
  static constexpr double g_tilde() { return gravity * day * day / earth_radius; }
  static constexpr double length(double meters) { return meters / earth_radius; }
  static constexpr double speed(double m_per_s) { return m_per_s * day / earth_radius; }
  static constexpr double rate(double per_s) { return per_s * day; }
  // geopotential (m^2/s^2) to normalized depth
  static constexpr double depth_from_geopotential(double gh) {
    return gh * day * day / (earth_radius * earth_radius) / g_tilde();
  }
};

enum class WilliamsonKind { SteadyZonal, UnsteadyZonal, RossbyHaurwitz, IsolatedMountain, UnstableJet };

inline std::string to_string(WilliamsonKind k) {
  switch (k) {
    case WilliamsonKind::SteadyZonal: return "steady-zonal";
    case WilliamsonKind::UnsteadyZonal: return "unsteady-zonal";
    case WilliamsonKind::RossbyHaurwitz: return "rossby-haurwitz";
    case WilliamsonKind::IsolatedMountain: return "isolated-mountain";
    default: return "unstable-jet";
  }
}

inline WilliamsonKind parse_williamson(const std::string& s) {
  for (auto k : {WilliamsonKind::SteadyZonal, WilliamsonKind::UnsteadyZonal, WilliamsonKind::RossbyHaurwitz,
                 WilliamsonKind::IsolatedMountain, WilliamsonKind::UnstableJet})
    if (to_string(k) == s) return k;
  throw UsageError("unknown SWE case '" + s +
                   "' (steady-zonal|unsteady-zonal|rossby-haurwitz|isolated-mountain|unstable-jet)");
}

// Point values of a case: depth H, still-water depth H0, Cartesian velocity,
// Coriolis parameter. Here theta is latitude.
struct SwePointState {
  double H = 0.0;
  double H0 = 0.0;
  Vec3 u;
  double f = 0.0;
};

inline Vec3 north_unit_latitude(double lat, double lon) {
  return {-std::sin(lat) * std::cos(lon), -std::sin(lat) * std::sin(lon), std::cos(lat)};
}

namespace detail {

// Balanced jet: depth as a function of latitude, integrated once on a table.
class JetProfile {
 public:
  static constexpr double u_max_ms = 80.0;
  static constexpr double mean_depth_m = 10000.0;
  static constexpr double bump_m = 120.0;

  JetProfile() {
    const double pi = std::numbers::pi;
    lat0_ = pi / 7;
    lat1_ = pi / 2 - lat0_;
    umax_ = SweUnits::speed(u_max_ms);
    en_ = std::exp(-4.0 / ((lat1_ - lat0_) * (lat1_ - lat0_)));
    const double g = SweUnits::g_tilde(), om = SweUnits::omega();
    // g H(lat) = g H_ref - int_{-pi/2}^{lat} u (f + u tan) dlat
    table_.assign(kTable + 1, 0.0);
    const double dl = pi / kTable;
    auto integrand = [&](double l) {
      const double u = velocity(l);
      return u * (2 * om * std::sin(l) + u * std::tan(l));
    };
    for (int k = 0; k < kTable; ++k) {
      const double a = -pi / 2 + k * dl;
      table_[k + 1] = table_[k] - dl / 6 * (integrand(a) + 4 * integrand(a + dl / 2) + integrand(a + dl)) / g;
    }
    // shift so the area-weighted mean equals the mean depth
    double num = 0.0, den = 0.0;
    for (int k = 0; k <= kTable; ++k) {
      const double l = -pi / 2 + k * dl;
      const double w = (k == 0 || k == kTable) ? 0.5 : 1.0;
      num += w * table_[k] * std::cos(l);
      den += w * std::cos(l);
    }
    shift_ = SweUnits::length(mean_depth_m) - num / den;
  }

  double velocity(double lat) const {
    if (lat <= lat0_ || lat >= lat1_) return 0.0;
    return umax_ / en_ * std::exp(1.0 / ((lat - lat0_) * (lat - lat1_)));
  }
  double depth(double lat) const {
    const double pi = std::numbers::pi;
    const double s = (lat + pi / 2) / pi * kTable;
    const int k = std::min(kTable - 1, std::max(0, static_cast<int>(s)));
    const double t = s - k;
    return shift_ + (1 - t) * table_[k] + t * table_[k + 1];
  }

 private:
  static constexpr int kTable = 20000;
  double lat0_, lat1_, umax_, en_, shift_ = 0.0;
  std::vector<double> table_;
};

inline const JetProfile& jet_profile() {
  static const JetProfile p;
  return p;
}

}  // namespace detail

struct WilliamsonCase {
  WilliamsonKind kind = WilliamsonKind::SteadyZonal;
  double alpha = std::numbers::pi / 4;  // flow orientation for the zonal cases
  bool disturbed = false;               // Rossby-Haurwitz with the height disturbance
  bool jet_perturbation = true;         // unstable jet bump
  // Nonlinear SWE volume terms: -1 collocated, 0 the 3/2 rule, > p that GLL order.
  int quadrature_order = 0;
  int quadrature_for(int p) const {
    if (quadrature_order < 0) return 0;
    if (quadrature_order == 0) return (3 * p + 1) / 2;
    return quadrature_order;
  }
  double dt = 0.0;                      // 0 -> case default
  double t_final = -1.0;                // < 0 -> case default

  // constants
  static constexpr double u0 = 2 * std::numbers::pi / 12;
  static constexpr double gh0_zonal = 2.94e4;
  static constexpr int rh_wave = 4;
  static constexpr double rh_h0_m = 8e3;
  static constexpr double rh_omega = 7.848e-6;
  static constexpr double mountain_radius = std::numbers::pi / 9;
  static constexpr double mountain_lon = 3 * std::numbers::pi / 2;
  static constexpr double mountain_lat = std::numbers::pi / 6;
  static constexpr double mountain_u_ms = 20.0;

  double default_dt() const {
    switch (kind) {
      case WilliamsonKind::SteadyZonal:
      case WilliamsonKind::UnsteadyZonal: return 5e-4;
      default: return 1e-4;
    }
  }
  double default_t_final() const {
    switch (kind) {
      case WilliamsonKind::SteadyZonal: return 5.0;
      case WilliamsonKind::UnsteadyZonal: return 0.5;
      case WilliamsonKind::RossbyHaurwitz: return 14.0;
      case WilliamsonKind::IsolatedMountain: return 15.0;
      default: return 6.0;
    }
  }
  double step() const { return dt > 0.0 ? dt : default_dt(); }
  double final_time() const { return t_final >= 0.0 ? t_final : default_t_final(); }
  bool has_exact() const { return kind == WilliamsonKind::SteadyZonal || kind == WilliamsonKind::UnsteadyZonal; }

  // State at point x and time t. For cases without a closed-form solution only
  // t = 0 is meaningful.
  SwePointState evaluate(const Vec3& xin, double t = 0.0) const {
    const UnitSpherePoint p(xin);
    const double lat = p.latitude(), lon = p.longitude();
    const double sl = std::sin(lat), cl = std::cos(lat);
    const double g = SweUnits::g_tilde(), Om = SweUnits::omega();
    const Vec3 east = east_unit(lon), north = north_unit_latitude(lat, lon);
    SwePointState s;
    switch (kind) {
      case WilliamsonKind::SteadyZonal: {
        const double sa = std::sin(alpha), ca = std::cos(alpha);
        const double uphi = u0 * (cl * ca + sl * std::cos(lon) * sa);
        const double uth = -u0 * std::sin(lon) * sa;
        const double q = -std::cos(lon) * cl * sa + sl * ca;
        s.H0 = SweUnits::depth_from_geopotential(gh0_zonal);
        s.H = s.H0 - (Om * u0 + 0.5 * u0 * u0) * q * q / g;
        s.u = uphi * east + uth * north;
        s.f = 2 * Om * q;
        break;
      }
      case WilliamsonKind::UnsteadyZonal: {
        const double sa = std::sin(alpha), ca = std::cos(alpha);
        const double c = std::cos(Om * t), sn = std::sin(Om * t);
        const double TR = std::cos(lon) * c - std::sin(lon) * sn;
        const double uphi = u0 * (TR * sa * sl + ca * cl);
        const double uth = -u0 * (std::sin(lon) * c + std::cos(lon) * sn) * sa;
        const double k1 = 133681.0 * SweUnits::day * SweUnits::day / (SweUnits::earth_radius * SweUnits::earth_radius);
        const double k2 = 10.0 * SweUnits::day * SweUnits::day / (SweUnits::earth_radius * SweUnits::earth_radius);
        const double os = Om * sl;
        s.H0 = k1 / g - k2 / g - os * os / (2 * g);
        const double b = u0 * (-TR * sa * cl + ca * sl) + os;
        const double eta = (-b * b + os * os) / (2 * g);
        s.H = s.H0 + eta;
        s.u = uphi * east + uth * north;
        s.f = 2 * Om * sl;
        break;
      }
      case WilliamsonKind::RossbyHaurwitz: {
        const int R = rh_wave;
        const double w = SweUnits::rate(rh_omega), K = w;
        const double cR1 = std::pow(cl, R - 1), cR = cR1 * cl;
        const double u = w * cl + K * cR1 * (R * sl * sl - cl * cl) * std::cos(R * lon);
        const double v = -K * R * cR1 * sl * std::sin(R * lon);
        const double CA = 2.0 * R * R - R - 2, CB = R * R + 2.0 * R + 2;
        const double c2 = cl * cl;
        const double A = 0.5 * w * (2 * Om + w) * c2 +
                         0.25 * K * K * std::pow(cl, 2 * (R - 1)) * ((R + 1) * c2 * c2 + CA * c2 - 2.0 * R * R);
        const double B = 2 * (Om + w) * K / ((R + 1.0) * (R + 2.0)) * cR * (CB - (R + 1.0) * (R + 1.0) * c2);
        const double C = 0.25 * K * K * cR * cR * ((R + 1.0) * c2 - (R + 2.0));
        double eta = (A + B * std::cos(R * lon) + C * std::cos(2.0 * R * lon)) / g;
        if (disturbed) {
          const double l0 = 40 * std::numbers::pi / 180, t0 = 50 * std::numbers::pi / 180;
          const Vec3 x0{std::cos(l0) * std::cos(t0), std::sin(l0) * std::cos(t0), std::sin(t0)};
          eta *= 1.0 + dot(p.vec(), x0) / 40.0;
        }
        s.H0 = SweUnits::length(rh_h0_m);
        s.H = s.H0 + eta;
        s.u = u * east + v * north;
        s.f = 2 * Om * sl;
        break;
      }
      case WilliamsonKind::IsolatedMountain: {
        const double um = SweUnits::speed(mountain_u_ms);
        double l = lon < 0 ? lon + 2 * std::numbers::pi : lon;
        const double d2 = (l - mountain_lon) * (l - mountain_lon) + (lat - mountain_lat) * (lat - mountain_lat);
        const double r = std::sqrt(std::min(mountain_radius * mountain_radius, d2));
        s.H0 = SweUnits::length(5960.0) - SweUnits::length(2000.0) * (1.0 - r / mountain_radius);
        s.H = s.H0 - (Om * um + 0.5 * um * um) * sl * sl / g;
        s.u = um * cl * east;
        s.f = 2 * Om * sl;
        break;
      }
      case WilliamsonKind::UnstableJet: {
        const auto& jp = detail::jet_profile();
        s.H0 = SweUnits::length(detail::JetProfile::mean_depth_m);
        s.H = jp.depth(lat);
        if (jet_perturbation) {
          const double a = 1.0 / 3.0, b = 1.0 / 15.0, l2 = std::numbers::pi / 4;
          s.H += SweUnits::length(detail::JetProfile::bump_m) * cl * std::exp(-(lon / a) * (lon / a)) *
                 std::exp(-((l2 - lat) / b) * ((l2 - lat) / b));
        }
        s.u = jp.velocity(lat) * east;
        s.f = 2 * Om * sl;
        break;
      }
    }
    return s;
  }
};

}  // namespace mmf
