#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mmf/core/errors.hpp"

namespace mmf {

using State = std::vector<double>;

// Classical RK4 with reusable stage storage. `rhs(t, y, dydt)` must fill dydt.
class Rk4 {
 public:
  template <class Rhs>
  void step(State& y, double t, double dt, Rhs&& rhs) {
    if (!(dt > 0.0)) throw UsageError("RK4 step needs dt > 0");
    const size_t n = y.size();
    k1_.resize(n);
    k2_.resize(n);
    k3_.resize(n);
    k4_.resize(n);
    tmp_.resize(n);
    rhs(t, y, k1_);
    for (size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k1_[i];
    rhs(t + 0.5 * dt, tmp_, k2_);
    for (size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k2_[i];
    rhs(t + 0.5 * dt, tmp_, k3_);
    for (size_t i = 0; i < n; ++i) tmp_[i] = y[i] + dt * k3_[i];
    rhs(t + dt, tmp_, k4_);
    const double c = dt / 6.0;
    for (size_t i = 0; i < n; ++i) y[i] += c * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    for (size_t i = 0; i < n; ++i)
      if (!std::isfinite(y[i]))
        throw NonFiniteState("non-finite state after step ending at t=" + std::to_string(t + dt), t + dt);
  }

 private:
  State k1_, k2_, k3_, k4_, tmp_;
};

template <class Rhs>
State rk4_step(const State& y, Rhs&& rhs, double t, double dt) {
  State out = y;
  Rk4 rk;
  rk.step(out, t, dt, rhs);
  return out;
}

}  // namespace mmf
