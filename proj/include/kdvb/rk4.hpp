#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "kdvb/errors.hpp"

namespace kdvb {

template <class State>
struct Trajectory {
  std::vector<double> theta;
  std::vector<State> state;
  bool blew_up = false;  // stopped early on |U| > threshold or a non-finite value

  std::size_t size() const { return theta.size(); }
  const State& back() const { return state.back(); }
};

/// Classical fixed-step RK4 for the autonomous scalar flow y' = rhs(y).
///
/// The step is adjusted down so that an integer number of steps lands
/// exactly on `end`. Integration stops after the first state whose magnitude
/// exceeds `blow_up` (that state is kept and the flag set).
template <class State, class Rhs>
Trajectory<State> integrate_rk4(Rhs&& rhs, State y0, double begin, double end, double step,
                                double blow_up = 1e12) {
  if (!(step > 0.0)) throw DomainError("integration step must be positive");
  const double span = end - begin;
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(std::abs(span) / step - 1e-9)));
  const double h = span / static_cast<double>(n);

  Trajectory<State> traj;
  traj.theta.reserve(n + 1);
  traj.state.reserve(n + 1);
  traj.theta.push_back(begin);
  traj.state.push_back(y0);

  State y = y0;
  for (std::size_t i = 0; i < n; ++i) {
    const State k1 = rhs(y);
    const State k2 = rhs(y + (h / 2) * k1);
    const State k3 = rhs(y + (h / 2) * k2);
    const State k4 = rhs(y + h * k3);
    y = y + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    traj.theta.push_back(begin + h * static_cast<double>(i + 1));
    traj.state.push_back(y);
    const double mag = std::abs(y);
    if (!std::isfinite(mag) || mag > blow_up) {
      traj.blew_up = true;
      break;
    }
  }
  return traj;
}

}  // namespace kdvb
