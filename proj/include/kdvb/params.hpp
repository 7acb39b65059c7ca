#pragma once

#include <complex>

#include "kdvb/errors.hpp"

namespace kdvb {

/// Coefficients of the (compound) KdV-Burgers equation
///
///     u_t = s u_xxx - mu u_xx - alpha u u_x - beta u^2 u_x
///
/// together with the velocity v and phase xi0 of a travelling wave
/// u(x, t) = phi(x - v t - xi0). beta = 0 is the standard equation.
/// The phase is complex: imaginary shifts are legal and interpolate between
/// the regular and singular families.
struct PhysicalParams {
  double s = 0.0;
  double mu = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double v = 0.0;
  std::complex<double> xi0{};
};

/// Coefficients of the rescaled first integral
///
///     w'' - w' + p w - w^2 - q w^3 = k
///
/// plus the displacement delta (w = U + delta, standard case only) and the
/// reduced phase theta0. delta and k are zero until a factorization fills
/// them in.
struct ReducedParams {
  double p = 0.0;
  double q = 0.0;
  double delta = 0.0;
  double k = 0.0;
  std::complex<double> theta0{};
};

/// Exact-zero checks only; conditioning near zero is the caller's business.
inline void validate(const PhysicalParams& params) {
  if (params.s == 0.0)
    throw DomainError("dispersion coefficient s must be nonzero");
  if (params.mu == 0.0)
    throw DomainError("dissipation coefficient mu must be nonzero");
  if (params.alpha == 0.0)
    throw DomainError("quadratic coefficient alpha must be nonzero");
}

/// phi = amplitude_scale * w.
inline double amplitude_scale(const PhysicalParams& params) {
  validate(params);
  return 2.0 * params.mu * params.mu / (params.alpha * params.s);
}

/// d theta / d xi.
inline double coordinate_scale(const PhysicalParams& params) {
  validate(params);
  return params.mu / params.s;
}

inline ReducedParams reduce(const PhysicalParams& params) {
  validate(params);
  const double mu2 = params.mu * params.mu;
  ReducedParams r;
  r.p = params.v * params.s / mu2;
  r.q = 4.0 * params.beta * mu2 / (3.0 * params.s * params.alpha * params.alpha);
  r.theta0 = params.xi0 * (params.mu / params.s);
  return r;
}

/// Velocity whose reduction gives the rescaled coefficient p.
inline double velocity_for(double p, const PhysicalParams& params) {
  validate(params);
  return params.mu * params.mu * p / params.s;
}

inline std::complex<double> to_physical_amplitude(std::complex<double> w,
                                                  const PhysicalParams& params) {
  return amplitude_scale(params) * w;
}

inline std::complex<double> to_reduced_amplitude(std::complex<double> phi,
                                                 const PhysicalParams& params) {
  return phi / amplitude_scale(params);
}

/// theta = mu (x - v t - xi0) / s.
inline std::complex<double> to_reduced_coordinate(double x, double t,
                                                  const PhysicalParams& params) {
  validate(params);
  const std::complex<double> xi = x - params.v * t - params.xi0;
  return xi * (params.mu / params.s);
}

/// Inverse of to_reduced_coordinate at fixed t: returns the travelling
/// coordinate x - v t = xi0 + s theta / mu.
inline std::complex<double> to_travelling_coordinate(std::complex<double> theta,
                                                     const PhysicalParams& params) {
  validate(params);
  return params.xi0 + theta * (params.s / params.mu);
}

}  // namespace kdvb
