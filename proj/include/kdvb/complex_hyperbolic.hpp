#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace kdvb {

/// Complex hyperbolic tangent that saturates cleanly for large |Re z|.
///
/// Uses Kahan's formulation: with t = tan(y), b = 1 + t^2, s = sinh(x),
/// r = sqrt(1 + s^2),
///
///     tanh(x + iy) = (b r s + i t) / (1 + b s^2).
///
/// Beyond |x| = 22 the real part is +-1 to working precision and only the
/// exponentially small imaginary part is kept, so nothing overflows however
/// far out on the real axis the argument is.
inline std::complex<double> stable_tanh(std::complex<double> z) {
  const double x = z.real();
  const double y = z.imag();
  if (std::abs(x) >= 22.0) {
    const double e = std::exp(-2.0 * std::abs(x));
    return {std::copysign(1.0, x), 4.0 * std::sin(y) * std::cos(y) * e};
  }
  const double t = std::tan(y);
  const double b = 1.0 + t * t;
  const double s = std::sinh(x);
  const double r = std::sqrt(1.0 + s * s);
  const double denom = 1.0 + b * s * s;
  return {b * r * s / denom, t / denom};
}

inline std::complex<double> stable_coth(std::complex<double> z) {
  return 1.0 / stable_tanh(z);
}

/// 1 + tanh z = 2 / (1 + e^(-2z)), without the cancellation of adding 1 to
/// a tanh near -1. The exponential is always taken of a number with
/// non-positive real part.
inline std::complex<double> one_plus_tanh(std::complex<double> z) {
  if (z.real() >= 0.0) return 2.0 / (1.0 + std::exp(-2.0 * z));
  const auto e = std::exp(2.0 * z);
  return 2.0 * e / (1.0 + e);
}

/// 1 + coth z = 2 / (1 - e^(-2z)).
inline std::complex<double> one_plus_coth(std::complex<double> z) {
  if (z.real() >= 0.0) return 2.0 / (1.0 - std::exp(-2.0 * z));
  const auto e = std::exp(2.0 * z);
  return 2.0 * e / (e - 1.0);
}

/// Distance-based test for z lying on the lattice i*pi*(n + offset), n integer.
/// offset = 0.5 gives the poles of tanh, offset = 0 the poles of coth.
inline bool on_imaginary_pi_lattice(std::complex<double> z, double offset,
                                    double rel_tol = 1e-12) {
  const double tol = rel_tol * std::max(1.0, std::abs(z));
  if (std::abs(z.real()) > tol) return false;
  const double n = std::round(z.imag() / std::numbers::pi - offset);
  return std::abs(z.imag() - std::numbers::pi * (n + offset)) <= tol;
}

/// Nearest lattice point i*pi*(n + offset) to z.
inline std::complex<double> nearest_imaginary_pi_lattice(std::complex<double> z,
                                                         double offset) {
  const double n = std::round(z.imag() / std::numbers::pi - offset);
  return {0.0, std::numbers::pi * (n + offset)};
}

}  // namespace kdvb
