#pragma once

// Closed-form travelling waves of the reduced first integral
//
//     w'' - w' + p w - w^2 - q w^3 = k
//
// and their images in physical variables, phi = (2 mu^2 / (alpha s)) w,
// theta = mu (x - v t - xi0) / s.
//
//   standard (q = 0), w = U + delta, p = 2 delta + 6/25:
//     regular   U = 3/50 [1 + tanh((theta - theta0)/10)]^2
//     singular  U = 3/50 [1 + coth((theta - theta0)/10)]^2
//   compound, Delta^2 = 18 p + 6/q - 3:
//     U = -1/(3q) +- 1/(3 sqrt(2q)) [1 + Delta tanh(Delta (theta - theta0)/6)]
//   compound, Delta = 0, A = +-sqrt(q/2):
//     U = -(k0/A) / (A + k0 theta) - (A + 1)/(6 A^2)      (k0 = 0: constant)
//
// Branch pairing: the tanh family labelled "+" solves the Riccati flow with
// A = -sqrt(q/2), and "-" the flow with A = +sqrt(q/2). Consequently the
// Delta -> 0 limit of CompoundTanhPlus is the constant of RationalMinus.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kdvb/complex_hyperbolic.hpp"
#include "kdvb/errors.hpp"
#include "kdvb/factorizer.hpp"
#include "kdvb/params.hpp"

namespace kdvb {

enum class Family {
  KdvbRegular,
  KdvbSingular,
  CompoundTanhPlus,
  CompoundTanhMinus,
  RationalPlus,
  RationalMinus,
  Constant,
};

inline constexpr std::array<Family, 7> all_families = {
    Family::KdvbRegular,    Family::KdvbSingular, Family::CompoundTanhPlus,
    Family::CompoundTanhMinus, Family::RationalPlus, Family::RationalMinus,
    Family::Constant};

constexpr std::string_view family_name(Family family) {
  switch (family) {
    case Family::KdvbRegular: return "kdvb-regular";
    case Family::KdvbSingular: return "kdvb-singular";
    case Family::CompoundTanhPlus: return "compound-tanh-plus";
    case Family::CompoundTanhMinus: return "compound-tanh-minus";
    case Family::RationalPlus: return "rational-plus";
    case Family::RationalMinus: return "rational-minus";
    case Family::Constant: return "constant";
  }
  return "?";
}

inline std::optional<Family> parse_family(std::string_view name) {
  for (const auto f : all_families)
    if (family_name(f) == name) return f;
  return std::nullopt;
}

constexpr bool is_kdvb(Family f) {
  return f == Family::KdvbRegular || f == Family::KdvbSingular;
}
constexpr bool is_compound_tanh(Family f) {
  return f == Family::CompoundTanhPlus || f == Family::CompoundTanhMinus;
}
constexpr bool is_rational(Family f) {
  return f == Family::RationalPlus || f == Family::RationalMinus;
}

/// Sign of A = +-sqrt(q/2) in the Riccati flow a compound-type family solves.
constexpr Sign riccati_branch(Family family, Sign constant_branch = Sign::Plus) {
  switch (family) {
    case Family::CompoundTanhPlus: return Sign::Minus;
    case Family::CompoundTanhMinus: return Sign::Plus;
    case Family::RationalPlus: return Sign::Plus;
    case Family::RationalMinus: return Sign::Minus;
    default: return constant_branch;
  }
}

inline constexpr double universal_scale = 3.0 / 50.0;
inline constexpr double universal_rate = 1.0 / 10.0;

/// Value and first three theta-derivatives.
struct Jet {
  std::complex<double> value{};
  std::complex<double> d1{};
  std::complex<double> d2{};
  std::complex<double> d3{};
};

namespace detail {

inline void require_family(bool ok, Family family, std::string_view op) {
  if (!ok)
    throw DomainError(std::string(op) + " does not apply to family " +
                      std::string(family_name(family)));
}

// tanh or coth of rate*(theta - theta0), with a PoleError located in theta.
inline std::complex<double> kink_function(bool use_coth, std::complex<double> theta,
                                          std::complex<double> theta0, double rate) {
  const auto z = rate * (theta - theta0);
  const double offset = use_coth ? 0.0 : 0.5;
  if (on_imaginary_pi_lattice(z, offset)) {
    const auto loc = theta0 + nearest_imaginary_pi_lattice(z, offset) / rate;
    throw PoleError("pole of " + std::string(use_coth ? "coth" : "tanh") + " at theta = " +
                        shortest(loc),
                    loc);
  }
  return use_coth ? stable_coth(z) : stable_tanh(z);
}

// 1 + kink_function, accurate where the kink function is close to -1.
inline std::complex<double> kink_one_plus(bool use_coth, std::complex<double> theta,
                                          std::complex<double> theta0, double rate) {
  (void)kink_function(use_coth, theta, theta0, rate);  // pole check
  const auto z = rate * (theta - theta0);
  return use_coth ? one_plus_coth(z) : one_plus_tanh(z);
}

// Polynomials in T of degree < 8, where T' = rate (1 - T^2). Both tanh and
// coth of rate*(theta - theta0) obey this, so one routine differentiates
// every hyperbolic family exactly.
using Poly = std::array<double, 8>;

inline Poly along_flow(const Poly& P, double rate) {
  Poly dP{};
  for (std::size_t i = 1; i < P.size(); ++i) dP[i - 1] = static_cast<double>(i) * P[i];
  Poly out{};
  for (std::size_t i = 0; i < dP.size(); ++i) {
    if (dP[i] == 0.0) continue;
    out[i] += rate * dP[i];
    if (i + 2 < out.size()) out[i + 2] -= rate * dP[i];  // degree <= 5 here
  }
  return out;
}

inline std::complex<double> horner(const Poly& P, std::complex<double> T) {
  std::complex<double> acc{};
  for (std::size_t i = P.size(); i-- > 0;) acc = acc * T + P[i];
  return acc;
}

inline Jet polynomial_jet(Poly P, std::complex<double> T, double rate) {
  Jet j;
  j.value = horner(P, T);
  P = along_flow(P, rate);
  j.d1 = horner(P, T);
  P = along_flow(P, rate);
  j.d2 = horner(P, T);
  P = along_flow(P, rate);
  j.d3 = horner(P, T);
  return j;
}

// |x| below accumulated rounding of a sum with the given magnitude is zero.
inline double snap_cancellation(double x, double magnitude) {
  return std::abs(x) <= 16.0 * std::numeric_limits<double>::epsilon() * magnitude ? 0.0 : x;
}

inline void require_positive_q(double q, std::string_view what) {
  if (q == 0.0) throw DomainError(std::string(what) + " requires q ≠ 0");
  if (q < 0.0)
    throw DomainError(std::string(what) + " with q < 0 is not supported, q = " + shortest(q));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Standard KdVB: universal solutions

/// U(theta) of the regular (tanh) or singular (coth) universal solution.
inline std::complex<double> eval_universal(Family family, std::complex<double> theta,
                                           std::complex<double> theta0) {
  detail::require_family(is_kdvb(family), family, "eval_universal");
  const auto one_plus = detail::kink_one_plus(family == Family::KdvbSingular, theta, theta0,
                                               universal_rate);
  return universal_scale * one_plus * one_plus;
}

/// u(x, t) = v/alpha + 3 mu^2/(25 alpha s) {[1 + tanh(mu (x - v t - xi0)/(10 s))]^2 - 2},
/// coth for the singular family. Only the standard equation (beta = 0).
inline std::complex<double> eval_kdvb_physical(Family family, double x, double t,
                                               const PhysicalParams& params) {
  detail::require_family(is_kdvb(family), family, "eval_kdvb_physical");
  validate(params);
  if (params.beta != 0.0)
    throw DomainError("standard KdVB families require beta = 0, got beta = " +
                      detail::shortest(params.beta));
  const std::complex<double> xi = x - params.v * t - params.xi0;
  const auto arg = params.mu * xi / (10.0 * params.s);
  const bool singular = family == Family::KdvbSingular;
  const double offset = singular ? 0.0 : 0.5;
  if (on_imaginary_pi_lattice(arg, offset)) {
    const auto xi_pole = nearest_imaginary_pi_lattice(arg, offset) * (10.0 * params.s / params.mu);
    const auto x_pole = xi_pole + params.v * t + params.xi0;
    throw PoleError("pole at x = " + detail::shortest(x_pole), x_pole);
  }
  const auto T = singular ? stable_coth(arg) : stable_tanh(arg);
  const double scale = 3.0 * params.mu * params.mu / (25.0 * params.alpha * params.s);
  return params.v / params.alpha + scale * ((1.0 + T) * (1.0 + T) - 2.0);
}

// ---------------------------------------------------------------------------
// Compound KdVB: tanh families

/// Delta^2 = 18 p + 6/q - 3. Rounding noise around an exact zero is
/// returned as zero so that degenerate parameter sets give Delta = 0.
inline double compound_discriminant_squared(double p, double q) {
  if (q == 0.0) throw DomainError("compound family requires q ≠ 0");
  const double a = 18.0 * p;
  const double b = 6.0 / q;
  return detail::snap_cancellation(a + b - 3.0, std::abs(a) + std::abs(b) + 3.0);
}

inline double compound_discriminant(double p, double q) {
  const double d2 = compound_discriminant_squared(p, q);
  if (d2 < 0.0)
    throw DomainError("compound tanh family requires Delta^2 >= 0, got Delta^2 = " +
                      detail::shortest(d2));
  return std::sqrt(d2);
}

/// The tanh family written in terms of Delta instead of p, which keeps the
/// Delta -> 0 limit free of cancellation.
inline std::complex<double> compound_tanh_value(Sign label, std::complex<double> theta, double q,
                                                double Delta, std::complex<double> theta0 = {}) {
  detail::require_positive_q(q, "compound family");
  const double sigma = sign_value(label);
  const double c = 1.0 / (3.0 * std::sqrt(2.0 * q));
  std::complex<double> T{};
  if (Delta != 0.0) T = detail::kink_function(false, theta, theta0, Delta / 6.0);
  return -1.0 / (3.0 * q) + sigma * c * (1.0 + Delta * T);
}

inline std::complex<double> eval_compound(Family family, std::complex<double> theta,
                                          const ReducedParams& reduced) {
  detail::require_family(is_compound_tanh(family), family, "eval_compound");
  detail::require_positive_q(reduced.q, "compound family");
  const double Delta = compound_discriminant(reduced.p, reduced.q);
  const Sign label = family == Family::CompoundTanhPlus ? Sign::Plus : Sign::Minus;
  return compound_tanh_value(label, theta, reduced.q, Delta, reduced.theta0);
}

/// u(x, t) = -alpha/(2 beta) +- mu/sqrt(6 beta s) [1 + Delta tanh(mu Delta (x - v t - xi0)/(6 s))].
///
/// The +- label here is the physical one; it coincides with the reduced
/// label when alpha mu s > 0 and is swapped otherwise.
inline std::complex<double> eval_compound_physical(Family family, double x, double t,
                                                   const PhysicalParams& params) {
  detail::require_family(is_compound_tanh(family), family, "eval_compound_physical");
  validate(params);
  if (params.beta == 0.0) throw DomainError("compound family requires beta ≠ 0");
  const auto reduced = reduce(params);
  detail::require_positive_q(reduced.q, "compound family");
  const double Delta = compound_discriminant(reduced.p, reduced.q);
  const double sigma = family == Family::CompoundTanhPlus ? 1.0 : -1.0;
  const std::complex<double> xi = x - params.v * t - params.xi0;
  std::complex<double> T{};
  if (Delta != 0.0) {
    const auto arg = params.mu * Delta * xi / (6.0 * params.s);
    if (on_imaginary_pi_lattice(arg, 0.5)) {
      const auto x_pole = nearest_imaginary_pi_lattice(arg, 0.5) * (6.0 * params.s) /
                              (params.mu * Delta) + params.v * t + params.xi0;
      throw PoleError("pole at x = " + detail::shortest(x_pole), x_pole);
    }
    T = stable_tanh(arg);
  }
  return -params.alpha / (2.0 * params.beta) +
         sigma * params.mu / std::sqrt(6.0 * params.beta * params.s) * (1.0 + Delta * T);
}

// ---------------------------------------------------------------------------
// Compound KdVB: Delta = 0 (rational and constant)

/// p for which Delta = 0: 6 p = 1 - 2/q.
inline double rational_p(double q) {
  detail::require_positive_q(q, "rational family");
  return (1.0 - 2.0 / q) / 6.0;
}

/// -(A + 1)/(6 A^2) with A = sign * sqrt(q/2).
inline double constant_solution(Sign branch, double q) {
  detail::require_positive_q(q, "constant family");
  const double A = sign_value(branch) * std::sqrt(q / 2.0);
  return -(A + 1.0) / (6.0 * A * A);
}

inline std::complex<double> eval_rational(Family family, std::complex<double> theta, double q,
                                          double k0, std::complex<double> theta0 = {}) {
  detail::require_family(is_rational(family), family, "eval_rational");
  const Sign branch = riccati_branch(family);
  const double m = constant_solution(branch, q);
  if (k0 == 0.0) return m;
  const double A = sign_value(branch) * std::sqrt(q / 2.0);
  const auto shift = k0 * (theta - theta0);
  const auto d = A + shift;
  if (std::abs(d) <= 1e-12 * (std::abs(A) + std::abs(shift))) {
    const auto loc = theta0 - A / k0;
    throw PoleError("pole of rational solution at theta = " + detail::shortest(loc), loc);
  }
  return -(k0 / A) / d + m;
}

/// v = mu^2/(6 s) - alpha^2/(4 beta), the velocity giving Delta = 0.
inline double rational_velocity(const PhysicalParams& params) {
  validate(params);
  if (params.beta == 0.0) throw DomainError("rational family requires beta ≠ 0");
  return params.mu * params.mu / (6.0 * params.s) -
         params.alpha * params.alpha / (4.0 * params.beta);
}

/// epsilon = mu sqrt(2 beta / (3 s alpha^2)); equals sign(mu) sqrt(q/2).
inline double rational_epsilon(const PhysicalParams& params) {
  validate(params);
  const double ratio = 2.0 * params.beta / (3.0 * params.s * params.alpha * params.alpha);
  if (!(ratio > 0.0)) throw DomainError("epsilon requires beta/s > 0");
  return params.mu * std::sqrt(ratio);
}

namespace detail {

inline void check_rational_physical(const PhysicalParams& params) {
  validate(params);
  if (!(params.beta > 0.0 && params.s > 0.0))
    throw DomainError("physical rational family requires beta > 0 and s > 0");
  const double v_lock = rational_velocity(params);
  if (std::abs(params.v - v_lock) > 1e-12 * std::max(1.0, std::abs(v_lock)))
    throw DomainError("rational family requires v = mu^2/(6s) - alpha^2/(4beta) = " +
                      shortest(v_lock) + ", got v = " + shortest(params.v));
}

}  // namespace detail

/// Rational solution in physical variables, xi' = x - v t - xi0:
///
///   u = -alpha/(2 beta) (1 +- e) - 6 alpha mu k0 / (2 beta mu +- k0 sqrt(6 s beta alpha^2) (|mu|/s) xi')
///
/// with e = sqrt(2 beta mu^2 / (3 s alpha^2)). Note the factor |mu|/s on xi':
/// the wave travels in theta = mu xi' / s, and dropping that factor leaves a
/// function that solves the equation only when |mu| = s.
inline std::complex<double> eval_rational_physical(Family family, double x, double t,
                                                   const PhysicalParams& params, double k0) {
  detail::require_family(is_rational(family), family, "eval_rational_physical");
  detail::check_rational_physical(params);
  const double sg = sign_value(riccati_branch(family));
  const double a = params.alpha, b = params.beta, m = params.mu, s = params.s;
  const double e = std::sqrt(2.0 * b * m * m / (3.0 * s * a * a));
  const double constant = -a / (2.0 * b) * (1.0 + sg * e);
  if (k0 == 0.0) return constant;
  const std::complex<double> xi = x - params.v * t - params.xi0;
  const double slope = k0 * std::sqrt(6.0 * s * b * a * a) * std::abs(m) / s;
  const auto den = 2.0 * b * m + sg * slope * xi;
  if (std::abs(den) <= 1e-12 * (std::abs(2.0 * b * m) + std::abs(slope * xi))) {
    const auto x_pole = -2.0 * b * m / (sg * slope) + params.v * t + params.xi0;
    throw PoleError("pole of rational solution at x = " + detail::shortest(x_pole), x_pole);
  }
  return constant - 6.0 * a * m * k0 / den;
}

/// Same solution in the epsilon parameterisation,
///
///   u = -alpha/(2 beta) [1 +- eps + 6 eps k0 / (eps +- k0 mu xi'/s)],
///
/// which agrees with eval_rational_physical for mu > 0 (for mu < 0 the sign
/// of eps flips the branch, so that case is rejected).
inline std::complex<double> eval_rational_physical_epsilon(Family family, double x, double t,
                                                           const PhysicalParams& params,
                                                           double k0) {
  detail::require_family(is_rational(family), family, "eval_rational_physical_epsilon");
  detail::check_rational_physical(params);
  if (!(params.mu > 0.0)) throw DomainError("epsilon form requires mu > 0");
  const double sg = sign_value(riccati_branch(family));
  const double eps = rational_epsilon(params);
  const double pre = -params.alpha / (2.0 * params.beta);
  if (k0 == 0.0) return pre * (1.0 + sg * eps);
  const std::complex<double> theta = (x - params.v * t - params.xi0) * (params.mu / params.s);
  const auto den = eps + sg * k0 * theta;
  if (std::abs(den) <= 1e-12 * (eps + std::abs(k0 * theta))) {
    const auto x_pole = -sg * eps / k0 * (params.s / params.mu) + params.v * t + params.xi0;
    throw PoleError("pole of rational solution at x = " + detail::shortest(x_pole), x_pole);
  }
  return pre * (1.0 + sg * eps + 6.0 * eps * k0 / den);
}

// ---------------------------------------------------------------------------
// Solution descriptor

/// Physical derivatives of u(x, t).
struct PhysicalJet {
  std::complex<double> u{};
  std::complex<double> u_t{};
  std::complex<double> u_x{};
  std::complex<double> u_xx{};
  std::complex<double> u_xxx{};
};

/// A closed-form family bound to its parameters. `jet` returns the profile
/// w = amplitude (U + delta) of the first integral with exact derivatives;
/// amplitude differs from 1 only for perturbed (non-solution) controls.
struct WaveSolution {
  Family family = Family::KdvbRegular;
  ReducedParams reduced{};
  std::optional<PhysicalParams> physical;
  double discriminant = 0.0;  // Delta, compound families
  double k0 = 0.0;            // rational families
  double epsilon = 0.0;       // physical rational families
  Sign constant_branch = Sign::Plus;
  double amplitude = 1.0;

  Jet jet(std::complex<double> theta) const {
    Jet j = shape_jet(theta);
    j.value = amplitude * (j.value + reduced.delta);
    j.d1 *= amplitude;
    j.d2 *= amplitude;
    j.d3 *= amplitude;
    return j;
  }

  std::complex<double> value(std::complex<double> theta) const { return jet(theta).value; }

  /// Decay rate of the kink in theta; zero for the non-hyperbolic families.
  double kink_rate() const {
    if (is_kdvb(family)) return universal_rate;
    if (is_compound_tanh(family)) return discriminant / 6.0;
    return 0.0;
  }

  const PhysicalParams& physical_params() const {
    if (!physical) throw DomainError("solution has no physical parameters attached");
    return *physical;
  }

  PhysicalJet physical_jet(double x, double t) const {
    const auto& ph = physical_params();
    const double S = amplitude_scale(ph);
    const double c = coordinate_scale(ph);
    // The phase lives in reduced.theta0, so the argument excludes xi0.
    const Jet j = jet(to_reduced_coordinate(x, t, ph) + reduced.theta0);
    PhysicalJet out;
    out.u = S * j.value;
    out.u_x = S * c * j.d1;
    out.u_xx = S * c * c * j.d2;
    out.u_xxx = S * c * c * c * j.d3;
    out.u_t = -ph.v * out.u_x;
    return out;
  }

  std::complex<double> value_physical(double x, double t) const {
    const auto& ph = physical_params();
    return amplitude_scale(ph) * value(to_reduced_coordinate(x, t, ph) + reduced.theta0);
  }

  WaveSolution perturbed(double fraction) const {
    WaveSolution copy = *this;
    copy.amplitude *= 1.0 + fraction;
    return copy;
  }

 private:
  // U and its derivatives, before displacement and amplitude.
  Jet shape_jet(std::complex<double> theta) const {
    switch (family) {
      case Family::KdvbRegular:
      case Family::KdvbSingular: {
        const auto T = detail::kink_function(family == Family::KdvbSingular, theta,
                                             reduced.theta0, universal_rate);
        const double c = universal_scale;
        auto j = detail::polynomial_jet({c, 2.0 * c, c}, T, universal_rate);
        const auto one_plus = detail::kink_one_plus(family == Family::KdvbSingular, theta,
                                                    reduced.theta0, universal_rate);
        j.value = c * one_plus * one_plus;
        return j;
      }
      case Family::CompoundTanhPlus:
      case Family::CompoundTanhMinus: {
        const double q = reduced.q;
        const double sigma = family == Family::CompoundTanhPlus ? 1.0 : -1.0;
        const double c = sigma / (3.0 * std::sqrt(2.0 * q));
        const double m = -1.0 / (3.0 * q) + c;
        if (discriminant == 0.0) return Jet{m, 0.0, 0.0, 0.0};
        const double rate = discriminant / 6.0;
        const auto T = detail::kink_function(false, theta, reduced.theta0, rate);
        return detail::polynomial_jet({m, c * discriminant}, T, rate);
      }
      case Family::RationalPlus:
      case Family::RationalMinus: {
        const double q = reduced.q;
        const double A = sign_value(riccati_branch(family)) * std::sqrt(q / 2.0);
        const double m = -(A + 1.0) / (6.0 * A * A);
        if (k0 == 0.0) return Jet{m, 0.0, 0.0, 0.0};
        const auto value = eval_rational(family, theta, q, k0, reduced.theta0);
        // U - m = a / d with a = -k0/A, d = A + k0 (theta - theta0)
        const auto d = A + k0 * (theta - reduced.theta0);
        const double a = -k0 / A;
        const auto d2 = d * d;
        return Jet{value, -a * k0 / d2, 2.0 * a * k0 * k0 / (d2 * d),
                   -6.0 * a * k0 * k0 * k0 / (d2 * d2)};
      }
      case Family::Constant:
        return Jet{constant_solution(constant_branch, reduced.q), 0.0, 0.0, 0.0};
    }
    return {};
  }
};

// ---------------------------------------------------------------------------
// Factories

inline WaveSolution make_kdvb(Family family, double delta = 0.0,
                              std::complex<double> theta0 = {}) {
  detail::require_family(is_kdvb(family), family, "make_kdvb");
  const auto f = factorize_kdvb(delta, family == Family::KdvbRegular ? Sign::Minus : Sign::Plus);
  WaveSolution w;
  w.family = family;
  w.reduced = ReducedParams{f.p, 0.0, delta, f.k, theta0};
  return w;
}

/// Standard-equation family for the given physical parameters; delta is
/// fixed by the velocity through p = 2 delta + 6/25.
inline WaveSolution make_kdvb(Family family, const PhysicalParams& params) {
  validate(params);
  if (params.beta != 0.0)
    throw DomainError("standard KdVB families require beta = 0, got beta = " +
                      detail::shortest(params.beta));
  const auto r = reduce(params);
  auto w = make_kdvb(family, (r.p - 6.0 / 25.0) / 2.0, r.theta0);
  w.reduced.p = r.p;
  w.physical = params;
  return w;
}

inline WaveSolution make_compound(Family family, double p, double q,
                                  std::complex<double> theta0 = {}) {
  detail::require_family(is_compound_tanh(family), family, "make_compound");
  detail::require_positive_q(q, "compound family");
  WaveSolution w;
  w.family = family;
  w.discriminant = compound_discriminant(p, q);
  const auto f = factorize_compound(ReducedParams{p, q, 0.0, 0.0, theta0}, riccati_branch(family));
  w.reduced = ReducedParams{p, q, 0.0, f.k, theta0};
  return w;
}

inline WaveSolution make_compound(Family family, const PhysicalParams& params) {
  validate(params);
  if (params.beta == 0.0) throw DomainError("compound family requires beta ≠ 0");
  const auto r = reduce(params);
  auto w = make_compound(family, r.p, r.q, r.theta0);
  w.physical = params;
  return w;
}

inline WaveSolution make_rational(Family family, double q, double k0,
                                  std::complex<double> theta0 = {}) {
  detail::require_family(is_rational(family), family, "make_rational");
  const double p = rational_p(q);
  const auto f = factorize_compound(ReducedParams{p, q, 0.0, 0.0, theta0}, riccati_branch(family));
  WaveSolution w;
  w.family = family;
  w.reduced = ReducedParams{p, q, 0.0, f.k, theta0};
  w.k0 = k0;
  w.epsilon = std::sqrt(q / 2.0);
  return w;
}

/// Physical rational family; params.v must be the Delta = 0 velocity.
inline WaveSolution make_rational(Family family, const PhysicalParams& params, double k0) {
  detail::check_rational_physical(params);
  const auto r = reduce(params);
  auto w = make_rational(family, r.q, k0, r.theta0);
  w.physical = params;
  w.epsilon = rational_epsilon(params);
  return w;
}

inline WaveSolution make_constant(Sign branch, double q) {
  const double p = rational_p(q);
  const auto f = factorize_compound(ReducedParams{p, q, 0.0, 0.0, {}}, branch);
  WaveSolution w;
  w.family = Family::Constant;
  w.constant_branch = branch;
  w.reduced = ReducedParams{p, q, 0.0, f.k, {}};
  return w;
}

/// Constant solution mapped to physical variables (any velocity is a
/// travelling speed of a constant).
inline WaveSolution make_constant(Sign branch, const PhysicalParams& params) {
  validate(params);
  const auto r = reduce(params);
  auto w = make_constant(branch, r.q);
  w.physical = params;
  return w;
}

// ---------------------------------------------------------------------------
// Sampling

/// nullopt marks a pole.
using Sampled = std::optional<std::complex<double>>;

inline std::vector<Sampled> sample_reduced(const WaveSolution& solution,
                                           std::span<const double> theta) {
  std::vector<Sampled> out;
  out.reserve(theta.size());
  for (const double th : theta) {
    try {
      out.emplace_back(solution.value(th));
    } catch (const PoleError&) {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

inline std::vector<Sampled> sample_physical(const WaveSolution& solution,
                                            std::span<const double> x, double t) {
  std::vector<Sampled> out;
  out.reserve(x.size());
  for (const double xv : x) {
    try {
      out.emplace_back(solution.value_physical(xv, t));
    } catch (const PoleError&) {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Imaginary phase sweeps, theta0 = i a pi

struct PhaseSweep {
  double a_min = 0.0;
  double a_max = 0.0;
  std::size_t steps = 0;
};

inline void validate(const PhaseSweep& sweep) {
  if (sweep.steps < 2) throw DomainError("phase sweep needs at least 2 steps");
  if (!(sweep.a_min < sweep.a_max)) throw DomainError("phase sweep needs a_min < a_max");
}

/// Row-major (a, theta) grid of sampled values.
struct SweepSurface {
  std::vector<double> a;
  std::vector<double> theta;
  std::vector<Sampled> values;

  const Sampled& at(std::size_t ia, std::size_t itheta) const {
    return values[ia * theta.size() + itheta];
  }
};

inline SweepSurface phase_sweep_surface(Family family, const PhaseSweep& sweep,
                                        std::span<const double> theta_grid) {
  detail::require_family(is_kdvb(family), family, "phase_sweep_surface");
  validate(sweep);
  if (theta_grid.empty()) throw DomainError("phase sweep needs a non-empty theta grid");
  SweepSurface out;
  out.theta.assign(theta_grid.begin(), theta_grid.end());
  out.a.reserve(sweep.steps);
  const double n = static_cast<double>(sweep.steps - 1);
  for (std::size_t i = 0; i < sweep.steps; ++i)
    out.a.push_back(i + 1 == sweep.steps
                        ? sweep.a_max
                        : sweep.a_min + (sweep.a_max - sweep.a_min) * static_cast<double>(i) / n);
  out.values.reserve(out.a.size() * out.theta.size());
  for (const double a : out.a) {
    const std::complex<double> theta0{0.0, a * std::numbers::pi};
    for (const double th : out.theta) {
      try {
        out.values.emplace_back(eval_universal(family, th, theta0));
      } catch (const PoleError&) {
        out.values.emplace_back(std::nullopt);
      }
    }
  }
  return out;
}

}  // namespace kdvb
