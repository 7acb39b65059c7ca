#pragma once

// Factorization of  U'' - U' + F(U) = 0  as  [D - f2(U)][D - f1(U)] U = 0.
// Matching terms requires
//
//     f1(U) f2(U)           = F(U) / U                        (product)
//     f2(U) + d(f1(U) U)/dU = 1                               (derivative)
//
// after which any solution of U' = f1(U) U solves the second-order equation.
// Two ansaetze are supported: f1 linear in sqrt(U) for the standard equation
// (a Bernoulli flow) and f1 U quadratic in U for the compound equation
// (a Riccati flow).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string_view>

#include "kdvb/errors.hpp"
#include "kdvb/params.hpp"

namespace kdvb {

enum class Sign { Plus, Minus };

constexpr double sign_value(Sign sign) { return sign == Sign::Plus ? 1.0 : -1.0; }
constexpr Sign opposite(Sign sign) { return sign == Sign::Plus ? Sign::Minus : Sign::Plus; }
constexpr std::string_view sign_name(Sign sign) { return sign == Sign::Plus ? "plus" : "minus"; }

/// Standard KdVB after the displacement w = U + delta:
///   f1(U) = A sqrt(U) + B,  f2(U) = (1 - B) - (3/2) A sqrt(U),
///   F(U)  = (p - 2 delta) U - U^2.
struct KdvbFactorization {
  double A = 0.0;
  double B = 0.0;
  double delta = 0.0;
  double p = 0.0;
  double k = 0.0;
  double B2 = 0.0;  // constant term of f2, fixed at 1 - B by the derivative condition
  Sign sign = Sign::Minus;

  std::complex<double> f1(std::complex<double> U) const { return A * std::sqrt(U) + B; }
  std::complex<double> f2(std::complex<double> U) const { return B2 - 1.5 * A * std::sqrt(U); }
  std::complex<double> d_f1U(std::complex<double> U) const { return 1.5 * A * std::sqrt(U) + B; }
  std::complex<double> F(std::complex<double> U) const { return (p - 2.0 * delta) * U - U * U; }
};

/// Compound KdVB (w = U):
///   f1(U) U = A U^2 + B U + C,  f2(U) = -2 A U + (1 - B),
///   F(U)    = p U - U^2 - q U^3 - k.
struct CompoundFactorization {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double p = 0.0;
  double q = 0.0;
  double k = 0.0;
  double B2 = 0.0;  // constant term of f2, 1 - B
  Sign sign = Sign::Plus;

  std::complex<double> f1(std::complex<double> U) const { return A * U + B + C / U; }
  std::complex<double> f2(std::complex<double> U) const { return -2.0 * A * U + B2; }
  std::complex<double> d_f1U(std::complex<double> U) const { return 2.0 * A * U + B; }
  std::complex<double> F(std::complex<double> U) const {
    return p * U - U * U - q * U * U * U - k;
  }
  /// Right-hand side of the first-order flow U' = A U^2 + B U + C.
  std::complex<double> flow(std::complex<double> U) const { return (A * U + B) * U + C; }
};

/// The Bernoulli branch is free: delta fixes p = 2 delta + 6/25 and
/// k = p delta - delta^2, and sign picks A = +-sqrt(2/3).
inline KdvbFactorization factorize_kdvb(double delta, Sign sign) {
  KdvbFactorization f;
  f.A = sign_value(sign) * std::sqrt(2.0 / 3.0);
  f.B = 2.0 / 5.0;
  f.delta = delta;
  f.p = 2.0 * delta + 6.0 / 25.0;
  f.k = f.p * delta - delta * delta;
  f.B2 = 1.0 - f.B;
  f.sign = sign;
  return f;
}

/// A = sign * sqrt(q/2). Only q > 0 is supported; q < 0 would make A
/// imaginary and has no corresponding solution family.
inline CompoundFactorization factorize_compound(const ReducedParams& reduced, Sign sign) {
  const double q = reduced.q;
  if (q == 0.0) throw DomainError("compound factorization requires q ≠ 0");
  if (q < 0.0)
    throw DomainError("compound factorization with q < 0 (imaginary A) is not supported, q = " +
                      detail::shortest(q));
  CompoundFactorization f;
  const double A = sign_value(sign) * std::sqrt(q / 2.0);
  const double p = reduced.p;
  f.A = A;
  f.B = (A + 1.0) / (3.0 * A);
  f.C = ((2.0 - 9.0 * p) / A + 1.0 / (A * A) - 1.0 / (A * A * A)) / 18.0;
  f.p = p;
  f.q = q;
  f.k = f.C * (1.0 - 2.0 * A) / (3.0 * A);
  f.B2 = 1.0 - f.B;
  f.sign = sign;
  return f;
}

/// Factor pair given by arbitrary callables, for checking hand-built or
/// deliberately broken factorizations.
struct CustomAnsatz {
  std::function<std::complex<double>(std::complex<double>)> f1;
  std::function<std::complex<double>(std::complex<double>)> f2;
  std::function<std::complex<double>(std::complex<double>)> d_f1U;
  std::function<std::complex<double>(std::complex<double>)> F;
};

struct FactorizationResiduals {
  double product = 0.0;     // max |f1 f2 - F/U|
  double derivative = 0.0;  // max |f2 + d(f1 U)/dU - 1|
};

/// Maximum violation of the two matching conditions over the samples.
/// F/U is continued analytically to complex U; U = 0 is rejected.
template <class Ansatz>
FactorizationResiduals verify_factorization(const Ansatz& ansatz,
                                            std::span<const std::complex<double>> samples) {
  FactorizationResiduals res;
  for (const auto U : samples) {
    if (U == 0.0)
      throw DomainError("factorization check needs U != 0 (F(U)/U is undefined there)");
    const auto product = ansatz.f1(U) * ansatz.f2(U) - ansatz.F(U) / U;
    const auto derivative = ansatz.f2(U) + ansatz.d_f1U(U) - 1.0;
    res.product = std::max(res.product, std::abs(product));
    res.derivative = std::max(res.derivative, std::abs(derivative));
  }
  return res;
}

/// Left side of U'' - U' + (p - 2 delta) U - U^2 = 0.
constexpr double displaced_kdvb_residual(double U, double dU, double d2U, double p,
                                         double delta) {
  return d2U - dU + (p - 2.0 * delta) * U - U * U;
}

}  // namespace kdvb
