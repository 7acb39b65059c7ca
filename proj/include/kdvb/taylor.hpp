#pragma once

#include <array>
#include <cstddef>

namespace kdvb {

/// Truncated Taylor series c[0] + c[1] h + ... + c[N-1] h^(N-1).
/// Arithmetic propagates derivatives through products by the Leibniz rule.
template <class T, std::size_t N>
struct Taylor {
  std::array<T, N> c{};

  static Taylor constant(T value) {
    Taylor out;
    out.c[0] = value;
    return out;
  }

  /// Series of f around a point from its derivatives f, f', f'', ...
  static Taylor from_derivatives(const std::array<T, N>& d) {
    Taylor out;
    double factorial = 1.0;
    for (std::size_t i = 0; i < N; ++i) {
      if (i > 0) factorial *= static_cast<double>(i);
      out.c[i] = d[i] / factorial;
    }
    return out;
  }

  T derivative(std::size_t order) const {
    double factorial = 1.0;
    for (std::size_t i = 2; i <= order; ++i) factorial *= static_cast<double>(i);
    return c[order] * factorial;
  }

  friend Taylor operator+(Taylor a, const Taylor& b) {
    for (std::size_t i = 0; i < N; ++i) a.c[i] += b.c[i];
    return a;
  }
  friend Taylor operator-(Taylor a, const Taylor& b) {
    for (std::size_t i = 0; i < N; ++i) a.c[i] -= b.c[i];
    return a;
  }
  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor out;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; i + j < N; ++j) out.c[i + j] += a.c[i] * b.c[j];
    return out;
  }
  template <class S>
  friend Taylor operator*(S scale, Taylor a) {
    for (auto& x : a.c) x *= scale;
    return a;
  }
};

}  // namespace kdvb
