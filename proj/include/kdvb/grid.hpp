#pragma once

#include <cstddef>
#include <vector>

namespace kdvb {

/// n evenly spaced points on [lo, hi], endpoints exact.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  if (n == 1) {
    out.push_back(lo);
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 == n) {
      out.push_back(hi);
    } else {
      out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
  }
  return out;
}

}  // namespace kdvb
