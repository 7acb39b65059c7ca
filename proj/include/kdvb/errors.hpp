#pragma once

#include <charconv>
#include <complex>
#include <stdexcept>
#include <string>

namespace kdvb {

/// Thrown when parameters fall outside the domain of a formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when a closed form is evaluated on one of its singularities.
class PoleError : public DomainError {
 public:
  PoleError(const std::string& what, std::complex<double> location)
      : DomainError(what), location_(location) {}

  /// Location of the pole in the variable the evaluator was called with.
  std::complex<double> location() const noexcept { return location_; }

 private:
  std::complex<double> location_;
};

namespace detail {

// Shortest round-trip text, used in diagnostics only.
inline std::string shortest(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return ec == std::errc{} ? std::string(buf, end) : std::string("?");
}

inline std::string shortest(std::complex<double> value) {
  if (value.imag() == 0.0) return shortest(value.real());
  return shortest(value.real()) + (value.imag() < 0 ? "-" : "+") +
         shortest(std::abs(value.imag())) + "i";
}

}  // namespace detail
}  // namespace kdvb
