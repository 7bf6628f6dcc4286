#pragma once

#include <stdexcept>
#include <string>

namespace cauchy_est {

/// A sample sits on the branch point of a logarithmic generator, or a pullback
/// from the circle hits the pole of the inverse Moebius map.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An estimate left the open upper half-plane or a generator mean vanished.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested configuration is valid in principle but not supported
/// (e.g. the three-point median for odd n < 5).
class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cauchy_est
