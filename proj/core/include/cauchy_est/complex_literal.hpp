#pragma once

#include <string>
#include <string_view>

#include "cauchy_est/geometry.hpp"

namespace cauchy_est {

/// Parses "a+bi" / "-a.b-c.di" literals: an optional leading minus, a decimal
/// real part, a mandatory sign, a decimal imaginary part and a trailing 'i'.
/// No whitespace or exponents. Throws std::invalid_argument when malformed.
Complex parse_complex(std::string_view text);

/// Formats z as "a+bi" with 17 significant digits (may use exponents).
std::string format_complex(Complex z);

}  // namespace cauchy_est
