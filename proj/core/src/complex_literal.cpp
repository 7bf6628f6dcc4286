#include "cauchy_est/complex_literal.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cauchy_est {

namespace {

// Consumes digits[.digits] from `text` starting at `pos`.
bool scan_decimal(std::string_view text, std::size_t& pos) {
  const std::size_t start = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == start) return false;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t frac = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == frac) return false;
  }
  return true;
}

double to_double(std::string_view token) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) {
    throw std::invalid_argument("malformed number in complex literal");
  }
  return value;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  const auto fail = [&]() -> Complex {
    throw std::invalid_argument("malformed complex literal '" + std::string(text) +
                                "' (expected a+bi, e.g. 0+1i or -1.5-0.25i)");
  };
  std::size_t pos = 0;
  if (pos < text.size() && text[pos] == '-') ++pos;
  if (!scan_decimal(text, pos)) return fail();
  const std::size_t real_end = pos;
  if (pos >= text.size() || (text[pos] != '+' && text[pos] != '-')) return fail();
  const std::size_t imag_start = pos;
  ++pos;
  if (!scan_decimal(text, pos)) return fail();
  if (pos + 1 != text.size() || text[pos] != 'i') return fail();

  const double re = to_double(text.substr(0, real_end));
  double im = to_double(text.substr(imag_start + 1, pos - imag_start - 1));
  if (text[imag_start] == '-') im = -im;
  return {re, im};
}

std::string format_complex(Complex z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

}  // namespace cauchy_est
