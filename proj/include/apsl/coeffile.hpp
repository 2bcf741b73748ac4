#ifndef APSL_COEFFILE_HPP
#define APSL_COEFFILE_HPP

// Plain-text coefficient files:
//
//   # Figure-1 style triple
//   [base]
//   omega = 1
//   [r]            # r = 1/p
//   const = 2
//   term = 0 1 @ 1 # A B @ k1 ... kd  ->  A cos(w x) + B sin(w x), w = k . omega
//   [q]
//   term = 2 0 @ 1
//   [w]
//   const = 2
//   term = -1 0 @ 1
//
// A missing function section is the zero polynomial. Hull positivity of r and
// w is certified on load.

#include "apsl/apfun.hpp"

#include <string>
#include <string_view>

namespace apsl {

struct CoefficientFile {
  CoefficientTriple triple;

  const FrequencyBase& base() const { return triple.base(); }
};

// Throws ParseError (with line), DimensionError, PositivityError.
CoefficientFile parse_coefficients(std::string_view text);

std::string render_coefficients(const CoefficientFile& file);
std::string render_coefficients(const CoefficientTriple& v);

CoefficientFile load_coefficients(const std::string& path);

}  // namespace apsl

#endif  // APSL_COEFFILE_HPP
