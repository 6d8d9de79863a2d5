#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace shiftlab {

// Exact arbitrary-precision rational. All squared weights, moments and
// measure masses live in this type.
using Rational = mpq_class;

// Parses "p/q", "p", or a finite decimal such as "0.25" / "-1.5e-3".
// Throws Error(ParseError) on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

// Canonical text form: "p/q" in lowest terms, or "p" for integers.
std::string to_string(const Rational& value);

// Nearest double; exact for dyadic values within range.
inline double to_double(const Rational& value) { return value.get_d(); }

Rational pow(const Rational& base, unsigned exponent);

// Exact square root when `value` is the square of a rational.
std::optional<Rational> exact_sqrt(const Rational& value);

inline bool is_zero(const Rational& value) { return sgn(value) == 0; }
inline bool is_positive(const Rational& value) { return sgn(value) > 0; }

}  // namespace shiftlab
