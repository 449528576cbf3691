#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace hlab {

// Arbitrary-precision integers and rationals. Certificate expansion multiplies
// long chains of small fractions, so coefficients must never overflow.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

int sign(const Rational& q);
double to_double(const Rational& q);

/// Parses "p" or "p/q" with an optional leading sign.
Rational parse_rational(const std::string& text);

/// Renders "p" or "p/q" with a positive denominator.
std::string to_string(const Rational& q);

}  // namespace hlab
