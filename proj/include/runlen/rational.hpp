#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace runlen {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// base^n for non-negative integer exponents.
Rational rational_pow(const Rational& base, unsigned n);

/// Exact conversion: every finite double is a dyadic rational.
Rational rational_from_double(double x);

/// Renders "num/den", or just "num" when den == 1.
std::string rational_to_string(const Rational& r);

/// Accepts "a/b" or "a" with optional sign; throws InvalidArgumentError otherwise.
Rational rational_from_string(std::string_view text);

BigInt factorial(unsigned n);

} // namespace runlen
