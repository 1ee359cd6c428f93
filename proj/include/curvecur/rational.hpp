#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace curvecur {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "p/q", or "p" when q == 1.
std::string to_string(const Rational& r);
// Accepts "p", "p/q", with optional leading sign. Throws ParseError.
Rational parse_rational(std::string_view s);
double to_double(const Rational& r);

Integer lcm_of_denominators(const Rational* first, const Rational* last);

// %.12g, reparsed; the float format used in every JSON payload.
double round12(double x);

}  // namespace curvecur
