#ifndef CI_RATIONAL_HPP
#define CI_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace ci {

// All counts and probabilities are exact. cpp_rational keeps values in
// lowest terms with a positive denominator, and comparisons are done by
// cross-multiplication internally, never by division.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& r) { return numerator(r); }
inline BigInt den(const Rational& r) { return denominator(r); }

/// Parses "a/b" or "a" with arbitrary-precision parts. Rejects b <= 0.
Rational parse_rational(const std::string& text);

/// Renders as "a/b", or just "a" when the denominator is 1.
std::string format_rational(const Rational& r);

}  // namespace ci

#endif
