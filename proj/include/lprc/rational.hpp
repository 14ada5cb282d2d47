#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace lprc {

/// Exact rational scalar. Expression templates are disabled so `auto`
/// bindings always hold values.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact conversion of a finite double (every binary fraction is rational).
inline Rational from_double(double x) { return Rational(x); }

Rational make_rational(long long num, long long den);

/// Parses "3", "-0.125", "7/20". Throws ParseError on malformed text.
Rational parse_rational(std::string_view text);

/// Rounds `x` to the nearest multiple of 1/denominator.
Rational round_to_denominator(double x, long long denominator);

/// Finite decimal text if the denominator is 2^a 5^b, otherwise "num/den".
std::string format_rational(const Rational& r);

/// True iff `r` has a terminating decimal expansion.
bool has_finite_decimal(const Rational& r);

}  // namespace lprc
