#include "lprc/rational.hpp"

#include <cctype>
#include <cmath>

#include "lprc/errors.hpp"

namespace lprc {

Rational make_rational(long long num, long long den) {
  if (den == 0) throw PreconditionError("rational with zero denominator");
  return Rational(Integer(num), Integer(den));
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// GMP reads a leading zero as an octal prefix.
Integer decimal_integer(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return Integer{std::string(digits)};
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw ParseError("", "malformed rational '" + std::string(text) + "'");
    Integer d = decimal_integer(den);
    if (d == 0) throw ParseError("", "zero denominator in '" + std::string(text) + "'");
    value = Rational(decimal_integer(num), d);
  } else {
    auto dot = s.find('.');
    auto whole = s.substr(0, dot);
    auto frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)) ||
        (dot != std::string_view::npos && frac.empty()))
      throw ParseError("", "malformed decimal '" + std::string(text) + "'");
    Integer digits = decimal_integer(std::string(whole) + std::string(frac));
    Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(frac.size()));
    value = Rational(digits, scale);
  }
  return negative ? Rational(-value) : value;
}

Rational round_to_denominator(double x, long long denominator) {
  return make_rational(std::llround(x * static_cast<double>(denominator)), denominator);
}

bool has_finite_decimal(const Rational& r) {
  Integer d = boost::multiprecision::denominator(r);
  while (d % 2 == 0) d /= 2;
  while (d % 5 == 0) d /= 5;
  return d == 1;
}

std::string format_rational(const Rational& r) {
  Integer num = boost::multiprecision::numerator(r);
  Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  if (!has_finite_decimal(r)) return num.str() + "/" + den.str();
  // Scale to 10^p / 10^p where p is the larger power of 2 or 5 in den.
  unsigned twos = 0, fives = 0;
  Integer d = den;
  while (d % 2 == 0) d /= 2, ++twos;
  while (d % 5 == 0) d /= 5, ++fives;
  unsigned places = std::max(twos, fives);
  Integer scaled = num * boost::multiprecision::pow(Integer(10), places) / den;
  bool negative = scaled < 0;
  std::string digits = (negative ? Integer(-scaled) : scaled).str();
  if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
  digits.insert(digits.size() - places, ".");
  return negative ? "-" + digits : digits;
}

}  // namespace lprc
