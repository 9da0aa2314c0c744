#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rsdlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Float50 = boost::multiprecision::cpp_bin_float_50;

/// Thrown when a numeric literal cannot be parsed exactly.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Function: parse_rational
//
// Accepts "[-]digits", "[-]digits.digits" and "[-]num/den". The result is
// exact; no floating-point value is ever formed.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&](const char* why) -> Rational {
    throw ParseError("cannot parse '" + std::string(text) + "' as an exact number: " + why);
  };
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) return fail("empty literal");

  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto all_digits = [](std::string_view d) {
    if (d.empty()) return false;
    for (char c : d)
      if (c < '0' || c > '9') return false;
    return true;
  };

  // cpp_int reads a leading 0 as octal, so feed it canonical decimal digits
  auto decimal = [](std::string_view d) {
    while (d.size() > 1 && d.front() == '0') d.remove_prefix(1);
    return BigInt(std::string(d.empty() ? "0" : d));
  };

  Rational out;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return fail("malformed fraction");
    BigInt d = decimal(den);
    if (d == 0) return fail("zero denominator");
    out = Rational(decimal(num), d);
  } else {
    auto dot = s.find('.');
    auto whole = s.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (whole.empty() && frac.empty()) return fail("no digits");
    if (!whole.empty() && !all_digits(whole)) return fail("malformed integer part");
    if (dot != std::string_view::npos && !frac.empty() && !all_digits(frac))
      return fail("malformed fractional part");
    if (whole.empty() && dot != std::string_view::npos && frac.empty()) return fail("no digits");
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    out = Rational(decimal(std::string(whole) + std::string(frac)), scale);
  }
  return negative ? Rational(-out) : out;
}

// Exact value of a finite double (every finite double is a dyadic rational).
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite double has no rational value");
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent, |mantissa| in [0.5,1)
  auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  BigInt num = scaled;
  if (exponent >= 0) {
    num <<= exponent;
    return Rational(num);
  }
  BigInt den = 1;
  den <<= -exponent;
  return Rational(num, den);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Float50 to_float50(const Rational& r) {
  return Float50(numerator(r)) / Float50(denominator(r));
}

/// "p/q", or "p" when the denominator is one.
inline std::string to_fraction_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Decimal with 17 significant digits (round-trips a double).
inline std::string to_decimal_string(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

/// Exact quantity shown with 17 significant digits, trailing zeros kept.
inline std::string to_decimal_string(const Rational& r) {
  std::ostringstream os;
  os << std::showpoint << std::setprecision(17) << to_float50(r);
  return os.str();
}

inline BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Number of bits needed to write m >= 0; zero has bit length 0.
inline unsigned bit_length(const BigInt& m) {
  if (m <= 0) return 0;
  return static_cast<unsigned>(boost::multiprecision::msb(m)) + 1;
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::lcm(a, b);
}

}  // namespace rsdlab
