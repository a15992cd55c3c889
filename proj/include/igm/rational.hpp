#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "igm/errors.hpp"

namespace igm {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational rat(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

inline bool is_integer(const Rational &r) {
  return boost::multiprecision::denominator(r) == 1;
}

inline BigInt floor_of(const Rational &r) {
  BigInt n = boost::multiprecision::numerator(r);
  BigInt d = boost::multiprecision::denominator(r);
  BigInt q = n / d;
  if (n < 0 && q * d != n)
    q -= 1;
  return q;
}

/// Fractional part in [0,1).
inline Rational frac(const Rational &r) { return r - Rational(floor_of(r)); }

inline std::int64_t to_int64(const Rational &r) {
  if (!is_integer(r))
    throw InternalError("expected an integer, got a fraction");
  return boost::multiprecision::numerator(r).convert_to<std::int64_t>();
}

/// "p/q" with q always present (the wire format pins "lo/1").
inline std::string to_string(const Rational &r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

/// Accepts "p/q", "p" and "-p/q".
inline Rational parse_rational(std::string_view text) {
  try {
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
      return Rational(BigInt(std::string(text)));
    BigInt num(std::string(text.substr(0, slash)));
    BigInt den(std::string(text.substr(slash + 1)));
    if (den == 0)
      throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  } catch (const ParseError &) {
    throw;
  } catch (const std::exception &) {
    throw ParseError("not a rational: '" + std::string(text) + "'");
  }
}

inline Rational pow(const Rational &base, std::uint64_t e) {
  using boost::multiprecision::numerator;
  using boost::multiprecision::denominator;
  BigInt num = boost::multiprecision::pow(numerator(base), unsigned(e));
  BigInt den = boost::multiprecision::pow(denominator(base), unsigned(e));
  return Rational(num, den);
}

} // namespace igm
