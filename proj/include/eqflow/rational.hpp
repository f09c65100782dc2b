#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace eqflow {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact value of a finite binary double.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("non-finite value has no rational form");
  }
  if (x == 0.0) {
    return Rational(0);
  }
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  // mantissa in [0.5, 1): scale to a 53-bit integer
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  BigInt numerator = scaled;
  if (exponent >= 0) {
    numerator <<= exponent;
    return Rational(numerator);
  }
  BigInt denominator = 1;
  denominator <<= -exponent;
  return Rational(numerator, denominator);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

// Decimal digits only; leading zeros are dropped so the text is never read
// as an octal literal.
inline BigInt decimal_bigint(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return BigInt{std::string(digits)};
}

inline BigInt pow10(long n) {
  BigInt p = 1;
  for (long i = 0; i < n; ++i) p *= 10;
  return p;
}

}  // namespace detail

/// Parses "p", "p/q" or a decimal literal such as "-1.25e-3" into an exact
/// rational. Throws std::invalid_argument on anything else.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  const auto fail = [&]() -> Rational {
    throw std::invalid_argument("not a rational number: \"" + std::string(text) + "\"");
  };

  Rational value;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = s.substr(0, slash);
    const auto den = s.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den)) return fail();
    const BigInt d = detail::decimal_bigint(den);
    if (d == 0) return fail();
    value = Rational(detail::decimal_bigint(num), d);
  } else {
    std::string_view mantissa = s;
    long exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      mantissa = s.substr(0, e);
      auto exp_text = s.substr(e + 1);
      if (exp_text.empty()) return fail();
      const char* first = exp_text.data();
      if (*first == '+') ++first;
      const char* last = exp_text.data() + exp_text.size();
      auto [ptr, ec] = std::from_chars(first, last, exponent);
      if (ec != std::errc() || ptr != last || std::labs(exponent) > 4000) return fail();
    }
    std::string digits;
    long fraction_digits = 0;
    if (const auto dot = mantissa.find('.'); dot != std::string_view::npos) {
      const auto whole = mantissa.substr(0, dot);
      const auto frac = mantissa.substr(dot + 1);
      if (whole.empty() && frac.empty()) return fail();
      if (!whole.empty() && !detail::all_digits(whole)) return fail();
      if (!frac.empty() && !detail::all_digits(frac)) return fail();
      digits = std::string(whole) + std::string(frac);
      fraction_digits = static_cast<long>(frac.size());
    } else {
      if (!detail::all_digits(mantissa)) return fail();
      digits = std::string(mantissa);
    }
    const long scale = exponent - fraction_digits;
    const BigInt n = detail::decimal_bigint(digits);
    if (scale >= 0) {
      value = Rational(n * detail::pow10(scale));
    } else {
      value = Rational(n, detail::pow10(-scale));
    }
  }
  return negative ? Rational(-value) : value;
}

/// Exact text form: "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(r) == 1) {
    return numerator(r).str();
  }
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Decimal with 17 significant digits, the canonical text for floating values.
inline std::string format_decimal(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Exact rational of the shortest decimal that round-trips to `x`; turns a
/// JSON literal such as 0.1 back into 1/10 rather than its binary neighbour.
inline Rational rational_from_shortest_decimal(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) {
    throw std::invalid_argument("cannot format number");
  }
  return parse_rational(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

}  // namespace eqflow
