#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace codelta {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Rational rat(long long num, long long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rational(Integer(num), Integer(den));
}

// Accepts "p", "p/q" and plain decimals like "-0.125".
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto bad = [&] { return std::invalid_argument("bad rational literal: " + text); };
  std::size_t pos = 0;
  bool neg = false;
  if (text[pos] == '+' || text[pos] == '-') {
    neg = text[pos] == '-';
    ++pos;
  }
  Integer num = 0;
  std::size_t digits = 0;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    num = num * 10 + (text[pos] - '0');
    ++pos;
    ++digits;
  }
  if (digits == 0) throw bad();
  Integer den = 1;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    Integer d = 0;
    std::size_t ddigits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      d = d * 10 + (text[pos] - '0');
      ++pos;
      ++ddigits;
    }
    if (ddigits == 0 || d == 0) throw bad();
    den = d;
  } else if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      num = num * 10 + (text[pos] - '0');
      den *= 10;
      ++pos;
    }
  }
  if (pos != text.size()) throw bad();
  Rational r(num, den);
  return neg ? Rational(-r) : r;
}

inline std::string to_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Exact: doubles are dyadic rationals.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
  return Rational(x);
}

inline Rational rat_pow(const Rational& base, unsigned exp) {
  Rational acc = 1;
  Rational b = base;
  while (exp) {
    if (exp & 1u) acc *= b;
    b *= b;
    exp >>= 1u;
  }
  return acc;
}

inline Rational rat_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline Integer factorial(unsigned n) {
  Integer acc = 1;
  for (unsigned i = 2; i <= n; ++i) acc *= i;
  return acc;
}

}  // namespace codelta
