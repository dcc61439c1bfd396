#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <optional>
#include <utility>
#include <string>
#include <string_view>

#include "cohodyn/error.hpp"

namespace cohodyn {

using Integer = boost::multiprecision::cpp_int;
// cpp_rational keeps numerator/denominator in lowest terms with a positive
// denominator after every operation.
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }
inline Integer abs(const Integer& z) { return z < 0 ? Integer(-z) : z; }

inline int sign(const Rational& q) { return q < 0 ? -1 : (q > 0 ? 1 : 0); }
inline int sign(const Integer& z) { return z < 0 ? -1 : (z > 0 ? 1 : 0); }

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(a, b);
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs(Integer(a / gcd(a, b) * b));
}

/// Canonical text: "n" for integers, "n/d" otherwise.
inline std::string to_string(const Rational& q) { return q.str(); }
inline std::string to_string(const Integer& z) { return z.str(); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Parses "n", "n/d", or a plain decimal such as "-0.125".
inline Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParseError("empty rational literal");

  auto parse_int = [&](const std::string& part) -> Integer {
    std::size_t i = 0;
    bool neg = false;
    if (i < part.size() && (part[i] == '+' || part[i] == '-')) neg = part[i++] == '-';
    if (i == part.size()) throw ParseError("malformed rational literal '" + s + "'");
    Integer v = 0;
    for (; i < part.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(part[i])))
        throw ParseError("malformed rational literal '" + s + "'");
      v = v * 10 + (part[i] - '0');
    }
    return neg ? Integer(-v) : v;
  };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    Integer num = parse_int(s.substr(0, slash));
    Integer den = parse_int(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    return Rational(num, den);
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    if (frac.empty()) frac = "0";
    Integer w = parse_int(whole);
    Integer f = parse_int(frac);
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Rational out = Rational(abs(w)) + Rational(f, scale);
    return neg ? Rational(-out) : out;
  }
  return Rational(parse_int(s));
}

inline Integer floor(const Rational& q) {
  Integer n = numerator(q), d = denominator(q);
  Integer fl = n / d;
  if (n < 0 && fl * d != n) fl -= 1;
  return fl;
}

inline Integer ceil(const Rational& q) { return -floor(Rational(-q)); }

inline Rational pow(const Rational& base, unsigned exp) {
  Rational result = 1;
  Rational b = base;
  while (exp) {
    if (exp & 1u) result *= b;
    b *= b;
    exp >>= 1u;
  }
  return result;
}

/// The rational with the smallest denominator in the closed interval [lo, hi].
inline Rational simplest_between(Rational lo, Rational hi) {
  if (lo > hi) std::swap(lo, hi);
  if (lo <= 0 && hi >= 0) return 0;
  if (hi < 0) return -simplest_between(Rational(-hi), Rational(-lo));
  Integer fl = floor(lo);
  if (Rational(fl) == lo) return lo;
  if (Rational(fl + 1) <= hi) return Rational(fl + 1);
  // lo and hi share the integer part; recurse on the reciprocals of the
  // fractional parts.
  Rational rest = simplest_between(1 / (hi - fl), 1 / (lo - fl));
  return Rational(fl) + 1 / rest;
}

/// Rational bounds [lo, hi] on the real n-th root of x >= 0 with hi - lo <= width.
inline std::pair<Rational, Rational> nth_root_bounds(const Rational& x, unsigned n,
                                                     const Rational& width) {
  if (x < 0) throw DegenerateInputError("nth_root_bounds: negative radicand");
  if (n == 0) throw DegenerateInputError("nth_root_bounds: zero index");
  if (x == 0 || x == 1 || n == 1) return {x, x};
  // Exact root when numerator and denominator are perfect n-th powers.
  auto exact_root = [n](const Integer& z) -> std::optional<Integer> {
    Integer lo = 0, hi = 1;
    while (boost::multiprecision::pow(hi, n) <= z) hi *= 2;
    while (hi - lo > 1) {
      Integer mid = (lo + hi) / 2;
      if (boost::multiprecision::pow(mid, n) <= z) lo = mid; else hi = mid;
    }
    if (boost::multiprecision::pow(lo, n) == z) return lo;
    return std::nullopt;
  };
  auto rn = exact_root(numerator(x));
  auto rd = exact_root(denominator(x));
  if (rn && rd) {
    Rational r(*rn, *rd);
    return {r, r};
  }
  Rational lo = 0, hi = std::max(Rational(1), x);
  while (hi - lo > width) {
    Rational mid = (lo + hi) / 2;
    // Keep the mid denominators short.
    Rational snapped = simplest_between(mid - (hi - lo) / 8, mid + (hi - lo) / 8);
    if (pow(snapped, n) <= x) lo = snapped; else hi = snapped;
  }
  return {lo, hi};
}

}  // namespace cohodyn
