#pragma once
// Exact rational scalars. Arbitrary precision: elimination over coefficient
// fields must stay exact, so no fixed-width fallback exists.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <utility>

namespace liejet {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer rat_num(const Rational& r) {
  return boost::multiprecision::numerator(r);
}

inline Integer rat_den(const Rational& r) {
  return boost::multiprecision::denominator(r);
}

inline bool is_integral(const Rational& r) { return rat_den(r) == 1; }

inline std::string rat_str(const Rational& r) { return r.str(); }

// Splits |r| = s^2 * f with f squarefree up to a trial-division bound; the
// bound is fine for the magnitudes this library manipulates. Returns (s, f)
// with sign carried on f.
inline std::pair<Rational, Rational> square_part(const Rational& r) {
  if (r == 0) return {Rational(0), Rational(0)};
  auto split_int = [](Integer v) -> std::pair<Integer, Integer> {
    Integer s = 1;
    for (Integer p = 2; p <= 997 && p * p <= v; ++p) {
      while (v % (p * p) == 0) {
        v /= p * p;
        s *= p;
      }
    }
    Integer root = boost::multiprecision::sqrt(v);
    if (root * root == v) {
      s *= root;
      v = 1;
    }
    return {s, v};
  };
  bool neg = r < 0;
  Rational a = neg ? Rational(-r) : r;
  auto [sn, fn] = split_int(rat_num(a));
  auto [sd, fd] = split_int(rat_den(a));
  Rational s(sn, sd), f(fn, fd);
  if (neg) f = -f;
  return {s, f};
}

// Exact square root when r is a ratio of perfect squares.
inline std::optional<Rational> exact_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  auto [s, f] = square_part(r);
  if (f == 1) return s;
  return std::nullopt;
}

}  // namespace liejet
