#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "errors.hpp"

namespace zkpcp {

// Non-negative exact fraction; distances and probabilities only.
struct Rational {
  uint64_t num = 0;
  uint64_t den = 1;

  Rational() = default;
  Rational(uint64_t n, uint64_t d = 1) : num(n), den(d) {
    if (d == 0) fail(Errc::DivisionByZero, "rational with zero denominator");
    normalize();
  }

  void normalize() {
    uint64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    unsigned __int128 n = (unsigned __int128)a.num * b.den + (unsigned __int128)b.num * a.den;
    unsigned __int128 d = (unsigned __int128)a.den * b.den;
    return reduce128(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    unsigned __int128 x = (unsigned __int128)a.num * b.den, y = (unsigned __int128)b.num * a.den;
    if (y > x) fail(Errc::PreconditionViolated, "negative rational");
    return reduce128(x - y, (unsigned __int128)a.den * b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return reduce128((unsigned __int128)a.num * b.num, (unsigned __int128)a.den * b.den);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) fail(Errc::DivisionByZero, "rational division");
    return reduce128((unsigned __int128)a.num * b.den, (unsigned __int128)a.den * b.num);
  }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(const Rational& a, const Rational& b) {
    return (unsigned __int128)a.num * b.den < (unsigned __int128)b.num * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
    while (b) {
      unsigned __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  static Rational reduce128(unsigned __int128 n, unsigned __int128 d) {
    unsigned __int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n == 0) d = 1;
    if (d > UINT64_MAX || n > UINT64_MAX) fail(Errc::PreconditionViolated, "rational overflow");
    Rational r;
    r.num = static_cast<uint64_t>(n);
    r.den = static_cast<uint64_t>(d);
    return r;
  }
};

inline Rational rmin(const Rational& a, const Rational& b) { return b < a ? b : a; }

}  // namespace zkpcp
