#pragma once

#include <cstdint>
#include <string>

#include "stein/errors.hpp"

namespace stein {

// Exact rational on 128-bit integers, normalized (den > 0, gcd == 1).
// Sized for the enumeration workloads in this library (state probabilities
// p^n with small denominators, n <= 24); every operation that could exceed
// the i128 range throws instead of wrapping.
class Rational {
 public:
  using Int = __int128;

  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(long long num, long long den) : num_(num), den_(den) { normalize(); }

  static Rational from_int128(Int num, Int den) {
    Rational r;
    r.num_ = num;
    r.den_ = den;
    r.normalize();
    return r;
  }

  Int num() const { return num_; }
  Int den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  double to_double() const {
    return static_cast<double>(static_cast<long double>(num_) /
                               static_cast<long double>(den_));
  }

  Rational operator-() const { return from_int128(-num_, den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    // a.n/a.d + b.n/b.d over the reduced common denominator.
    const Int g = gcd(a.den_, b.den_);
    const Int da = a.den_ / g;
    const Int db = b.den_ / g;
    const Int lhs = checked_mul(a.num_, db);
    const Int rhs = checked_mul(b.num_, da);
    return from_int128(checked_add(lhs, rhs), checked_mul(a.den_, db));
  }

  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    const Int g1 = gcd(abs_i(a.num_), b.den_);
    const Int g2 = gcd(abs_i(b.num_), a.den_);
    return from_int128(checked_mul(a.num_ / g1, b.num_ / g2),
                       checked_mul(a.den_ / g2, b.den_ / g1));
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error("rational division by zero");
    return a * from_int128(b.den_, b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return (a - b).num_ < 0;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return (a - b).num_ <= 0;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

  Rational pow(unsigned k) const {
    Rational out{1};
    Rational base = *this;
    while (k > 0) {
      if (k & 1u) out *= base;
      base = (k >>= 1) ? base * base : base;
    }
    return out;
  }

  std::string str() const {
    auto digits = [](Int v) {
      if (v == 0) return std::string("0");
      const bool neg = v < 0;
      std::string s;
      unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
      while (u > 0) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
      }
      return neg ? "-" + s : s;
    };
    return den_ == 1 ? digits(num_) : digits(num_) + "/" + digits(den_);
  }

 private:
  static Int abs_i(Int v) { return v < 0 ? -v : v; }

  static Int gcd(Int a, Int b) {
    a = abs_i(a);
    b = abs_i(b);
    while (b != 0) {
      const Int t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  static Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw Error("rational overflow (add)");
    return r;
  }

  static Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error("rational overflow (mul)");
    return r;
  }

  void normalize() {
    if (den_ == 0) throw Error("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const Int g = gcd(num_, den_);
    num_ /= g;
    den_ /= g;
  }

  Int num_;
  Int den_;
};

}  // namespace stein
