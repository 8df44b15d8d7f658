#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

#include "qlb/errors.hpp"

namespace qlb {

/// Exact rational number. Canonical form (gcd 1, positive denominator) is
/// maintained after every operation, so == is structural equality.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design
  Rational(long n, long d);
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  /// Parses "p/q" or "p". Throws InputError on malformed input or q = 0.
  static Rational parse(const std::string& s);

  std::string str() const;
  std::string numerator() const { return v_.get_num().get_str(); }
  std::string denominator() const { return v_.get_den().get_str(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  int sign() const { return sgn(v_); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }

  Rational inverse() const;

  /// k! as a Rational.
  static Rational factorial(unsigned k);
  /// Ordinary binomial C(n, k).
  static Rational binomial(unsigned n, unsigned k);
  /// Generalized binomial C(a, k) = a(a-1)...(a-k+1)/k! for rational a.
  static Rational binomial(const Rational& a, unsigned k);

 private:
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Coefficient of x^k in the Taylor expansion of (1+x)^{-1/2} at 0.
Rational inv_sqrt_taylor_coeff(unsigned k);

}  // namespace qlb
