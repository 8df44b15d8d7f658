#pragma once

#include <vector>

#include "qlb/rational.hpp"

namespace qlb {

/// Truncated formal power series in hbar over Rational: K[h]/h^N.
/// All arithmetic reduces mod h^N; equality is coefficient-wise.
class HSeries {
 public:
  HSeries() : coeffs_(1) {}
  explicit HSeries(int order) : coeffs_(check_order(order)) {}
  HSeries(int order, const Rational& constant) : coeffs_(check_order(order)) {
    coeffs_[0] = constant;
  }

  static HSeries zero(int order) { return HSeries(order); }
  static HSeries one(int order) { return HSeries(order, Rational(1)); }
  /// c * h^k (zero if k >= order).
  static HSeries monomial(int order, unsigned k, const Rational& c);

  int order() const { return static_cast<int>(coeffs_.size()); }
  const Rational& coeff(unsigned k) const;
  void set_coeff(unsigned k, const Rational& c);

  bool is_zero() const;
  /// Smallest k with nonzero coefficient, or order() if zero.
  int valuation() const;

  HSeries operator-() const;
  HSeries& operator+=(const HSeries& o);
  HSeries& operator-=(const HSeries& o);
  friend HSeries operator+(HSeries a, const HSeries& b) { return a += b; }
  friend HSeries operator-(HSeries a, const HSeries& b) { return a -= b; }
  friend HSeries operator*(const HSeries& a, const HSeries& b);

  HSeries& scale(const Rational& c);
  friend HSeries operator*(const Rational& c, HSeries s) { return s.scale(c); }

  /// Multiply by h^k (shift), truncating.
  HSeries shifted(unsigned k) const;

  /// Multiplicative inverse; requires nonzero constant term.
  HSeries inverse() const;

  /// Reduce to a lower order M <= N.
  HSeries truncated(int new_order) const;

  /// Drop all coefficients below h^k and divide by h^k.
  /// Requires the dropped coefficients to be zero unless `strict` is false.
  HSeries divided_by_h(unsigned k, bool strict = true) const;

  friend bool operator==(const HSeries& a, const HSeries& b);
  friend bool operator!=(const HSeries& a, const HSeries& b) { return !(a == b); }

  std::vector<std::string> coeff_strings() const;
  std::string str() const;

 private:
  static int check_order(int order);
  std::vector<Rational> coeffs_;
};

}  // namespace qlb
