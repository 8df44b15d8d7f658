#include "qlb/rational.hpp"

#include <ostream>

namespace qlb {

Rational::Rational(long n, long d) {
  if (d == 0) throw InputError("rational with zero denominator");
  v_ = mpq_class(n, d);
  v_.canonicalize();
}

Rational Rational::parse(const std::string& s) {
  if (s.empty()) throw InputError("empty rational literal");
  std::string t = s;
  // mpq_class(str) accepts "p/q" but not surrounding spaces.
  size_t a = t.find_first_not_of(" \t");
  size_t b = t.find_last_not_of(" \t");
  if (a == std::string::npos) throw InputError("blank rational literal");
  t = t.substr(a, b - a + 1);
  try {
    mpq_class v(t, 10);
    if (sgn(v.get_den()) == 0) throw InputError("rational with zero denominator: " + s);
    v.canonicalize();
    return Rational(v);
  } catch (const std::invalid_argument&) {
    throw InputError("malformed rational literal: " + s);
  }
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw NotInvertible("division by zero rational");
  v_ /= o.v_;
  return *this;
}

Rational Rational::inverse() const {
  if (is_zero()) throw NotInvertible("inverse of zero rational");
  return Rational(mpq_class(1) / v_);
}

Rational Rational::factorial(unsigned k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), k);
  return Rational(mpq_class(f));
}

Rational Rational::binomial(unsigned n, unsigned k) {
  if (k > n) return Rational(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return Rational(mpq_class(b));
}

Rational Rational::binomial(const Rational& a, unsigned k) {
  Rational num(1);
  for (unsigned i = 0; i < k; ++i) num *= (a - Rational(static_cast<long>(i)));
  return num / factorial(k);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational inv_sqrt_taylor_coeff(unsigned k) {
  return Rational::binomial(Rational(-1, 2), k);
}

}  // namespace qlb
