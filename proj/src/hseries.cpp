#include "qlb/hseries.hpp"

#include <sstream>

namespace qlb {

int HSeries::check_order(int order) {
  if (order < 1) throw ConfigError("series order must be positive");
  return order;
}

HSeries HSeries::monomial(int order, unsigned k, const Rational& c) {
  HSeries s(order);
  if (k < static_cast<unsigned>(order)) s.coeffs_[k] = c;
  return s;
}

const Rational& HSeries::coeff(unsigned k) const {
  static const Rational kZero(0);
  if (k >= coeffs_.size()) return kZero;
  return coeffs_[k];
}

void HSeries::set_coeff(unsigned k, const Rational& c) {
  if (k >= coeffs_.size()) throw ConfigError("coefficient index beyond truncation order");
  coeffs_[k] = c;
}

bool HSeries::is_zero() const {
  for (const auto& c : coeffs_)
    if (!c.is_zero()) return false;
  return true;
}

int HSeries::valuation() const {
  for (size_t k = 0; k < coeffs_.size(); ++k)
    if (!coeffs_[k].is_zero()) return static_cast<int>(k);
  return order();
}

HSeries HSeries::operator-() const {
  HSeries r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

static void require_same_order(const HSeries& a, const HSeries& b) {
  if (a.order() != b.order()) throw ConfigError("mismatched series orders");
}

HSeries& HSeries::operator+=(const HSeries& o) {
  require_same_order(*this, o);
  for (int k = 0; k < order(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

HSeries& HSeries::operator-=(const HSeries& o) {
  require_same_order(*this, o);
  for (int k = 0; k < order(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

HSeries operator*(const HSeries& a, const HSeries& b) {
  require_same_order(a, b);
  const int n = a.order();
  HSeries r(n);
  for (int i = 0; i < n; ++i) {
    if (a.coeffs_[i].is_zero()) continue;
    for (int j = 0; i + j < n; ++j) {
      if (b.coeffs_[j].is_zero()) continue;
      r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return r;
}

HSeries& HSeries::scale(const Rational& c) {
  for (auto& x : coeffs_) x *= c;
  return *this;
}

HSeries HSeries::shifted(unsigned k) const {
  HSeries r(order());
  for (int i = 0; i + static_cast<int>(k) < order(); ++i)
    r.coeffs_[i + k] = coeffs_[i];
  return r;
}

HSeries HSeries::inverse() const {
  if (coeffs_[0].is_zero()) throw NotInvertible("series with zero constant term");
  const int n = order();
  HSeries r(n);
  Rational c0inv = coeffs_[0].inverse();
  r.coeffs_[0] = c0inv;
  // Order-by-order: b_k = -c0^{-1} * sum_{i=1..k} a_i b_{k-i}.
  for (int k = 1; k < n; ++k) {
    Rational acc(0);
    for (int i = 1; i <= k; ++i) acc += coeffs_[i] * r.coeffs_[k - i];
    r.coeffs_[k] = -(c0inv * acc);
  }
  return r;
}

HSeries HSeries::truncated(int new_order) const {
  if (new_order < 1 || new_order > order())
    throw ConfigError("invalid truncation target order");
  HSeries r(new_order);
  for (int k = 0; k < new_order; ++k) r.coeffs_[k] = coeffs_[k];
  return r;
}

HSeries HSeries::divided_by_h(unsigned k, bool strict) const {
  for (unsigned i = 0; i < k && i < coeffs_.size(); ++i)
    if (strict && !coeffs_[i].is_zero())
      throw ConfigError("division by h^k of a series with lower-order terms");
  HSeries r(order());
  for (unsigned i = k; i < coeffs_.size(); ++i) r.coeffs_[i - k] = coeffs_[i];
  return r;
}

bool operator==(const HSeries& a, const HSeries& b) {
  require_same_order(a, b);
  return a.coeffs_ == b.coeffs_;
}

std::vector<std::string> HSeries::coeff_strings() const {
  std::vector<std::string> v;
  v.reserve(coeffs_.size());
  for (const auto& c : coeffs_) v.push_back(c.str());
  return v;
}

std::string HSeries::str() const {
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k < order(); ++k) {
    if (coeffs_[k].is_zero()) continue;
    if (!first) os << " + ";
    os << coeffs_[k].str();
    if (k == 1) os << "*h";
    if (k > 1) os << "*h^" << k;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace qlb
