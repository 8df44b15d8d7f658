#include "qlb/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qlb {

std::string letter_name(int letter, int dim) {
  if (letter == 0) return "1";
  if (letter <= dim) return "e" + std::to_string(letter);
  return "e^" + std::to_string(letter - dim);
}

Rational pair_basis(const BasisIndex& upper, const BasisIndex& lower) {
  if (upper.space != BasisIndex::GStar || lower.space != BasisIndex::G)
    throw ConfigError("pairing expects an upper (g*) and a lower (g) index");
  return upper.index == lower.index ? Rational(1) : Rational(0);
}

SparseTensor SparseTensor::unit(int legs, int dim, int order) {
  SparseTensor t(legs, dim, order);
  t.add_term(Word(legs, 0), Rational(1));
  return t;
}

void SparseTensor::add_term(const Word& w, const HSeries& c) {
  if (static_cast<int>(w.size()) != legs_) throw ConfigError("word length != legs");
  for (int l : w)
    if (l < 0 || l > 2 * dim_) throw ConfigError("letter out of range");
  if (c.order() != order_) throw ConfigError("mismatched series orders in tensor");
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    if (!c.is_zero()) terms_.emplace(w, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

void SparseTensor::add_term(const Word& w, const Rational& c) {
  add_term(w, HSeries(order_, c));
}

HSeries SparseTensor::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? HSeries::zero(order_) : it->second;
}

SparseTensor SparseTensor::operator-() const {
  SparseTensor r(legs_, dim_, order_);
  for (const auto& [w, c] : terms_) r.terms_.emplace(w, -c);
  return r;
}

SparseTensor& SparseTensor::operator+=(const SparseTensor& o) {
  if (o.legs_ != legs_ || o.dim_ != dim_) throw ConfigError("tensor shape mismatch");
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

SparseTensor& SparseTensor::operator-=(const SparseTensor& o) {
  if (o.legs_ != legs_ || o.dim_ != dim_) throw ConfigError("tensor shape mismatch");
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

SparseTensor& SparseTensor::scale(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, x] : terms_) x.scale(c);
  return *this;
}

SparseTensor& SparseTensor::scale(const HSeries& c) {
  std::map<Word, HSeries> out;
  for (auto& [w, x] : terms_) {
    HSeries y = x * c;
    if (!y.is_zero()) out.emplace(w, y);
  }
  terms_ = std::move(out);
  return *this;
}

bool operator==(const SparseTensor& a, const SparseTensor& b) {
  return a.legs_ == b.legs_ && a.dim_ == b.dim_ && a.terms_ == b.terms_;
}

SparseTensor tensor_product(const SparseTensor& a, const SparseTensor& b) {
  if (a.dim_ != b.dim_) throw ConfigError("tensor dim mismatch");
  if (a.order_ != b.order_) throw ConfigError("mismatched series orders");
  SparseTensor r(a.legs_ + b.legs_, a.dim_, a.order_);
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_) {
      HSeries c = ca * cb;
      if (c.is_zero()) continue;
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      r.add_term(w, c);
    }
  return r;
}

static void check_permutation(const std::vector<int>& sigma, int k) {
  if (static_cast<int>(sigma.size()) != k) throw ConfigError("permutation size != legs");
  std::vector<bool> seen(k, false);
  for (int v : sigma) {
    if (v < 1 || v > k || seen[v - 1]) throw ConfigError("not a permutation");
    seen[v - 1] = true;
  }
}

SparseTensor permute_legs(const SparseTensor& x, const std::vector<int>& sigma) {
  check_permutation(sigma, x.legs());
  SparseTensor r(x.legs(), x.dim(), x.order());
  for (const auto& [w, c] : x.terms()) {
    Word v(w.size());
    for (size_t j = 0; j < w.size(); ++j) v[sigma[j] - 1] = w[j];
    r.add_term(v, c);
  }
  return r;
}

SparseTensor permute_legs(const SparseTensor& x, const std::string& digits) {
  std::vector<int> sigma;
  sigma.reserve(digits.size());
  for (char ch : digits) sigma.push_back(ch - '0');
  return permute_legs(x, sigma);
}

SparseTensor insert_legs(const SparseTensor& x, int i, int j, int k) {
  if (x.legs() != 2) throw ConfigError("insert_legs expects a 2-leg tensor");
  if (!(1 <= i && i < j && j <= k)) throw ConfigError("insert_legs positions out of range");
  SparseTensor r(k, x.dim(), x.order());
  for (const auto& [w, c] : x.terms()) {
    Word v(k, 0);
    v[i - 1] = w[0];
    v[j - 1] = w[1];
    r.add_term(v, c);
  }
  return r;
}

SparseTensor alt(const SparseTensor& x) {
  const int k = x.legs();
  std::vector<int> sigma(k);
  std::iota(sigma.begin(), sigma.end(), 1);
  SparseTensor r(k, x.dim(), x.order());
  do {
    // Parity by inversion count; k is tiny here.
    int inversions = 0;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        if (sigma[a] > sigma[b]) ++inversions;
    SparseTensor p = permute_legs(x, sigma);
    if (inversions % 2)
      r -= p;
    else
      r += p;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return r;
}

std::string SparseTensor::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) os << " + ";
    os << "(" << c.str() << ")*";
    for (size_t j = 0; j < w.size(); ++j) {
      if (j) os << "(x)";
      os << letter_name(w[j], dim_);
    }
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace qlb
