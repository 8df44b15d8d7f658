#pragma once

#include <map>
#include <string>
#include <vector>

#include "qlb/hseries.hpp"

namespace qlb {

/// One tensor leg: a basis vector of g (e_i), of g* (e^i), or the unit 1.
/// Letters are encoded relative to dim g = n: 0 is the unit, 1..n is e_i,
/// n+1..2n is e^i. For tensors over the double p = g + g*, all 2n basis
/// letters occur; for tensors over g only letters 1..n do.
struct BasisIndex {
  enum Space { G, GStar };
  Space space;
  int index;  // 1-based within the space
};

using Word = std::vector<int>;

inline int letter_of(const BasisIndex& b, int dim) {
  return b.space == BasisIndex::G ? b.index : dim + b.index;
}
std::string letter_name(int letter, int dim);

/// Kronecker pairing <e^i, e_j>.
Rational pair_basis(const BasisIndex& upper, const BasisIndex& lower);

/// Sparse linear combination of basis words with HSeries coefficients.
/// Invariant: no stored coefficient is zero; all words have length legs.
class SparseTensor {
 public:
  SparseTensor(int legs, int dim, int order)
      : legs_(legs), dim_(dim), order_(order) {}

  static SparseTensor unit(int legs, int dim, int order);

  int legs() const { return legs_; }
  int dim() const { return dim_; }
  int order() const { return order_; }
  const std::map<Word, HSeries>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Word& w, const HSeries& c);
  void add_term(const Word& w, const Rational& c);
  HSeries coeff(const Word& w) const;

  SparseTensor operator-() const;
  SparseTensor& operator+=(const SparseTensor& o);
  SparseTensor& operator-=(const SparseTensor& o);
  friend SparseTensor operator+(SparseTensor a, const SparseTensor& b) { return a += b; }
  friend SparseTensor operator-(SparseTensor a, const SparseTensor& b) { return a -= b; }
  SparseTensor& scale(const Rational& c);
  SparseTensor& scale(const HSeries& c);

  friend bool operator==(const SparseTensor& a, const SparseTensor& b);
  friend bool operator!=(const SparseTensor& a, const SparseTensor& b) { return !(a == b); }

  /// Word concatenation (tensor product of tensors).
  friend SparseTensor tensor_product(const SparseTensor& a, const SparseTensor& b);

  std::string str() const;

 private:
  int legs_, dim_, order_;
  std::map<Word, HSeries> terms_;
};

/// Reindex legs by sigma: leg j of x moves to position sigma[j-1] (1-based
/// entries), so (a(x)b(x)c)^{312} = b(x)c(x)a. Throws ConfigError unless sigma
/// is a permutation of 1..k.
SparseTensor permute_legs(const SparseTensor& x, const std::vector<int>& sigma);

/// Shorthand: permutation given as digits, e.g. "312".
SparseTensor permute_legs(const SparseTensor& x, const std::string& digits);

/// Place a 2-leg tensor on legs (i, j) of a k-leg tensor; remaining legs
/// carry the unit.
SparseTensor insert_legs(const SparseTensor& x, int i, int j, int k);

/// Sum over all permutations with sign, no division by k!.
SparseTensor alt(const SparseTensor& x);

}  // namespace qlb
