#pragma once

#include <map>
#include <vector>

#include "qlb/hseries.hpp"
#include "qlb/lie.hpp"

namespace qlb {

/// PBW monomial over the generators of U(L): exponent vector. The first
/// g_block generators form an ordered monomial block, the remaining (star)
/// generators enter symmetrized: (alpha, kappa) represents
/// e^alpha * sigma(y^kappa), realizing the U(g) (x) S(g*) factorization.
using Mono = std::vector<int>;
using GenWord = std::vector<int>;  // sequence of generator ids, 0-based

int mono_degree(const Mono& m);
Mono mono_unit(int num_gens);
bool mono_is_unit(const Mono& m);

/// Element of truncated U(L): PBW-basis coefficients, a degree cap, and an
/// overflow flag set when a product discarded a term above the cap.
struct UElement {
  int num_gens = 0;
  int deg_cap = 0;
  std::map<Mono, HSeries> terms;
  bool overflow = false;

  bool is_zero() const { return terms.empty(); }
  void add(const Mono& m, const HSeries& c);
};

/// Element of U(L)^{(x) legs} with independent per-leg monomials.
struct UTensor {
  int legs = 0;
  int num_gens = 0;
  int deg_cap = 0;
  std::map<std::vector<Mono>, HSeries> terms;
  bool overflow = false;

  bool is_zero() const { return terms.empty(); }
  void add(const std::vector<Mono>& key, const HSeries& c);
  UTensor operator-() const;
  UTensor& operator+=(const UTensor& o);
  UTensor& operator-=(const UTensor& o);
  friend UTensor operator+(UTensor a, const UTensor& b) { return a += b; }
  friend UTensor operator-(UTensor a, const UTensor& b) { return a -= b; }
  UTensor& scale(const HSeries& c);
  UTensor& scale(const Rational& c);
};

/// Truncated universal enveloping algebra with the straightening engine.
/// Multiplication rewrites words to the canonical PBW order using the Lie
/// bracket, leftmost inversion first; star blocks are re-expressed through
/// the symmetrization map.
class EnvelopingAlgebra {
 public:
  using LinRat = std::vector<std::pair<Mono, Rational>>;
  using WordPoly = std::vector<std::pair<GenWord, Rational>>;

  EnvelopingAlgebra(LieAlgebra L, int g_block, int order);

  const LieAlgebra& algebra() const { return L_; }
  int num_gens() const { return L_.dim; }
  int g_block() const { return ng_; }
  int order() const { return order_; }

  // --- exact word layer ---------------------------------------------------
  /// Rewrites an arbitrary word in the generators into the sigma-PBW basis.
  const LinRat& word_to_basis(const GenWord& w) const;
  /// sigma(y^kappa) as a sum of words (kappa indexes the star block only,
  /// entries are full-length exponent vectors with zero g part).
  WordPoly sigma_expand(const Mono& kappa) const;
  /// Basis monomial as a word polynomial.
  WordPoly basis_words(const Mono& m) const;
  /// Exact product of two basis monomials (memoized).
  const LinRat& mono_product(const Mono& a, const Mono& b) const;

  // --- truncated element/tensor layer --------------------------------------
  UElement u_element(int deg_cap) const;
  UTensor u_tensor(int legs, int deg_cap) const;
  UTensor unit_tensor(int legs, int deg_cap) const;

  UElement multiply(const UElement& a, const UElement& b) const;
  UTensor multiply(const UTensor& a, const UTensor& b) const;

  /// Standard coproduct (primitive generators), closed form in this basis:
  /// splits leg `leg` (1-based) into two legs.
  UTensor coproduct_leg(const UTensor& t, int leg) const;
  UElement u_multiply(const UElement& a, const UElement& b) const { return multiply(a, b); }
  UTensor u_coproduct(const UElement& a) const;

  /// Counit: apply epsilon to leg `leg` (drops it).
  UTensor counit_leg(const UTensor& t, int leg) const;
  HSeries u_counit(const UElement& a) const;

  /// Symmetrization S(g*) -> U(L) (a basis monomial here; the content is in
  /// the basis conversion, see word_to_basis).
  UElement symmetrize_sigma(const Mono& kappa, int deg_cap) const;

  /// Keep the U(g) (x) S^0 component.
  UElement f0_projection(const UElement& a) const;

  /// Leg j of t moves to position sigma[j-1] ((a(x)b(x)c)^{312} = b(x)c(x)a).
  UTensor permute(const UTensor& t, const std::vector<int>& sigma) const;
  UTensor permute(const UTensor& t, const std::string& digits) const;
  /// Place a 2-leg tensor on legs (i, j) of a k-leg unit tensor.
  UTensor insert(const UTensor& t, int i, int j, int k) const;
  /// 1 (x) t and t (x) 1.
  UTensor pad_left(const UTensor& t) const;
  UTensor pad_right(const UTensor& t) const;

  /// Inverse of a tensor with constant term 1 (x) ... (x) 1 (geometric series).
  UTensor inverse(const UTensor& t) const;
  /// exp of a tensor whose coefficients all vanish at hbar^0.
  UTensor exp(const UTensor& t) const;

  /// Embed a Lie-layer tensor (letters 1..dim over the ambient algebra) as a
  /// UTensor with degree-1 monomials; unit letters become unit monomials.
  UTensor from_sparse(const SparseTensor& t, int deg_cap) const;
  /// Inverse of from_sparse for tensors supported on degree <= 1 monomials;
  /// degree >= 2 monomials must be absent (throws otherwise).
  SparseTensor to_sparse(const UTensor& t, int tensor_dim) const;

 private:
  struct WordPolyEntry;
  const std::map<GenWord, Rational>& straighten(const GenWord& w) const;
  const LinRat& ordered_to_basis(const GenWord& ordered) const;
  bool is_sorted_word(const GenWord& w) const;

  LieAlgebra L_;
  int ng_;
  int order_;

  mutable std::map<GenWord, std::map<GenWord, Rational>> straighten_memo_;
  mutable std::map<GenWord, LinRat> ordered_memo_;
  mutable std::map<GenWord, LinRat> word_basis_memo_;
  mutable std::map<std::pair<Mono, Mono>, LinRat> product_memo_;
};

/// Number of PBW monomials of degree <= d in `gens` generators (the
/// dimension of S^{<=d}).
long pbw_dimension(int gens, int d);

}  // namespace qlb
