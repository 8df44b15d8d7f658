#pragma once

#include <string>
#include <vector>

#include "qlb/report.hpp"
#include "qlb/tensor.hpp"

namespace qlb {

/// Finite-dimensional Lie algebra given by structure constants
/// [e_i, e_j] = c^k_{ij} e_k over exact rationals (indices 0-based in code,
/// 1-based in the I/O schema).
struct LieAlgebra {
  int dim = 0;
  /// c[i][j][k] = coefficient of e_k in [e_i, e_j].
  std::vector<std::vector<std::vector<Rational>>> c;

  static LieAlgebra zero(int dim);
  const Rational& bracket_coeff(int i, int j, int k) const { return c[i][j][k]; }
  void set_bracket(int i, int j, const std::vector<Rational>& coeffs);
  bool antisymmetric() const;
};

/// Letters of a SparseTensor (1..amb.dim) are basis indices of the ambient
/// Lie algebra. For tensors over a double built by build_double, letters
/// 1..n are e_i and n+1..2n are e^i, matching the tensor encoding with
/// dim g = n.

/// Diagonal adjoint action [x (x) 1 (x) ... + ... + 1 (x) ... (x) x, T].
SparseTensor ad_diagonal(const LieAlgebra& amb, int x_letter, const SparseTensor& t);

/// Commutator [A, B] of tensors in U(amb)^{(x)k} whose term supports overlap
/// in at most one leg (the only case arising classically); the result stays
/// in amb^{(x)k}.
SparseTensor tensor_commutator(const LieAlgebra& amb, const SparseTensor& a,
                               const SparseTensor& b);

/// Left-hand side of the classical Yang-Baxter equation:
/// [r^12, r^13] + [r^12, r^23] + [r^13, r^23].
SparseTensor cyb(const LieAlgebra& amb, const SparseTensor& r);

struct QuasiLieBialgebra {
  LieAlgebra base;
  /// delta[i][j][k] = coefficient of e_j (x) e_k in delta(e_i).
  std::vector<std::vector<std::vector<Rational>>> delta;
  SparseTensor phi;

  /// dim g used for the tensor letter encoding (= base.dim for a plain
  /// algebra, base.dim/2 for a structure living on a double).
  int tensor_dim() const { return phi.dim(); }
  int order() const { return phi.order(); }

  SparseTensor delta_tensor(int i) const;
  static QuasiLieBialgebra trivial(const LieAlgebra& L, int tensor_dim, int order);
};

/// Apply delta to one leg of a tensor (legs grow by one; the chosen leg must
/// carry g-letters or the unit).
SparseTensor apply_delta_to_leg(const QuasiLieBialgebra& q, const SparseTensor& t, int leg);

Report check_jacobi(const LieAlgebra& L);
Report check_quasi_lie(const QuasiLieBialgebra& q);
Report check_invariant(const LieAlgebra& amb, const SparseTensor& t);

/// Classical twist by antisymmetric f: delta~(x) = delta(x) + [x(x)1+1(x)x, f],
/// phi~ = phi + (1/2)Alt((delta(x)id)f) - CYB(f).
QuasiLieBialgebra twist_qlie(const QuasiLieBialgebra& q, const SparseTensor& f);

/// Definition of the structure associated to (L, t): delta = 0,
/// phi = (1/4)[t^12, t^23]. Requires t symmetric and invariant.
QuasiLieBialgebra from_invariant_pair(const LieAlgebra& L, const SparseTensor& t,
                                      int tensor_dim);

struct DoubleData {
  int n = 0;            // dim g
  LieAlgebra p;         // dim 2n, basis (e_1..e_n, e^1..e^n)
  SparseTensor omega;   // e_i (x) e^i + e^i (x) e_i
  SparseTensor f_std;   // (1/2)(e_i (x) e^i - e^i (x) e_i)
  Report verification;

  DoubleData() : omega(2, 0, 1), f_std(2, 0, 1) {}
};

/// The double p = g + g* with the bracket of the structure constants of q;
/// verifies Jacobi, omega symmetry/invariance and pairing invariance.
DoubleData build_double(const QuasiLieBialgebra& q);

/// Lemma: twisting the double's associated structure by f_std restricts to q
/// on g. Checks delta_{p'}|_g = delta and phi_{p'} = phi.
Report verify_lemma_5_1(const QuasiLieBialgebra& q);

}  // namespace qlb
