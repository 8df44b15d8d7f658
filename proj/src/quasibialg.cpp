#include "qlb/quasibialg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qlb {

QuasiBialgebra undeformed_bialgebra(std::shared_ptr<const EnvelopingAlgebra> A,
                                    int deg_cap, int tensor_dim) {
  QuasiBialgebra B;
  B.carrier = std::move(A);
  B.deg_cap = deg_cap;
  B.tensor_dim = tensor_dim;
  const auto& alg = B.A();
  const int m = alg.num_gens();
  for (int g = 0; g < m; ++g) {
    UTensor d = alg.u_tensor(2, deg_cap);
    Mono mg = mono_unit(m);
    mg[g] = 1;
    d.add({mg, mono_unit(m)}, HSeries::one(alg.order()));
    d.add({mono_unit(m), mg}, HSeries::one(alg.order()));
    B.delta_gen.push_back(std::move(d));
  }
  B.phi = alg.unit_tensor(3, deg_cap);
  return B;
}

UTensor apply_delta_mono(const QuasiBialgebra& B, const Mono& m) {
  const auto& A = B.A();
  UTensor acc = A.unit_tensor(2, B.deg_cap);
  if (mono_is_unit(m)) return acc;
  // Delta is an algebra map; expand the sigma-PBW monomial into words and
  // multiply generator coproducts.
  UTensor out = A.u_tensor(2, B.deg_cap);
  for (const auto& [w, c] : A.basis_words(m)) {
    UTensor prod = A.unit_tensor(2, B.deg_cap);
    for (int gen : w) prod = A.multiply(prod, B.delta_gen[gen]);
    prod.scale(c);
    out += prod;
  }
  return out;
}

UTensor apply_delta_leg(const QuasiBialgebra& B, const UTensor& t, int leg) {
  if (leg < 1 || leg > t.legs) throw ConfigError("delta leg out of range");
  const auto& A = B.A();
  UTensor r = A.u_tensor(t.legs + 1, t.deg_cap);
  r.overflow = t.overflow;
  for (const auto& [k, c] : t.terms) {
    UTensor dm = apply_delta_mono(B, k[leg - 1]);
    r.overflow = r.overflow || dm.overflow;
    for (const auto& [dk, dc] : dm.terms) {
      std::vector<Mono> key;
      key.reserve(t.legs + 1);
      for (int j = 0; j < leg - 1; ++j) key.push_back(k[j]);
      key.push_back(dk[0]);
      key.push_back(dk[1]);
      for (int j = leg; j < t.legs; ++j) key.push_back(k[j]);
      r.add(key, c * dc);
    }
  }
  return r;
}

UTensor alt_tensor(const EnvelopingAlgebra& A, const UTensor& t) {
  std::vector<int> sigma(t.legs);
  std::iota(sigma.begin(), sigma.end(), 1);
  UTensor r = A.u_tensor(t.legs, t.deg_cap);
  do {
    int inv = 0;
    for (int a = 0; a < t.legs; ++a)
      for (int b = a + 1; b < t.legs; ++b)
        if (sigma[a] > sigma[b]) ++inv;
    UTensor p = A.permute(t, sigma);
    if (inv % 2)
      r -= p;
    else
      r += p;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return r;
}

Report check_axioms(const QuasiBialgebra& B) {
  const auto& A = B.A();
  Report rep;
  rep.title = "quasi_bialgebra_axioms";
  UTensor phi_inv = A.inverse(B.phi);

  bool overflow = false;
  // (B1) on generators
  for (int g = 0; g < A.num_gens(); ++g) {
    UTensor lhs = apply_delta_leg(B, B.delta_gen[g], 2);
    UTensor rhs = A.multiply(A.multiply(B.phi, apply_delta_leg(B, B.delta_gen[g], 1)), phi_inv);
    UTensor defect = lhs - rhs;
    overflow = overflow || defect.overflow;
    std::ostringstream name;
    name << "B1(e" << g + 1 << ")";
    rep.add(name.str(), defect.is_zero());
  }

  // (B2) pentagon
  {
    UTensor lhs = A.multiply(apply_delta_leg(B, B.phi, 3), apply_delta_leg(B, B.phi, 1));
    UTensor rhs = A.multiply(
        A.multiply(A.pad_left(B.phi), apply_delta_leg(B, B.phi, 2)),
        A.pad_right(B.phi));
    UTensor defect = lhs - rhs;
    overflow = overflow || defect.overflow;
    rep.add("B2_pentagon", defect.is_zero());
  }

  // (B3) counit axioms on generators
  for (int g = 0; g < A.num_gens(); ++g) {
    UTensor left = A.counit_leg(B.delta_gen[g], 1);
    UTensor right = A.counit_leg(B.delta_gen[g], 2);
    UTensor target = A.u_tensor(1, B.deg_cap);
    Mono mg = mono_unit(A.num_gens());
    mg[g] = 1;
    target.add({mg}, HSeries::one(A.order()));
    std::ostringstream name;
    name << "B3(e" << g + 1 << ")";
    rep.add(name.str(), (left - target).is_zero() && (right - target).is_zero());
  }

  // (B4)
  {
    UTensor capped = A.counit_leg(B.phi, 2);
    UTensor defect = capped - A.unit_tensor(2, B.deg_cap);
    rep.add("B4_counit_of_phi", defect.is_zero());
  }
  if (overflow)
    throw TruncationError("overflow during axiom check: retry with larger truncation degree");
  return rep;
}

Report check_quasitriangular(const QuasiBialgebra& B) {
  const auto& A = B.A();
  Report rep;
  rep.title = "quasi_triangular";
  if (!B.R) throw InputError("no R-matrix present");
  const UTensor& R = *B.R;
  UTensor phi_inv = A.inverse(B.phi);

  for (int g = 0; g < A.num_gens(); ++g) {
    // Delta^op(a) R = R Delta(a)
    UTensor lhs = A.multiply(A.permute(B.delta_gen[g], "21"), R);
    UTensor rhs = A.multiply(R, B.delta_gen[g]);
    std::ostringstream name;
    name << "R_intertwines(e" << g + 1 << ")";
    rep.add(name.str(), (lhs - rhs).is_zero());
  }

  UTensor r12 = A.insert(R, 1, 2, 3);
  UTensor r13 = A.insert(R, 1, 3, 3);
  UTensor r23 = A.insert(R, 2, 3, 3);

  {
    UTensor lhs = apply_delta_leg(B, R, 1);
    UTensor rhs = A.multiply(
        A.multiply(A.multiply(A.multiply(A.permute(B.phi, "312"), r13),
                              A.inverse(A.permute(B.phi, "132"))),
                   r23),
        B.phi);
    rep.add("hexagon_delta_x_id", (lhs - rhs).is_zero());
  }
  {
    UTensor lhs = apply_delta_leg(B, R, 2);
    UTensor rhs = A.multiply(
        A.multiply(A.multiply(A.multiply(A.inverse(A.permute(B.phi, "231")), r13),
                              A.permute(B.phi, "213")),
                   r12),
        phi_inv);
    rep.add("hexagon_id_x_delta", (lhs - rhs).is_zero());
  }
  return rep;
}

QuasiBialgebra twist_quasibialg(const QuasiBialgebra& B, const UTensor& F) {
  const auto& A = B.A();
  if (F.legs != 2) throw InputError("twist must be a 2-leg tensor");
  // counit conditions
  UTensor one1 = A.u_tensor(1, B.deg_cap);
  one1.add({mono_unit(A.num_gens())}, HSeries::one(A.order()));
  if (!(A.counit_leg(F, 2) - one1).is_zero() || !(A.counit_leg(F, 1) - one1).is_zero())
    throw InputError("twist violates the counit conditions");
  UTensor f_inv = A.inverse(F);

  QuasiBialgebra out = B;
  for (int g = 0; g < A.num_gens(); ++g)
    out.delta_gen[g] = A.multiply(A.multiply(F, B.delta_gen[g]), f_inv);
  out.phi = A.multiply(
      A.multiply(A.multiply(A.multiply(A.insert(F, 2, 3, 3), apply_delta_leg(B, F, 2)), B.phi),
                 apply_delta_leg(B, f_inv, 1)),
      A.inverse(A.insert(F, 1, 2, 3)));
  if (B.R) out.R = A.multiply(A.multiply(A.permute(F, "21"), *B.R), f_inv);
  return out;
}

namespace {

/// Project the h^k coefficient of a UTensor onto words of single-generator
/// monomials; throws if anything else survives at that coefficient.
SparseTensor project_lie_layer(const EnvelopingAlgebra& A, const UTensor& t, unsigned k,
                               int tensor_dim, const char* what) {
  SparseTensor out(t.legs, tensor_dim, A.order());
  for (const auto& [key, c] : t.terms) {
    if (c.coeff(k).is_zero()) continue;
    Word w(t.legs, 0);
    for (int leg = 0; leg < t.legs; ++leg) {
      int deg = mono_degree(key[leg]);
      if (deg == 0) continue;
      if (deg > 1)
        throw TruncationError(std::string(what) + ": higher PBW monomials survive the limit");
      for (int g = 0; g < A.num_gens(); ++g)
        if (key[leg][g] == 1) w[leg] = g + 1;
    }
    out.add_term(w, HSeries(A.order(), c.coeff(k)));
  }
  return out;
}

}  // namespace

QuasiLieBialgebra classical_limit(const QuasiBialgebra& B) {
  const auto& A = B.A();
  const int m = A.num_gens();
  // Precondition: Phi = 1 mod h^2.
  UTensor dphi = B.phi - A.unit_tensor(3, B.deg_cap);
  for (const auto& [key, c] : dphi.terms)
    if (c.valuation() < 2)
      throw PreconditionError("classical limit needs Phi = 1 mod h^2 (twist first)");

  QuasiLieBialgebra q = QuasiLieBialgebra::trivial(A.algebra(), B.tensor_dim, A.order());
  for (int g = 0; g < m; ++g) {
    UTensor skew = B.delta_gen[g] - A.permute(B.delta_gen[g], "21");
    for (const auto& [key, c] : skew.terms)
      if (c.valuation() < 1)
        throw PreconditionError("Delta - Delta^op does not vanish at h^0");
    SparseTensor d = project_lie_layer(A, skew, 1, B.tensor_dim, "cobracket");
    for (const auto& [w, c] : d.terms()) {
      if (w[0] == 0 || w[1] == 0)
        throw TruncationError("cobracket has a unit leg");
      q.delta[g][w[0] - 1][w[1] - 1] = c.coeff(0);
    }
  }
  q.phi = project_lie_layer(A, alt_tensor(A, B.phi), 2, B.tensor_dim, "phi");
  return q;
}

ExtractedT extract_t(const QuasiBialgebra& B) {
  const auto& A = B.A();
  if (!B.R) throw InputError("no R-matrix present");
  UTensor prod = A.multiply(A.permute(*B.R, "21"), *B.R);
  prod -= A.unit_tensor(2, B.deg_cap);
  for (const auto& [key, c] : prod.terms)
    if (c.valuation() < 1) throw PreconditionError("R^21 R - 1 does not vanish at h^0");
  SparseTensor t = project_lie_layer(A, prod, 1, B.tensor_dim, "t");
  Report rep;
  rep.title = "extract_t";
  rep.add("symmetric", (t - permute_legs(t, "21")).is_zero());
  rep.add("invariant", check_invariant(A.algebra(), t).passed());
  return ExtractedT(std::move(t), std::move(rep));
}

}  // namespace qlb
