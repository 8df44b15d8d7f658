#include "qlb/lie.hpp"

#include <sstream>

namespace qlb {

LieAlgebra LieAlgebra::zero(int dim) {
  LieAlgebra L;
  L.dim = dim;
  L.c.assign(dim, std::vector<std::vector<Rational>>(dim, std::vector<Rational>(dim)));
  return L;
}

void LieAlgebra::set_bracket(int i, int j, const std::vector<Rational>& coeffs) {
  if (static_cast<int>(coeffs.size()) != dim) throw InputError("bracket coefficient list size != dim");
  for (int k = 0; k < dim; ++k) {
    c[i][j][k] = coeffs[k];
    c[j][i][k] = -coeffs[k];
  }
}

bool LieAlgebra::antisymmetric() const {
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        if (c[i][j][k] != -c[j][i][k]) return false;
  return true;
}

SparseTensor ad_diagonal(const LieAlgebra& amb, int x_letter, const SparseTensor& t) {
  SparseTensor out(t.legs(), t.dim(), t.order());
  const int xi = x_letter - 1;
  if (xi < 0 || xi >= amb.dim) throw ConfigError("ad letter out of ambient range");
  for (const auto& [w, coeff] : t.terms()) {
    for (int leg = 0; leg < t.legs(); ++leg) {
      if (w[leg] == 0) continue;  // [x, 1] = 0
      int yi = w[leg] - 1;
      if (yi >= amb.dim) throw ConfigError("tensor letter out of ambient range");
      for (int k = 0; k < amb.dim; ++k) {
        const Rational& ck = amb.c[xi][yi][k];
        if (ck.is_zero()) continue;
        Word v = w;
        v[leg] = k + 1;
        HSeries hc = coeff;
        hc.scale(ck);
        out.add_term(v, hc);
      }
    }
  }
  return out;
}

SparseTensor tensor_commutator(const LieAlgebra& amb, const SparseTensor& a,
                               const SparseTensor& b) {
  if (a.legs() != b.legs()) throw ConfigError("commutator legs mismatch");
  SparseTensor out(a.legs(), a.dim(), a.order());
  for (const auto& [wa, ca] : a.terms()) {
    for (const auto& [wb, cb] : b.terms()) {
      HSeries c = ca * cb;
      if (c.is_zero()) continue;
      int shared = -1, shared_count = 0;
      for (int leg = 0; leg < a.legs(); ++leg)
        if (wa[leg] != 0 && wb[leg] != 0) {
          shared = leg;
          ++shared_count;
        }
      if (shared_count == 0) continue;  // disjoint supports commute
      if (shared_count > 1)
        throw ConfigError("tensor commutator leaves the Lie layer (two shared legs)");
      int xi = wa[shared] - 1, yi = wb[shared] - 1;
      if (xi >= amb.dim || yi >= amb.dim) throw ConfigError("letter out of ambient range");
      for (int k = 0; k < amb.dim; ++k) {
        const Rational& ck = amb.c[xi][yi][k];
        if (ck.is_zero()) continue;
        Word v(a.legs());
        for (int leg = 0; leg < a.legs(); ++leg)
          v[leg] = (leg == shared) ? k + 1 : (wa[leg] != 0 ? wa[leg] : wb[leg]);
        HSeries hc = c;
        hc.scale(ck);
        out.add_term(v, hc);
      }
    }
  }
  return out;
}

SparseTensor cyb(const LieAlgebra& amb, const SparseTensor& r) {
  if (r.legs() != 2) throw ConfigError("cyb expects a 2-leg tensor");
  SparseTensor r12 = insert_legs(r, 1, 2, 3);
  SparseTensor r13 = insert_legs(r, 1, 3, 3);
  SparseTensor r23 = insert_legs(r, 2, 3, 3);
  SparseTensor out = tensor_commutator(amb, r12, r13);
  out += tensor_commutator(amb, r12, r23);
  out += tensor_commutator(amb, r13, r23);
  return out;
}

SparseTensor QuasiLieBialgebra::delta_tensor(int i) const {
  const int d = static_cast<int>(delta.size());
  SparseTensor t(2, tensor_dim(), order());
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      if (!delta[i][j][k].is_zero()) t.add_term({j + 1, k + 1}, delta[i][j][k]);
  return t;
}

QuasiLieBialgebra QuasiLieBialgebra::trivial(const LieAlgebra& L, int tensor_dim, int order) {
  QuasiLieBialgebra q{L,
                      std::vector<std::vector<std::vector<Rational>>>(
                          L.dim, std::vector<std::vector<Rational>>(L.dim, std::vector<Rational>(L.dim))),
                      SparseTensor(3, tensor_dim, order)};
  return q;
}

SparseTensor apply_delta_to_leg(const QuasiLieBialgebra& q, const SparseTensor& t, int leg) {
  if (leg < 1 || leg > t.legs()) throw ConfigError("delta leg out of range");
  const int d = static_cast<int>(q.delta.size());
  SparseTensor out(t.legs() + 1, t.dim(), t.order());
  for (const auto& [w, coeff] : t.terms()) {
    int a = w[leg - 1];
    if (a == 0) continue;  // delta(1) = 0
    if (a > d) throw ConfigError("delta applied to a letter outside its domain");
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const Rational& djk = q.delta[a - 1][j][k];
        if (djk.is_zero()) continue;
        Word v;
        v.reserve(w.size() + 1);
        for (int l = 0; l < t.legs(); ++l) {
          if (l == leg - 1) {
            v.push_back(j + 1);
            v.push_back(k + 1);
          } else {
            v.push_back(w[l]);
          }
        }
        HSeries hc = coeff;
        hc.scale(djk);
        out.add_term(v, hc);
      }
  }
  return out;
}

Report check_jacobi(const LieAlgebra& L) {
  Report rep;
  rep.title = "jacobi";
  rep.add("antisymmetry", L.antisymmetric());
  const int n = L.dim;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        // [[ei,ej],ek] + [[ej,ek],ei] + [[ek,ei],ej]
        SparseTensor defect(1, n, 1);
        for (int m = 0; m < n; ++m)
          for (int l = 0; l < n; ++l) {
            Rational acc = L.c[i][j][m] * L.c[m][k][l];
            acc += L.c[j][k][m] * L.c[m][i][l];
            acc += L.c[k][i][m] * L.c[m][j][l];
            if (!acc.is_zero()) defect.add_term({l + 1}, acc);
          }
        std::ostringstream name;
        name << "jacobi(" << i + 1 << "," << j + 1 << "," << k + 1 << ")";
        rep.add_defect(name.str(), defect);
      }
  return rep;
}

Report check_quasi_lie(const QuasiLieBialgebra& q) {
  Report rep;
  rep.title = "quasi_lie_axioms";
  const LieAlgebra& L = q.base;
  const int n = L.dim;
  rep.merge(check_jacobi(L));

  bool delta_antisym = true;
  for (int i = 0; i < n && delta_antisym; ++i)
    for (int j = 0; j < n && delta_antisym; ++j)
      for (int k = 0; k < n; ++k)
        if (q.delta[i][j][k] != -q.delta[i][k][j]) {
          delta_antisym = false;
          break;
        }
  rep.add("delta_antisymmetry", delta_antisym);

  SparseTensor phi_anti = alt(q.phi);
  phi_anti.scale(Rational(1, 6));
  rep.add("phi_totally_antisymmetric", phi_anti == q.phi,
          "Alt(phi)/3! = phi");

  // 1-cocycle: delta([x,y]) = x.delta(y) - y.delta(x).
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      SparseTensor lhs(2, q.tensor_dim(), q.order());
      for (int k = 0; k < n; ++k) {
        if (L.c[i][j][k].is_zero()) continue;
        SparseTensor dk = q.delta_tensor(k);
        dk.scale(L.c[i][j][k]);
        lhs += dk;
      }
      SparseTensor rhs = ad_diagonal(L, i + 1, q.delta_tensor(j));
      rhs -= ad_diagonal(L, j + 1, q.delta_tensor(i));
      std::ostringstream name;
      name << "cocycle(" << i + 1 << "," << j + 1 << ")";
      rep.add_defect(name.str(), lhs - rhs);
    }

  // (1/2) Alt (delta (x) id) delta(x) = [x(x)1(x)1 + 1(x)x(x)1 + 1(x)1(x)x, phi].
  for (int i = 0; i < n; ++i) {
    SparseTensor lhs = alt(apply_delta_to_leg(q, q.delta_tensor(i), 1));
    lhs.scale(Rational(1, 2));
    SparseTensor rhs = ad_diagonal(L, i + 1, q.phi);
    std::ostringstream name;
    name << "co_jacobi_up_to_phi(e" << i + 1 << ")";
    rep.add_defect(name.str(), lhs - rhs);
  }

  // Alt (delta (x) id (x) id)(phi) = 0.
  rep.add_defect("alt_delta_phi", alt(apply_delta_to_leg(q, q.phi, 1)));
  return rep;
}

Report check_invariant(const LieAlgebra& amb, const SparseTensor& t) {
  Report rep;
  rep.title = "invariance";
  for (int x = 1; x <= amb.dim; ++x) {
    std::ostringstream name;
    name << "invariance(x=" << x << ")";
    rep.add_defect(name.str(), ad_diagonal(amb, x, t));
  }
  return rep;
}

static bool is_antisymmetric2(const SparseTensor& f) {
  return (f + permute_legs(f, "21")).is_zero();
}

static bool is_symmetric2(const SparseTensor& f) {
  return (f - permute_legs(f, "21")).is_zero();
}

QuasiLieBialgebra twist_qlie(const QuasiLieBialgebra& q, const SparseTensor& f) {
  if (f.legs() != 2) throw InputError("classical twist must be a 2-leg tensor");
  if (!is_antisymmetric2(f)) throw InputError("classical twist must be antisymmetric");
  const LieAlgebra& L = q.base;
  const int n = L.dim;
  QuasiLieBialgebra out = q;
  for (int i = 0; i < n; ++i) {
    SparseTensor dt = q.delta_tensor(i) + ad_diagonal(L, i + 1, f);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out.delta[i][j][k] = Rational(0);
    for (const auto& [w, coeff] : dt.terms()) {
      if (w[0] == 0 || w[1] == 0 || w[0] > n || w[1] > n)
        throw ConfigError("twisted cobracket left the Lie algebra");
      // Classical data must be constant in hbar.
      out.delta[i][w[0] - 1][w[1] - 1] = coeff.coeff(0);
    }
  }
  SparseTensor half_alt = alt(apply_delta_to_leg(q, f, 1));
  half_alt.scale(Rational(1, 2));
  out.phi = q.phi + half_alt - cyb(L, f);
  return out;
}

QuasiLieBialgebra from_invariant_pair(const LieAlgebra& L, const SparseTensor& t,
                                      int tensor_dim) {
  if (t.legs() != 2) throw InputError("invariant pair tensor must have 2 legs");
  if (!is_symmetric2(t)) throw InputError("t must be symmetric");
  if (!check_invariant(L, t).passed()) throw InputError("t must be invariant");
  QuasiLieBialgebra q = QuasiLieBialgebra::trivial(L, tensor_dim, t.order());
  SparseTensor t12 = insert_legs(t, 1, 2, 3);
  SparseTensor t23 = insert_legs(t, 2, 3, 3);
  q.phi = tensor_commutator(L, t12, t23);
  q.phi.scale(Rational(1, 4));
  return q;
}

DoubleData build_double(const QuasiLieBialgebra& q) {
  const int n = q.base.dim;
  const int order = q.order();
  if (q.tensor_dim() != n)
    throw InputError("build_double expects a structure on a plain algebra");
  DoubleData D;
  D.n = n;
  D.p = LieAlgebra::zero(2 * n);
  auto phi_coeff = [&](int i, int j, int l) { return q.phi.coeff({i + 1, j + 1, l + 1}).coeff(0); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        // [e_i, e_j] = c^k_ij e_k
        D.p.c[i][j][k] = q.base.c[i][j][k];
        // [e^i, e^j] = delta^{ij}_k e^k - phi^{ijl} e_l
        D.p.c[n + i][n + j][n + k] = q.delta[k][i][j];
        D.p.c[n + i][n + j][k] = -phi_coeff(i, j, k);
        // [e_i, e^j] = c^j_ki e^k + delta^{jl}_i e_l
        D.p.c[i][n + j][n + k] = q.base.c[k][i][j];
        D.p.c[i][n + j][k] = q.delta[i][j][k];
        // [e^i, e_j] = -c^i_kj e^k - delta^{il}_j e_l
        D.p.c[n + i][j][n + k] = -q.base.c[k][j][i];
        D.p.c[n + i][j][k] = -q.delta[j][i][k];
      }
    }

  D.omega = SparseTensor(2, n, order);
  D.f_std = SparseTensor(2, n, order);
  for (int i = 1; i <= n; ++i) {
    D.omega.add_term({i, n + i}, Rational(1));
    D.omega.add_term({n + i, i}, Rational(1));
    D.f_std.add_term({i, n + i}, Rational(1, 2));
    D.f_std.add_term({n + i, i}, Rational(-1, 2));
  }

  Report rep;
  rep.title = "double";
  rep.merge(check_jacobi(D.p));
  rep.add("omega_symmetric", is_symmetric2(D.omega));
  {
    Report inv = check_invariant(D.p, D.omega);
    rep.add("omega_invariant", inv.passed());
  }
  // Pairing invariance: <[x,y],z> + <y,[x,z]> = 0 for all basis x,y,z of p.
  auto pairing = [&](int a, int b) {
    if (a < n && b == n + a) return Rational(1);
    if (a >= n && b == a - n) return Rational(1);
    return Rational(0);
  };
  bool pairing_ok = true;
  for (int x = 0; x < 2 * n && pairing_ok; ++x)
    for (int y = 0; y < 2 * n && pairing_ok; ++y)
      for (int z = 0; z < 2 * n; ++z) {
        Rational acc(0);
        for (int m = 0; m < 2 * n; ++m) {
          acc += D.p.c[x][y][m] * pairing(m, z);
          acc += D.p.c[x][z][m] * pairing(y, m);
        }
        if (!acc.is_zero()) {
          pairing_ok = false;
          break;
        }
      }
  rep.add("pairing_invariant", pairing_ok);
  if (!rep.passed())
    throw ConfigError("double construction failed verification: " + rep.failures().front());
  D.verification = rep;
  return D;
}

Report verify_lemma_5_1(const QuasiLieBialgebra& q) {
  Report rep;
  rep.title = "lemma_sub_bialgebra";
  const int n = q.base.dim;
  DoubleData D = build_double(q);
  QuasiLieBialgebra assoc = from_invariant_pair(D.p, D.omega, n);
  QuasiLieBialgebra twisted = twist_qlie(assoc, D.f_std);

  for (int i = 0; i < n; ++i) {
    SparseTensor dt = twisted.delta_tensor(i);
    bool closed = true;
    for (const auto& [w, coeff] : dt.terms())
      if (w[0] > n || w[1] > n) {
        closed = false;
        break;
      }
    std::ostringstream cname;
    cname << "cobracket_closed_on_g(e" << i + 1 << ")";
    rep.add(cname.str(), closed);
    std::ostringstream rname;
    rname << "cobracket_restricts(e" << i + 1 << ")";
    rep.add_defect(rname.str(), dt - q.delta_tensor(i));
  }
  rep.add_defect("phi_matches", twisted.phi - q.phi);
  return rep;
}

}  // namespace qlb
