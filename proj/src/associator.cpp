#include "qlb/associator.hpp"

namespace qlb {

Rational FreeSeries::coeff(const std::string& w) const {
  auto it = terms.find(w);
  return it == terms.end() ? Rational(0) : it->second;
}

void FreeSeries::add(const std::string& w, const Rational& c) {
  if (c.is_zero()) return;
  auto it = terms.find(w);
  if (it == terms.end()) {
    terms.emplace(w, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms.erase(it);
}

bool is_group_like(const FreeSeries& s) {
  // Delta(word) = prod over letters of (l (x) 1 + 1 (x) l): the coefficient
  // of (u, v) in Delta(w) is the number of shuffle splittings of w into u,v.
  std::map<std::pair<std::string, std::string>, Rational> lhs, rhs;
  for (const auto& [w, c] : s.terms) {
    const int n = static_cast<int>(w.size());
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::string u, v;
      for (int i = 0; i < n; ++i)
        (mask >> i & 1u ? u : v) += w[i];
      auto key = std::make_pair(u, v);
      auto it = lhs.find(key);
      if (it == lhs.end())
        lhs.emplace(key, c);
      else {
        it->second += c;
        if (it->second.is_zero()) lhs.erase(it);
      }
    }
  }
  for (const auto& [u, cu] : s.terms)
    for (const auto& [v, cv] : s.terms) {
      if (static_cast<int>(u.size() + v.size()) > s.max_degree) continue;
      auto key = std::make_pair(u, v);
      auto it = rhs.find(key);
      Rational c = cu * cv;
      if (it == rhs.end())
        rhs.emplace(key, c);
      else {
        it->second += c;
        if (it->second.is_zero()) rhs.erase(it);
      }
    }
  // compare up to total degree max_degree
  for (const auto& [k, c] : lhs) {
    if (static_cast<int>(k.first.size() + k.second.size()) > s.max_degree) continue;
    auto it = rhs.find(k);
    if (it == rhs.end() || it->second != c) return false;
    rhs.erase(it);
  }
  for (const auto& [k, c] : rhs)
    if (static_cast<int>(k.first.size() + k.second.size()) <= s.max_degree) return false;
  return true;
}

FreeSeries rational_associator(int max_degree) {
  if (max_degree >= 3)
    throw UnsupportedDegree(
        "no built-in associator beyond degree 2 (degree-3 coefficients are "
        "irrational); supply a coefficient table");
  FreeSeries s;
  s.max_degree = max_degree;
  s.add("", Rational(1));
  if (max_degree >= 2) {
    s.add("XY", Rational(1, 24));
    s.add("YX", Rational(-1, 24));
  }
  return s;
}

FreeSeries associator_from_table(int max_degree,
                                 const std::map<std::string, Rational>& table) {
  FreeSeries s;
  s.max_degree = max_degree;
  s.add("", Rational(1));
  for (const auto& [w, c] : table) {
    for (char ch : w)
      if (ch != 'X' && ch != 'Y') throw InputError("associator words use letters X and Y");
    if (static_cast<int>(w.size()) > max_degree)
      throw InputError("associator word exceeds the declared degree");
    if (w.empty()) throw InputError("the associator constant term is fixed to 1");
    s.add(w, c);
  }
  if (s.coeff("X") != Rational(0) || s.coeff("Y") != Rational(0))
    throw InputError("an associator has no degree-1 terms");
  if (!is_group_like(s)) throw InputError("associator table is not group-like");
  return s;
}

UTensor substitute(const EnvelopingAlgebra& A, const FreeSeries& phi,
                   const SparseTensor& t, int deg_cap) {
  UTensor t12 = A.insert(A.from_sparse(t, deg_cap), 1, 2, 3);
  UTensor t23 = A.insert(A.from_sparse(t, deg_cap), 2, 3, 3);
  UTensor out = A.u_tensor(3, deg_cap);
  for (const auto& [w, c] : phi.terms) {
    const unsigned len = static_cast<unsigned>(w.size());
    if (static_cast<int>(len) >= A.order()) continue;  // h^len = 0
    UTensor prod = A.unit_tensor(3, deg_cap);
    for (char ch : w) prod = A.multiply(prod, ch == 'X' ? t12 : t23);
    prod.scale(HSeries::monomial(A.order(), len, c));
    out += prod;
  }
  return out;
}

UTensor r_matrix(const EnvelopingAlgebra& A, const SparseTensor& t, int deg_cap) {
  UTensor ht = A.from_sparse(t, deg_cap);
  ht.scale(HSeries::monomial(A.order(), 1, Rational(1, 2)));
  return A.exp(ht);
}

QuasiBialgebra drinfeld_quantize(std::shared_ptr<const EnvelopingAlgebra> A,
                                 const SparseTensor& t, int deg_cap, int tensor_dim,
                                 const FreeSeries& phi_series) {
  if (!(t - permute_legs(t, "21")).is_zero()) throw InputError("t must be symmetric");
  if (!check_invariant(A->algebra(), t).passed()) throw InputError("t must be invariant");
  QuasiBialgebra B = undeformed_bialgebra(A, deg_cap, tensor_dim);
  B.phi = substitute(*A, phi_series, t, deg_cap);
  B.R = r_matrix(*A, t, deg_cap);
  return B;
}

}  // namespace qlb
