#include "qlb/pbw.hpp"

#include <algorithm>
#include <numeric>

namespace qlb {

int mono_degree(const Mono& m) { return std::accumulate(m.begin(), m.end(), 0); }
Mono mono_unit(int num_gens) { return Mono(num_gens, 0); }
bool mono_is_unit(const Mono& m) { return mono_degree(m) == 0; }

void UElement::add(const Mono& m, const HSeries& c) {
  if (c.is_zero()) return;
  auto it = terms.find(m);
  if (it == terms.end()) {
    terms.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms.erase(it);
}

void UTensor::add(const std::vector<Mono>& key, const HSeries& c) {
  if (c.is_zero()) return;
  auto it = terms.find(key);
  if (it == terms.end()) {
    terms.emplace(key, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms.erase(it);
}

UTensor UTensor::operator-() const {
  UTensor r = *this;
  for (auto& [k, c] : r.terms) c = -c;
  return r;
}

UTensor& UTensor::operator+=(const UTensor& o) {
  if (o.legs != legs || o.num_gens != num_gens) throw ConfigError("tensor shape mismatch");
  overflow = overflow || o.overflow;
  for (const auto& [k, c] : o.terms) add(k, c);
  return *this;
}

UTensor& UTensor::operator-=(const UTensor& o) {
  if (o.legs != legs || o.num_gens != num_gens) throw ConfigError("tensor shape mismatch");
  overflow = overflow || o.overflow;
  for (const auto& [k, c] : o.terms) add(k, -c);
  return *this;
}

UTensor& UTensor::scale(const HSeries& c) {
  std::map<std::vector<Mono>, HSeries> out;
  for (auto& [k, x] : terms) {
    HSeries y = x * c;
    if (!y.is_zero()) out.emplace(k, y);
  }
  terms = std::move(out);
  return *this;
}

UTensor& UTensor::scale(const Rational& c) {
  if (c.is_zero()) {
    terms.clear();
    return *this;
  }
  for (auto& [k, x] : terms) x.scale(c);
  return *this;
}

EnvelopingAlgebra::EnvelopingAlgebra(LieAlgebra L, int g_block, int order)
    : L_(std::move(L)), ng_(g_block), order_(order) {
  if (ng_ < 0 || ng_ > L_.dim) throw ConfigError("invalid g block size");
  if (!L_.antisymmetric()) throw InputError("structure constants not antisymmetric");
}

bool EnvelopingAlgebra::is_sorted_word(const GenWord& w) const {
  for (size_t i = 1; i < w.size(); ++i)
    if (w[i - 1] > w[i]) return false;
  return true;
}

const std::map<GenWord, Rational>& EnvelopingAlgebra::straighten(const GenWord& w) const {
  auto it = straighten_memo_.find(w);
  if (it != straighten_memo_.end()) return it->second;

  std::map<GenWord, Rational> out;
  if (is_sorted_word(w)) {
    out.emplace(w, Rational(1));
  } else {
    size_t pos = 0;
    while (w[pos] <= w[pos + 1]) ++pos;  // leftmost inversion
    GenWord swapped = w;
    std::swap(swapped[pos], swapped[pos + 1]);
    out = straighten(swapped);  // copy
    // bracket term [w[pos], w[pos+1]]
    int a = w[pos], b = w[pos + 1];
    for (int k = 0; k < L_.dim; ++k) {
      const Rational& ck = L_.c[a][b][k];
      if (ck.is_zero()) continue;
      GenWord br;
      br.reserve(w.size() - 1);
      br.insert(br.end(), w.begin(), w.begin() + pos);
      br.push_back(k);
      br.insert(br.end(), w.begin() + pos + 2, w.end());
      for (const auto& [bw, bc] : straighten(br)) {
        Rational& slot = out[bw];
        slot += ck * bc;
        if (slot.is_zero()) out.erase(bw);
      }
    }
  }
  return straighten_memo_.emplace(w, std::move(out)).first->second;
}

EnvelopingAlgebra::WordPoly EnvelopingAlgebra::sigma_expand(const Mono& kappa) const {
  // Average over all orderings: each distinct arrangement of the multiset
  // appears with weight (prod kappa_i!)/|kappa|!.
  GenWord letters;
  for (int g = ng_; g < L_.dim; ++g)
    for (int r = 0; r < kappa[g]; ++r) letters.push_back(g);
  Rational weight(1);
  for (int g = ng_; g < L_.dim; ++g) weight *= Rational::factorial(kappa[g]);
  weight /= Rational::factorial(static_cast<unsigned>(letters.size()));
  WordPoly out;
  std::sort(letters.begin(), letters.end());
  do {
    out.emplace_back(letters, weight);
  } while (std::next_permutation(letters.begin(), letters.end()));
  return out;
}

EnvelopingAlgebra::WordPoly EnvelopingAlgebra::basis_words(const Mono& m) const {
  Mono kappa = mono_unit(L_.dim);
  GenWord gpart;
  for (int g = 0; g < ng_; ++g)
    for (int r = 0; r < m[g]; ++r) gpart.push_back(g);
  for (int g = ng_; g < L_.dim; ++g) kappa[g] = m[g];
  WordPoly stars = sigma_expand(kappa);
  WordPoly out;
  out.reserve(stars.size());
  for (auto& [w, c] : stars) {
    GenWord full = gpart;
    full.insert(full.end(), w.begin(), w.end());
    out.emplace_back(std::move(full), c);
  }
  return out;
}

static Mono word_to_mono(const GenWord& sorted, int num_gens) {
  Mono m(num_gens, 0);
  for (int g : sorted) ++m[g];
  return m;
}

const EnvelopingAlgebra::LinRat& EnvelopingAlgebra::ordered_to_basis(
    const GenWord& w) const {
  auto it = ordered_memo_.find(w);
  if (it != ordered_memo_.end()) return it->second;

  Mono target = word_to_mono(w, L_.dim);
  std::map<Mono, Rational> acc;
  acc.emplace(target, Rational(1));

  // B(target) expands as w + lower-degree ordered words; subtract those.
  int star_deg = 0;
  for (int g = ng_; g < L_.dim; ++g) star_deg += target[g];
  if (star_deg > 1) {
    Rational top(0);
    std::map<GenWord, Rational> lower;
    for (const auto& [bw, bc] : basis_words(target)) {
      for (const auto& [ow, oc] : straighten(bw)) {
        if (ow == w) {
          top += bc * oc;
          continue;
        }
        Rational& slot = lower[ow];
        slot += bc * oc;
        if (slot.is_zero()) lower.erase(ow);
      }
    }
    if (!top.is_one()) throw ConfigError("PBW change of basis lost the top term");
    for (const auto& [ow, oc] : lower)
      for (const auto& [bm, bmc] : ordered_to_basis(ow)) {
        Rational& slot = acc[bm];
        slot -= oc * bmc;
        if (slot.is_zero()) acc.erase(bm);
      }
  }
  LinRat out(acc.begin(), acc.end());
  return ordered_memo_.emplace(w, std::move(out)).first->second;
}

const EnvelopingAlgebra::LinRat& EnvelopingAlgebra::word_to_basis(const GenWord& w) const {
  auto it = word_basis_memo_.find(w);
  if (it != word_basis_memo_.end()) return it->second;
  std::map<Mono, Rational> acc;
  for (const auto& [ow, oc] : straighten(w))
    for (const auto& [m, mc] : ordered_to_basis(ow)) {
      Rational& slot = acc[m];
      slot += oc * mc;
      if (slot.is_zero()) acc.erase(m);
    }
  LinRat out(acc.begin(), acc.end());
  return word_basis_memo_.emplace(w, std::move(out)).first->second;
}

const EnvelopingAlgebra::LinRat& EnvelopingAlgebra::mono_product(const Mono& a,
                                                                 const Mono& b) const {
  auto key = std::make_pair(a, b);
  auto it = product_memo_.find(key);
  if (it != product_memo_.end()) return it->second;
  std::map<Mono, Rational> acc;
  for (const auto& [wa, ca] : basis_words(a))
    for (const auto& [wb, cb] : basis_words(b)) {
      GenWord w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      Rational c = ca * cb;
      for (const auto& [m, mc] : word_to_basis(w)) {
        Rational& slot = acc[m];
        slot += c * mc;
        if (slot.is_zero()) acc.erase(m);
      }
    }
  LinRat out(acc.begin(), acc.end());
  return product_memo_.emplace(std::move(key), std::move(out)).first->second;
}

UElement EnvelopingAlgebra::u_element(int deg_cap) const {
  UElement e;
  e.num_gens = L_.dim;
  e.deg_cap = deg_cap;
  return e;
}

UTensor EnvelopingAlgebra::u_tensor(int legs, int deg_cap) const {
  UTensor t;
  t.legs = legs;
  t.num_gens = L_.dim;
  t.deg_cap = deg_cap;
  return t;
}

UTensor EnvelopingAlgebra::unit_tensor(int legs, int deg_cap) const {
  UTensor t = u_tensor(legs, deg_cap);
  t.add(std::vector<Mono>(legs, mono_unit(L_.dim)), HSeries::one(order_));
  return t;
}

UElement EnvelopingAlgebra::multiply(const UElement& a, const UElement& b) const {
  if (a.deg_cap != b.deg_cap) throw ConfigError("mismatched truncation degrees");
  UElement r = u_element(a.deg_cap);
  r.overflow = a.overflow || b.overflow;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      HSeries c = ca * cb;
      if (c.is_zero()) continue;
      for (const auto& [m, mc] : mono_product(ma, mb)) {
        if (mono_degree(m) > r.deg_cap) {
          r.overflow = true;
          continue;
        }
        HSeries hc = c;
        hc.scale(mc);
        r.add(m, hc);
      }
    }
  return r;
}

UTensor EnvelopingAlgebra::multiply(const UTensor& a, const UTensor& b) const {
  if (a.legs != b.legs) throw ConfigError("tensor legs mismatch");
  if (a.deg_cap != b.deg_cap) throw ConfigError("mismatched truncation degrees");
  UTensor r = u_tensor(a.legs, a.deg_cap);
  r.overflow = a.overflow || b.overflow;
  std::vector<Mono> key(a.legs);
  for (const auto& [ka, ca] : a.terms)
    for (const auto& [kb, cb] : b.terms) {
      HSeries c = ca * cb;
      if (c.is_zero()) continue;
      // multiply leg-wise, expanding products one leg at a time
      std::vector<std::pair<std::vector<Mono>, Rational>> partial;
      partial.emplace_back(std::vector<Mono>{}, Rational(1));
      bool dead = false;
      for (int leg = 0; leg < a.legs && !dead; ++leg) {
        std::vector<std::pair<std::vector<Mono>, Rational>> next;
        const auto& prod = mono_product(ka[leg], kb[leg]);
        if (prod.empty()) {
          dead = true;
          break;
        }
        for (const auto& [key0, c0] : partial)
          for (const auto& [m, mc] : prod) {
            if (mono_degree(m) > r.deg_cap) {
              r.overflow = true;
              continue;
            }
            auto k2 = key0;
            k2.push_back(m);
            next.emplace_back(std::move(k2), c0 * mc);
          }
        partial = std::move(next);
      }
      if (dead) continue;
      for (const auto& [k2, c2] : partial) {
        HSeries hc = c;
        hc.scale(c2);
        r.add(k2, hc);
      }
    }
  return r;
}

UTensor EnvelopingAlgebra::coproduct_leg(const UTensor& t, int leg) const {
  if (leg < 1 || leg > t.legs) throw ConfigError("coproduct leg out of range");
  UTensor r = u_tensor(t.legs + 1, t.deg_cap);
  r.overflow = t.overflow;
  for (const auto& [k, c] : t.terms) {
    const Mono& m = k[leg - 1];
    // Delta(B(alpha,kappa)) = sum binom(alpha,beta) binom(kappa,lambda)
    //   B(beta,lambda) (x) B(alpha-beta, kappa-lambda); closed form here.
    Mono left = mono_unit(L_.dim);
    std::vector<std::pair<Mono, Mono>> splits;
    std::vector<Rational> weights;
    // enumerate sub-multi-indices of m
    std::vector<int> cur(L_.dim, 0);
    while (true) {
      Mono right(L_.dim);
      Rational w(1);
      for (int g = 0; g < L_.dim; ++g) {
        right[g] = m[g] - cur[g];
        w *= Rational::binomial(static_cast<unsigned>(m[g]), static_cast<unsigned>(cur[g]));
      }
      splits.emplace_back(cur, right);
      weights.push_back(w);
      // increment odometer
      int g = 0;
      while (g < L_.dim) {
        if (cur[g] < m[g]) {
          ++cur[g];
          break;
        }
        cur[g] = 0;
        ++g;
      }
      if (g == L_.dim) break;
    }
    for (size_t s = 0; s < splits.size(); ++s) {
      std::vector<Mono> key;
      key.reserve(t.legs + 1);
      for (int j = 0; j < leg - 1; ++j) key.push_back(k[j]);
      key.push_back(splits[s].first);
      key.push_back(splits[s].second);
      for (int j = leg; j < t.legs; ++j) key.push_back(k[j]);
      HSeries hc = c;
      hc.scale(weights[s]);
      r.add(key, hc);
    }
  }
  return r;
}

UTensor EnvelopingAlgebra::u_coproduct(const UElement& a) const {
  UTensor t = u_tensor(1, a.deg_cap);
  t.overflow = a.overflow;
  for (const auto& [m, c] : a.terms) t.add({m}, c);
  return coproduct_leg(t, 1);
}

UTensor EnvelopingAlgebra::counit_leg(const UTensor& t, int leg) const {
  if (leg < 1 || leg > t.legs) throw ConfigError("counit leg out of range");
  UTensor r = u_tensor(t.legs - 1, t.deg_cap);
  r.overflow = t.overflow;
  for (const auto& [k, c] : t.terms) {
    if (!mono_is_unit(k[leg - 1])) continue;
    std::vector<Mono> key;
    key.reserve(t.legs - 1);
    for (int j = 0; j < t.legs; ++j)
      if (j != leg - 1) key.push_back(k[j]);
    r.add(key, c);
  }
  return r;
}

HSeries EnvelopingAlgebra::u_counit(const UElement& a) const {
  auto it = a.terms.find(mono_unit(L_.dim));
  return it == a.terms.end() ? HSeries::zero(order_) : it->second;
}

UElement EnvelopingAlgebra::symmetrize_sigma(const Mono& kappa, int deg_cap) const {
  for (int g = 0; g < ng_; ++g)
    if (kappa[g] != 0) throw ConfigError("sigma input must live in the star block");
  UElement e = u_element(deg_cap);
  if (mono_degree(kappa) > deg_cap) {
    e.overflow = true;
    return e;
  }
  e.add(kappa, HSeries::one(order_));
  return e;
}

UElement EnvelopingAlgebra::f0_projection(const UElement& a) const {
  UElement e = u_element(a.deg_cap);
  e.overflow = a.overflow;
  for (const auto& [m, c] : a.terms) {
    bool star_free = true;
    for (int g = ng_; g < L_.dim; ++g)
      if (m[g] != 0) {
        star_free = false;
        break;
      }
    if (star_free) e.add(m, c);
  }
  return e;
}

UTensor EnvelopingAlgebra::permute(const UTensor& t, const std::vector<int>& sigma) const {
  if (static_cast<int>(sigma.size()) != t.legs) throw ConfigError("permutation size != legs");
  UTensor r = u_tensor(t.legs, t.deg_cap);
  r.overflow = t.overflow;
  for (const auto& [k, c] : t.terms) {
    std::vector<Mono> key(t.legs);
    for (int j = 0; j < t.legs; ++j) key[sigma[j] - 1] = k[j];
    r.add(key, c);
  }
  return r;
}

UTensor EnvelopingAlgebra::permute(const UTensor& t, const std::string& digits) const {
  std::vector<int> sigma;
  for (char ch : digits) sigma.push_back(ch - '0');
  return permute(t, sigma);
}

UTensor EnvelopingAlgebra::insert(const UTensor& t, int i, int j, int k) const {
  if (t.legs != 2) throw ConfigError("insert expects a 2-leg tensor");
  if (!(1 <= i && i < j && j <= k)) throw ConfigError("insert positions out of range");
  UTensor r = u_tensor(k, t.deg_cap);
  r.overflow = t.overflow;
  for (const auto& [key2, c] : t.terms) {
    std::vector<Mono> key(k, mono_unit(L_.dim));
    key[i - 1] = key2[0];
    key[j - 1] = key2[1];
    r.add(key, c);
  }
  return r;
}

UTensor EnvelopingAlgebra::pad_left(const UTensor& t) const {
  UTensor r = u_tensor(t.legs + 1, t.deg_cap);
  r.overflow = t.overflow;
  for (const auto& [k, c] : t.terms) {
    std::vector<Mono> key;
    key.reserve(t.legs + 1);
    key.push_back(mono_unit(L_.dim));
    key.insert(key.end(), k.begin(), k.end());
    r.add(key, c);
  }
  return r;
}

UTensor EnvelopingAlgebra::pad_right(const UTensor& t) const {
  UTensor r = u_tensor(t.legs + 1, t.deg_cap);
  r.overflow = t.overflow;
  for (const auto& [k, c] : t.terms) {
    std::vector<Mono> key = k;
    key.push_back(mono_unit(L_.dim));
    r.add(key, c);
  }
  return r;
}

UTensor EnvelopingAlgebra::inverse(const UTensor& t) const {
  UTensor u = unit_tensor(t.legs, t.deg_cap);
  u -= t;
  for (const auto& [k, c] : u.terms)
    if (c.valuation() < 1)
      throw NotInvertible("tensor constant term is not the unit");
  UTensor acc = unit_tensor(t.legs, t.deg_cap);
  UTensor pw = unit_tensor(t.legs, t.deg_cap);
  for (int k = 1; k < order_; ++k) {
    pw = multiply(pw, u);
    if (pw.is_zero()) break;
    acc += pw;
  }
  acc.overflow = acc.overflow || t.overflow;
  return acc;
}

UTensor EnvelopingAlgebra::exp(const UTensor& t) const {
  for (const auto& [k, c] : t.terms)
    if (c.valuation() < 1)
      throw ConfigError("exp needs a tensor vanishing at hbar^0");
  UTensor acc = unit_tensor(t.legs, t.deg_cap);
  UTensor pw = unit_tensor(t.legs, t.deg_cap);
  for (int k = 1; k < order_; ++k) {
    pw = multiply(pw, t);
    if (pw.is_zero()) break;
    UTensor term = pw;
    term.scale(Rational::factorial(k).inverse());
    acc += term;
  }
  acc.overflow = acc.overflow || t.overflow;
  return acc;
}

UTensor EnvelopingAlgebra::from_sparse(const SparseTensor& t, int deg_cap) const {
  UTensor r = u_tensor(t.legs(), deg_cap);
  for (const auto& [w, c] : t.terms()) {
    std::vector<Mono> key;
    key.reserve(w.size());
    for (int letter : w) {
      Mono m = mono_unit(L_.dim);
      if (letter > 0) {
        if (letter > L_.dim) throw ConfigError("letter outside the algebra");
        m[letter - 1] = 1;
      }
      key.push_back(std::move(m));
    }
    r.add(key, c);
  }
  return r;
}

SparseTensor EnvelopingAlgebra::to_sparse(const UTensor& t, int tensor_dim) const {
  SparseTensor r(t.legs, tensor_dim, order_);
  for (const auto& [k, c] : t.terms) {
    Word w(t.legs, 0);
    for (int leg = 0; leg < t.legs; ++leg) {
      int deg = mono_degree(k[leg]);
      if (deg == 0) continue;
      if (deg > 1) throw ConfigError("tensor has degree >= 2 legs; not a Lie-layer tensor");
      for (int g = 0; g < L_.dim; ++g)
        if (k[leg][g] == 1) w[leg] = g + 1;
    }
    r.add_term(w, c);
  }
  return r;
}

long pbw_dimension(int gens, int d) {
  // C(gens + d, d)
  long acc = 1;
  for (int i = 1; i <= d; ++i) acc = acc * (gens + i) / i;
  return acc;
}

}  // namespace qlb
