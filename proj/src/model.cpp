#include "qlb/model.hpp"

#include <sstream>

namespace qlb {

void svec_add(SVec& acc, const SVec& v, const HSeries& scale) {
  // acc and v sorted; merge into a map-backed accumulator only at call sites
  // that loop; here a simple merge is enough since vectors are short.
  SVec out;
  out.reserve(acc.size() + v.size());
  size_t i = 0, j = 0;
  while (i < acc.size() || j < v.size()) {
    if (j >= v.size() || (i < acc.size() && acc[i].first < v[j].first)) {
      out.push_back(acc[i++]);
    } else if (i >= acc.size() || v[j].first < acc[i].first) {
      HSeries c = v[j].second * scale;
      if (!c.is_zero()) out.emplace_back(v[j].first, c);
      ++j;
    } else {
      HSeries c = acc[i].second + v[j].second * scale;
      if (!c.is_zero()) out.emplace_back(acc[i].first, c);
      ++i;
      ++j;
    }
  }
  acc = std::move(out);
}

SVec svec_flatten(std::map<long long, HSeries>&& acc) {
  SVec out;
  out.reserve(acc.size());
  for (auto& [i, c] : acc)
    if (!c.is_zero()) out.emplace_back(i, std::move(c));
  return out;
}

MIndexSet MIndexSet::make(int vars, int maxdeg) {
  MIndexSet s;
  s.vars = vars;
  s.maxdeg = maxdeg;
  // graded enumeration: degree first, then lexicographic
  Mono cur(vars, 0);
  for (int d = 0; d <= maxdeg; ++d) {
    // enumerate compositions of d into `vars` parts
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == vars - 1) {
        cur[pos] = left;
        s.index.emplace(cur, static_cast<int>(s.list.size()));
        s.list.push_back(cur);
        return;
      }
      for (int v = left; v >= 0; --v) {
        cur[pos] = v;
        rec(pos + 1, left - v);
      }
    };
    if (vars == 0) {
      if (d == 0) {
        s.index.emplace(Mono{}, 0);
        s.list.push_back(Mono{});
      }
      continue;
    }
    rec(0, d);
  }
  return s;
}

namespace {

Rational multi_factorial(const Mono& m) {
  Rational r(1);
  for (int e : m) r *= Rational::factorial(e);
  return r;
}

/// star multi-index over n vars -> full U(p) monomial over 2n generators
Mono star_embed(const Mono& kappa, int n) {
  Mono m(2 * n, 0);
  for (int i = 0; i < n; ++i) m[n + i] = kappa[i];
  return m;
}

Mono g_embed(const Mono& zeta, int n) {
  Mono m(2 * n, 0);
  for (int i = 0; i < n; ++i) m[i] = zeta[i];
  return m;
}

}  // namespace

TruncModel::TruncModel(const QuasiLieBialgebra& q, const ModelParams& params,
                       const FreeSeries& associator)
    : q_(q), params_(params), n_(q.base.dim) {
  if (params_.order < 1) throw ConfigError("order must be positive");
  Report axioms = check_quasi_lie(q_);
  if (!axioms.passed())
    throw InputError("input fails the quasi-Lie axioms: " + axioms.failures().front());
  double_ = build_double(q_);
  up_ = std::make_shared<EnvelopingAlgebra>(double_.p, n_, params_.order);
  ug_ = MIndexSet::make(n_, params_.degU);
  a_ = MIndexSet::make(n_, params_.degA);

  report_.title = "model";
  build_action_tables();
  verify_action_tables();
  build_iota();

  const int tensor_cap = params_.degU + params_.degA;
  SparseTensor omega = double_.omega;
  // re-key omega to the session order
  SparseTensor omega_n(2, n_, params_.order);
  for (const auto& [w, c] : omega.terms()) omega_n.add_term(w, c.coeff(0));
  phi_p_ = substitute(*up_, associator, omega_n, tensor_cap);
  phi_p_inv_ = up_->inverse(phi_p_);
  r_p_ = r_matrix(*up_, omega_n, tensor_cap);
  r_p_inv_ = up_->inverse(r_p_);
}

int TruncModel::atom_star_grade(Atom a, long long i) const {
  return a == Atom::Q ? a_.grade(q_star(i)) : a_.grade(static_cast<int>(i));
}

int TruncModel::atom_ug_grade(Atom a, long long i) const {
  return a == Atom::Q ? ug_.grade(q_ug(i)) : 0;
}

void TruncModel::build_action_tables() {
  const int gens = 2 * n_;
  actA_.assign(gens, RMat(a_.dim()));
  actQ_.assign(gens, RMat(dimQ()));
  ovA_.assign(gens, std::vector<bool>(a_.dim(), false));
  ovQ_.assign(gens, std::vector<bool>(dimQ(), false));

  // One extra level of evaluation arguments: components of the true action
  // at |kappa| = degA + 1 exist iff something was cut (they are the only
  // out-of-window components a further generator action can bring back).
  MIndexSet a_probe = MIndexSet::make(n_, params_.degA + 1);

  for (int w = 0; w < gens; ++w) {
    Mono wmono(2 * n_, 0);
    wmono[w] = 1;
    for (int kidx = 0; kidx < a_probe.dim(); ++kidx) {
      const Mono& kappa = a_probe.list[kidx];
      const bool probe_level = mono_degree(kappa) > params_.degA;
      Rational kfact_inv = multi_factorial(kappa).inverse();
      const auto& prod = up_->mono_product(star_embed(kappa, n_), wmono);
      for (const auto& [pm, pc] : prod) {
        // split pm into g part alpha and star part lambda
        Mono alpha(n_), lambda(n_);
        for (int i = 0; i < n_; ++i) {
          alpha[i] = pm[i];
          lambda[i] = pm[n_ + i];
        }
        auto lit = a_.index.find(lambda);
        if (lit == a_.index.end()) continue;  // a column we do not carry
        int m_idx = lit->second;
        Rational base = multi_factorial(lambda) * kfact_inv * pc;
        if (mono_degree(alpha) == 0 && probe_level) {
          ovA_[w][m_idx] = true;
        } else if (mono_degree(alpha) == 0) {
          actA_[w][m_idx].emplace_back(kidx, base);
        }
        // contributes to the Q action for every U(g) coefficient z
        const auto& alpha_full = g_embed(alpha, n_);
        for (int z = 0; z < ug_.dim(); ++z) {
          const auto& zprod = up_->mono_product(alpha_full, g_embed(ug_.list[z], n_));
          for (const auto& [zm, zc] : zprod) {
            Mono zeta(n_);
            bool pure = true;
            for (int i = 0; i < n_; ++i) {
              zeta[i] = zm[i];
              if (zm[n_ + i] != 0) pure = false;
            }
            if (!pure) throw ConfigError("g-block product left U(g)");
            auto zit = ug_.index.find(zeta);
            if (zit == ug_.index.end()) {
              ovQ_[w][q_index(z, m_idx)] = true;  // cut in the U(g) direction
              continue;
            }
            if (probe_level)
              ovQ_[w][q_index(z, m_idx)] = true;
            else
              actQ_[w][q_index(z, m_idx)].emplace_back(q_index(zit->second, kidx),
                                                       base * zc);
          }
        }
      }
    }
    // normalize columns: sort, merge duplicates
    auto tidy = [](RMat& M) {
      for (auto& col : M) {
        std::sort(col.begin(), col.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        RCol merged;
        for (auto& [i, c] : col) {
          if (!merged.empty() && merged.back().first == i)
            merged.back().second += c;
          else
            merged.emplace_back(i, c);
        }
        merged.erase(std::remove_if(merged.begin(), merged.end(),
                                    [](const auto& e) { return e.second.is_zero(); }),
                     merged.end());
        col = std::move(merged);
      }
    };
    tidy(actA_[w]);
    tidy(actQ_[w]);
  }
}

namespace {

RCol apply_rmat(const RMat& M, const RCol& v) {
  std::map<long long, Rational> acc;
  for (const auto& [i, c] : v)
    for (const auto& [j, mc] : M[i]) {
      Rational& slot = acc[j];
      slot += c * mc;
    }
  RCol out;
  for (auto& [j, c] : acc)
    if (!c.is_zero()) out.emplace_back(j, c);
  return out;
}

}  // namespace

void TruncModel::verify_action_tables() {
  // action([x,y]) = action(x)action(y) - action(y)action(x), checked on every
  // column whose evaluation never left the carrier (no overflow anywhere in
  // the composite); there the truncated matrices agree with the true action
  // on all carried rows.
  const int gens = 2 * n_;
  long long defects = 0, checked = 0, skipped = 0;
  for (Atom atom : {Atom::A, Atom::Q}) {
    const auto& tables = atom == Atom::A ? actA_ : actQ_;
    const auto& flags = atom == Atom::A ? ovA_ : ovQ_;
    long long dim = dim_atom(atom);
    for (int x = 0; x < gens; ++x)
      for (int y = x + 1; y < gens; ++y) {
        for (long long col = 0; col < dim; ++col) {
          bool masked = flags[x][col] || flags[y][col];
          for (int k = 0; k < gens && !masked; ++k)
            if (!double_.p.c[x][y][k].is_zero() && flags[k][col]) masked = true;
          for (const auto& [i, c] : tables[y][col])
            if (flags[x][i]) masked = true;
          for (const auto& [i, c] : tables[x][col])
            if (flags[y][i]) masked = true;
          if (masked) {
            ++skipped;
            continue;
          }
          ++checked;
          std::map<long long, Rational> acc;
          for (const auto& [i, c] : tables[y][col])
            for (const auto& [j, mc] : tables[x][i]) acc[j] += c * mc;
          for (const auto& [i, c] : tables[x][col])
            for (const auto& [j, mc] : tables[y][i]) acc[j] -= c * mc;
          for (int k = 0; k < gens; ++k) {
            const Rational& ck = double_.p.c[x][y][k];
            if (ck.is_zero()) continue;
            for (const auto& [j, mc] : tables[k][col]) acc[j] -= ck * mc;
          }
          for (const auto& [j, c] : acc)
            if (!c.is_zero()) ++defects;
        }
      }
  }
  std::ostringstream detail;
  detail << defects << " defects on " << checked << " fully in-window columns ("
         << skipped << " masked by overflow)";
  report_.add("action_bracket_relations", defects == 0 && checked > 0, detail.str());
  if (defects != 0)
    throw ConfigError("action tables violate the bracket relations on the window");
}

bool TruncModel::act_overflow(Atom a, int gen, long long i) const {
  return a == Atom::Q ? ovQ_[gen][i] : ovA_[gen][i];
}

void TruncModel::build_iota() {
  // iota(e^zeta) = e^zeta acting on s0 (g-part action only).
  iota_.assign(ug_.dim(), RCol{});
  for (int z = 0; z < ug_.dim(); ++z) {
    RCol v{{s0_index(), Rational(1)}};
    const Mono& zeta = ug_.list[z];
    // word e_1^{a1} e_2^{a2} ...: rightmost letter acts first
    for (int g = n_ - 1; g >= 0; --g)
      for (int r = 0; r < zeta[g]; ++r) v = apply_rmat(actQ_[g], v);
    iota_[z] = std::move(v);
  }
  // pi(iota(z)) = z sanity
  for (int z = 0; z < ug_.dim(); ++z) {
    bool ok = false;
    for (const auto& [i, c] : iota_[z])
      if (q_star(i) == 0) {
        ok = (q_ug(i) == z) && c.is_one();
        if (!ok) break;
      }
    if (!ok) throw ConfigError("pi . iota != id in the model");
  }
  report_.add("pi_iota_identity", true);
}

const RMat& TruncModel::act(Atom a, int gen) const {
  return a == Atom::Q ? actQ_[gen] : actA_[gen];
}

const RMat& TruncModel::act_mono(Atom a, const Mono& m) const {
  auto& cache = a == Atom::Q ? actQ_mono_ : actA_mono_;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;

  long long dim = dim_atom(a);
  RMat M(dim);
  // act(B(alpha,kappa)) = act(e_1)^a1 ... act(e_n)^an . act(sigma(kappa));
  // build by column via basis_words
  for (long long col = 0; col < dim; ++col) {
    std::map<long long, Rational> acc;
    for (const auto& [w, c] : up_->basis_words(m)) {
      RCol v{{col, Rational(1)}};
      for (auto itr = w.rbegin(); itr != w.rend(); ++itr) v = apply_rmat(act(a, *itr), v);
      for (const auto& [i, vc] : v) acc[i] += c * vc;
    }
    RCol out;
    for (auto& [i, c] : acc)
      if (!c.is_zero()) out.emplace_back(i, c);
    M[col] = std::move(out);
  }
  return cache.emplace(m, std::move(M)).first->second;
}

std::vector<long long> TruncModel::dims_of(const Obj& obj) const {
  std::vector<long long> d;
  d.reserve(obj.size());
  for (Atom a : obj) d.push_back(dim_atom(a));
  return d;
}

long long TruncModel::total_dim(const Obj& obj) const {
  long long t = 1;
  for (Atom a : obj) t *= dim_atom(a);
  return t;
}

SVec TruncModel::act_gen_diag(const Obj& obj, int gen, const SVec& v) const {
  auto dims = dims_of(obj);
  std::vector<long long> strides(obj.size(), 1);
  for (int i = static_cast<int>(obj.size()) - 2; i >= 0; --i)
    strides[i] = strides[i + 1] * dims[i + 1];
  std::map<long long, HSeries> acc;
  for (const auto& [idx, c] : v) {
    for (size_t atom = 0; atom < obj.size(); ++atom) {
      long long local = (idx / strides[atom]) % dims[atom];
      long long base = idx - local * strides[atom];
      for (const auto& [j, mc] : act(obj[atom], gen)[local]) {
        HSeries hc = c;
        hc.scale(mc);
        auto [it, fresh] = acc.try_emplace(base + j * strides[atom], hc);
        if (!fresh) it->second += hc;
      }
    }
  }
  return svec_flatten(std::move(acc));
}

SVec TruncModel::act_sigma(const Obj& obj, const Mono& kappa, const SVec& v) const {
  // sigma(y^k) v = (1/|k|) sum_i k_i e^{(i)} (sigma(y^{k-1_i}) v)
  int deg = mono_degree(kappa);
  if (deg == 0) return v;
  std::map<long long, HSeries> acc;
  Mono k2 = kappa;
  for (int i = 0; i < n_; ++i) {
    if (kappa[i] == 0) continue;
    --k2[i];
    SVec inner = act_sigma(obj, k2, v);
    ++k2[i];
    SVec outer = act_gen_diag(obj, n_ + i, inner);
    Rational w(kappa[i], deg);
    for (const auto& [idx, c] : outer) {
      HSeries hc = c;
      hc.scale(w);
      auto [it, fresh] = acc.try_emplace(idx, hc);
      if (!fresh) it->second += hc;
    }
  }
  return svec_flatten(std::move(acc));
}

}  // namespace qlb
