#pragma once

#include <functional>
#include <memory>

#include "qlb/associator.hpp"
#include "qlb/quasibialg.hpp"

namespace qlb {

/// Sparse vector over a carrier, sorted by index.
using SVec = std::vector<std::pair<long long, HSeries>>;
/// Sparse rational matrix, column major.
using RCol = std::vector<std::pair<long long, Rational>>;
using RMat = std::vector<RCol>;

void svec_add(SVec& acc, const SVec& v, const HSeries& scale);
SVec svec_flatten(std::map<long long, HSeries>&& acc);

enum class Atom { Q, A };
using Obj = std::vector<Atom>;

struct ModelParams {
  int order = 3;
  int degU = 4;
  int degA = 4;
};

/// Graded multi-index set {m : |m| <= maxdeg} over `vars` variables.
struct MIndexSet {
  int vars = 0;
  int maxdeg = 0;
  std::vector<Mono> list;
  std::map<Mono, int> index;

  static MIndexSet make(int vars, int maxdeg);
  int dim() const { return static_cast<int>(list.size()); }
  int grade(int i) const { return mono_degree(list[i]); }
};

/// Finite truncation of the coinduced picture: carriers for A and
/// Q = U(g) (x) S(g*)^ (as functionals on U(p)), exact p-action tables, the
/// splitting (s0, iota, pi) and the structural tensors Phi_p, R_p.
class TruncModel {
 public:
  TruncModel(const QuasiLieBialgebra& q, const ModelParams& params,
             const FreeSeries& associator);

  const ModelParams& params() const { return params_; }
  int order() const { return params_.order; }
  int n() const { return n_; }
  const QuasiLieBialgebra& input() const { return q_; }
  const DoubleData& dbl() const { return double_; }
  const EnvelopingAlgebra& Up() const { return *up_; }
  std::shared_ptr<const EnvelopingAlgebra> Up_ptr() const { return up_; }

  const MIndexSet& ug_set() const { return ug_; }
  const MIndexSet& a_set() const { return a_; }
  long long dimA() const { return a_.dim(); }
  long long dimUg() const { return ug_.dim(); }
  long long dimQ() const { return dimUg() * dimA(); }
  long long dim_atom(Atom a) const { return a == Atom::Q ? dimQ() : dimA(); }

  long long q_index(int z, int m) const { return static_cast<long long>(z) * dimA() + m; }
  int q_ug(long long q) const { return static_cast<int>(q / dimA()); }
  int q_star(long long q) const { return static_cast<int>(q % dimA()); }
  long long s0_index() const { return q_index(ug_.index.at(mono_unit(n_)), 0); }

  int atom_star_grade(Atom a, long long i) const;
  int atom_ug_grade(Atom a, long long i) const;

  /// Generator action tables (generators of p, ids 0..2n-1).
  const RMat& act(Atom a, int gen) const;
  /// True iff the exact action of `gen` on basis column `i` has components
  /// outside the carrier (the stored column is a projection there).
  bool act_overflow(Atom a, int gen, long long i) const;
  /// Action of a PBW monomial of U(p) on one atom (cached).
  const RMat& act_mono(Atom a, const Mono& m) const;
  /// sigma(y^kappa) action on a vector over an object (kappa over n vars).
  SVec act_sigma(const Obj& obj, const Mono& kappa, const SVec& v) const;
  /// Diagonal generator action on an object vector.
  SVec act_gen_diag(const Obj& obj, int gen, const SVec& v) const;

  const RMat& iota() const { return iota_; }

  const UTensor& phi_p() const { return phi_p_; }
  const UTensor& phi_p_inv() const { return phi_p_inv_; }
  const UTensor& r_p() const { return r_p_; }
  const UTensor& r_p_inv() const { return r_p_inv_; }

  const Report& construction_report() const { return report_; }

  /// Object shape helpers.
  std::vector<long long> dims_of(const Obj& obj) const;
  long long total_dim(const Obj& obj) const;

 private:
  void build_action_tables();
  void verify_action_tables();
  void build_iota();

  QuasiLieBialgebra q_;
  ModelParams params_;
  int n_;
  DoubleData double_;
  std::shared_ptr<EnvelopingAlgebra> up_;
  MIndexSet ug_, a_;
  std::vector<RMat> actA_, actQ_;
  std::vector<std::vector<bool>> ovA_, ovQ_;
  mutable std::map<Mono, RMat> actA_mono_, actQ_mono_;
  RMat iota_;
  UTensor phi_p_, phi_p_inv_, r_p_, r_p_inv_;
  Report report_;
};

}  // namespace qlb
