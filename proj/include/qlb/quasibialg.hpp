#pragma once

#include <memory>
#include <optional>

#include "qlb/pbw.hpp"
#include "qlb/report.hpp"

namespace qlb {

/// Quasi-bialgebra structure on a truncated enveloping algebra: a coproduct
/// given on generators (extended as an algebra map), the standard counit,
/// an invertible associator Phi, and an optional R-matrix.
struct QuasiBialgebra {
  std::shared_ptr<const EnvelopingAlgebra> carrier;
  int deg_cap = 0;
  std::vector<UTensor> delta_gen;  // Delta(e_i), one 2-leg tensor per generator
  UTensor phi;                     // 3 legs
  std::optional<UTensor> R;        // 2 legs

  /// dim g for the Lie-layer letter encoding of classical limits.
  int tensor_dim = 0;

  const EnvelopingAlgebra& A() const { return *carrier; }
};

/// Undeformed structure: primitive coproduct, Phi = 1, no R.
QuasiBialgebra undeformed_bialgebra(std::shared_ptr<const EnvelopingAlgebra> A,
                                    int deg_cap, int tensor_dim);

/// Extend Delta (given on generators) to a PBW monomial / tensor leg.
UTensor apply_delta_mono(const QuasiBialgebra& B, const Mono& m);
UTensor apply_delta_leg(const QuasiBialgebra& B, const UTensor& t, int leg);

/// Sum over signed leg permutations (no division).
UTensor alt_tensor(const EnvelopingAlgebra& A, const UTensor& t);

/// Drinfeld's axioms: B1 on generators, pentagon, counit axioms, B4.
Report check_axioms(const QuasiBialgebra& B);

/// The three quasi-triangular identities.
Report check_quasitriangular(const QuasiBialgebra& B);

/// Twist by an invertible F with (id (x) eps)F = (eps (x) id)F = 1.
QuasiBialgebra twist_quasibialg(const QuasiBialgebra& B, const UTensor& F);

/// Classical limit (requires Phi = 1 mod h^2): delta(x) from the skew part
/// of Delta at order h, phi from Alt(Phi)/h^2.
QuasiLieBialgebra classical_limit(const QuasiBialgebra& B);

struct ExtractedT {
  SparseTensor tensor;
  Report report;
  ExtractedT(SparseTensor t, Report r) : tensor(std::move(t)), report(std::move(r)) {}
};

/// t = (R^21 R - 1)/h mod h, with symmetry and invariance verified.
ExtractedT extract_t(const QuasiBialgebra& B);

}  // namespace qlb
