#pragma once

#include "qlb/lie.hpp"

namespace qlb::fixtures {

/// F0: abelian, dim 2, trivial cobracket.
QuasiLieBialgebra f0(int order);

/// F1: dim 2, [e1,e2] = e2, delta = 0, phi = 0.
QuasiLieBialgebra f1(int order);

/// F2: Borel bialgebra: dim 2, [e1,e2] = e2, delta(e2) = e1^e2, phi = 0.
QuasiLieBialgebra f2(int order);

/// F3: sl2 with delta = 0 and phi from the invariant pair (sl2, Casimir).
QuasiLieBialgebra f3(int order);

/// sl2 with basis (h, x, y) and its symmetric invariant Casimir tensor.
LieAlgebra sl2();
SparseTensor sl2_casimir(int order);

/// dim 3 algebra with a genuine Jacobi failure (for error-path tests).
LieAlgebra broken_jacobi();

QuasiLieBialgebra by_name(const std::string& name, int order);

}  // namespace qlb::fixtures
