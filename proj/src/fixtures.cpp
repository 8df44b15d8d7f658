#include "qlb/fixtures.hpp"

namespace qlb::fixtures {

QuasiLieBialgebra f0(int order) {
  return QuasiLieBialgebra::trivial(LieAlgebra::zero(2), 2, order);
}

QuasiLieBialgebra f1(int order) {
  LieAlgebra L = LieAlgebra::zero(2);
  L.set_bracket(0, 1, {Rational(0), Rational(1)});
  return QuasiLieBialgebra::trivial(L, 2, order);
}

QuasiLieBialgebra f2(int order) {
  QuasiLieBialgebra q = f1(order);
  // delta(e2) = e1 (x) e2 - e2 (x) e1
  q.delta[1][0][1] = Rational(1);
  q.delta[1][1][0] = Rational(-1);
  return q;
}

LieAlgebra sl2() {
  // basis (h, x, y): [h,x] = 2x, [h,y] = -2y, [x,y] = h
  LieAlgebra L = LieAlgebra::zero(3);
  L.set_bracket(0, 1, {Rational(0), Rational(2), Rational(0)});
  L.set_bracket(0, 2, {Rational(0), Rational(0), Rational(-2)});
  L.set_bracket(1, 2, {Rational(1), Rational(0), Rational(0)});
  return L;
}

SparseTensor sl2_casimir(int order) {
  SparseTensor t(2, 3, order);
  t.add_term({1, 1}, Rational(1, 2));  // (1/2) h (x) h
  t.add_term({2, 3}, Rational(1));     // x (x) y
  t.add_term({3, 2}, Rational(1));     // y (x) x
  return t;
}

QuasiLieBialgebra f3(int order) {
  return from_invariant_pair(sl2(), sl2_casimir(order), 3);
}

LieAlgebra broken_jacobi() {
  // [e1,e2] = e1, [e1,e3] = e2, [e2,e3] = e1: Jacobiator(e1,e2,e3) = e2.
  LieAlgebra L = LieAlgebra::zero(3);
  L.set_bracket(0, 1, {Rational(1), Rational(0), Rational(0)});
  L.set_bracket(0, 2, {Rational(0), Rational(1), Rational(0)});
  L.set_bracket(1, 2, {Rational(1), Rational(0), Rational(0)});
  return L;
}

QuasiLieBialgebra by_name(const std::string& name, int order) {
  if (name == "f0" || name == "F0") return f0(order);
  if (name == "f1" || name == "F1") return f1(order);
  if (name == "f2" || name == "F2") return f2(order);
  if (name == "f3" || name == "F3") return f3(order);
  throw InputError("unknown fixture: " + name);
}

}  // namespace qlb::fixtures
