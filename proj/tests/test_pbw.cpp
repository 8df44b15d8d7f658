#include <doctest.h>

#include <random>

#include "qlb/fixtures.hpp"
#include "qlb/pbw.hpp"

using namespace qlb;

namespace {

EnvelopingAlgebra f1_double_algebra(int order) {
  DoubleData D = build_double(fixtures::f1(order));
  return EnvelopingAlgebra(D.p, 2, order);
}

Mono mono_of(int num_gens, std::initializer_list<int> gens) {
  Mono m(num_gens, 0);
  for (int g : gens) ++m[g];
  return m;
}

UElement element_of(const EnvelopingAlgebra& A, const Mono& m, int cap) {
  UElement e = A.u_element(cap);
  e.add(m, HSeries::one(A.order()));
  return e;
}

std::mt19937 rng(4242);

Mono random_mono(int num_gens, int max_deg) {
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_int_distribution<int> gen(0, num_gens - 1);
  Mono m(num_gens, 0);
  int d = deg(rng);
  for (int i = 0; i < d; ++i) ++m[gen(rng)];
  return m;
}

}  // namespace

TEST_CASE("straightening: e^2 * e_2 = e_2 e^2 - e^1 in the F1 double") {
  EnvelopingAlgebra A = f1_double_algebra(1);
  // generators: e1,e2 -> 0,1; e^1,e^2 -> 2,3
  UElement a = element_of(A, mono_of(4, {3}), 4);  // e^2
  UElement b = element_of(A, mono_of(4, {1}), 4);  // e_2
  UElement prod = A.u_multiply(a, b);
  CHECK_FALSE(prod.overflow);
  UElement expect = A.u_element(4);
  expect.add(mono_of(4, {1, 3}), HSeries::one(1));
  expect.add(mono_of(4, {2}), -HSeries::one(1));
  CHECK(prod.terms == expect.terms);
}

TEST_CASE("unit and disjoint products") {
  EnvelopingAlgebra A = f1_double_algebra(1);
  UElement one = element_of(A, mono_unit(4), 4);
  UElement x = element_of(A, mono_of(4, {0, 1}), 4);
  CHECK(A.u_multiply(one, x).terms == x.terms);

  // abelian: e_i e_j with i < j is just the monomial
  EnvelopingAlgebra Ab(LieAlgebra::zero(4), 2, 1);
  UElement ei = element_of(Ab, mono_of(4, {0}), 4);
  UElement ej = element_of(Ab, mono_of(4, {1}), 4);
  UElement p = Ab.u_multiply(ei, ej);
  UElement expect = Ab.u_element(4);
  expect.add(mono_of(4, {0, 1}), HSeries::one(1));
  CHECK(p.terms == expect.terms);
}

TEST_CASE("PBW associativity on 500 random monomial triples, no overflow") {
  DoubleData D = build_double(fixtures::f2(1));
  EnvelopingAlgebra A(D.p, 2, 1);
  const int cap = 12;  // generous so products never overflow
  for (int trial = 0; trial < 500; ++trial) {
    UElement a = element_of(A, random_mono(4, 2), cap);
    UElement b = element_of(A, random_mono(4, 2), cap);
    UElement c = element_of(A, random_mono(4, 2), cap);
    UElement left = A.u_multiply(A.u_multiply(a, b), c);
    UElement right = A.u_multiply(a, A.u_multiply(b, c));
    CHECK_FALSE(left.overflow);
    CHECK_FALSE(right.overflow);
    CHECK(left.terms == right.terms);
  }
}

TEST_CASE("PBW dimension check") {
  // number of degree <= k monomials equals dim S^{<=k}(p)
  DoubleData D = build_double(fixtures::f1(1));
  (void)D;
  CHECK(pbw_dimension(4, 0) == 1);
  CHECK(pbw_dimension(4, 1) == 5);
  CHECK(pbw_dimension(4, 2) == 15);
  CHECK(pbw_dimension(4, 4) == 70);
  CHECK(pbw_dimension(6, 4) == 210);
  // count monomials enumerated by exponent vectors of degree <= 4 over 4 gens
  int count = 0;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b)
      for (int c = 0; a + b + c <= 4; ++c)
        for (int d = 0; a + b + c + d <= 4; ++d) ++count;
  CHECK(count == 70);
}

TEST_CASE("overflow flag set on discarded degree") {
  EnvelopingAlgebra A = f1_double_algebra(1);
  UElement a = element_of(A, mono_of(4, {0, 0}), 3);  // e1^2
  UElement b = element_of(A, mono_of(4, {1, 1}), 3);  // e2^2
  UElement p = A.u_multiply(a, b);                    // degree 4 > cap 3
  CHECK(p.overflow);
}

TEST_CASE("coproduct is an algebra map, coassociative and cocommutative") {
  EnvelopingAlgebra A = f1_double_algebra(2);
  UElement one = element_of(A, mono_unit(4), 4);
  UTensor d1 = A.u_coproduct(one);
  CHECK(d1.terms == A.unit_tensor(2, 4).terms);

  // Delta(e1) = e1 (x) 1 + 1 (x) e1
  UElement e1 = element_of(A, mono_of(4, {0}), 4);
  UTensor de1 = A.u_coproduct(e1);
  UTensor expect = A.u_tensor(2, 4);
  expect.add({mono_of(4, {0}), mono_unit(4)}, HSeries::one(2));
  expect.add({mono_unit(4), mono_of(4, {0})}, HSeries::one(2));
  CHECK(de1.terms == expect.terms);

  // Delta(e1 e2) = e1e2 (x) 1 + e1 (x) e2 + e2 (x) e1 + 1 (x) e1e2
  UElement e12 = element_of(A, mono_of(4, {0, 1}), 4);
  UTensor de12 = A.u_coproduct(e12);
  UTensor expect2 = A.u_tensor(2, 4);
  expect2.add({mono_of(4, {0, 1}), mono_unit(4)}, HSeries::one(2));
  expect2.add({mono_of(4, {0}), mono_of(4, {1})}, HSeries::one(2));
  expect2.add({mono_of(4, {1}), mono_of(4, {0})}, HSeries::one(2));
  expect2.add({mono_unit(4), mono_of(4, {0, 1})}, HSeries::one(2));
  CHECK(de12.terms == expect2.terms);

  // multiplicativity, coassociativity, cocommutativity on random elements
  for (int trial = 0; trial < 25; ++trial) {
    UElement a = element_of(A, random_mono(4, 2), 8);
    UElement b = element_of(A, random_mono(4, 2), 8);
    UTensor lhs = A.u_coproduct(A.u_multiply(a, b));
    UTensor rhs = A.multiply(A.u_coproduct(a), A.u_coproduct(b));
    CHECK(lhs.terms == rhs.terms);

    UTensor da = A.u_coproduct(a);
    CHECK(A.coproduct_leg(da, 1).terms == A.coproduct_leg(da, 2).terms);
    CHECK(A.permute(da, "21").terms == da.terms);

    // counit axiom: (eps (x) id) Delta = id
    UTensor capped = A.counit_leg(da, 1);
    UTensor as_tensor = A.u_tensor(1, 8);
    for (const auto& [m, c] : a.terms) as_tensor.add({m}, c);
    CHECK(capped.terms == as_tensor.terms);
  }
}

TEST_CASE("counit is an algebra map") {
  EnvelopingAlgebra A = f1_double_algebra(1);
  UElement one = element_of(A, mono_unit(4), 4);
  CHECK(A.u_counit(one) == HSeries::one(1));
  UElement e2 = element_of(A, mono_of(4, {1}), 4);
  CHECK(A.u_counit(e2).is_zero());
  for (int trial = 0; trial < 30; ++trial) {
    UElement a = element_of(A, random_mono(4, 2), 8);
    UElement b = element_of(A, random_mono(4, 2), 8);
    CHECK(A.u_counit(A.u_multiply(a, b)) == A.u_counit(a) * A.u_counit(b));
  }
}

TEST_CASE("sigma symmetrization and the ordered-word expansion") {
  // In the F2 double [e^1, e^2] = e^2, so the ordered word e^1 e^2 is
  // sigma(e^1 e^2) + (1/2)[e^1,e^2] and word_to_basis must say so.
  DoubleData D = build_double(fixtures::f2(1));
  EnvelopingAlgebra A(D.p, 2, 1);
  auto lin = A.word_to_basis({2, 3});  // e^1 e^2 as an ordered word
  // expected: B(0, e^1 e^2) + (1/2) B(0, e^2)
  std::map<Mono, Rational> got(lin.begin(), lin.end());
  CHECK(got.size() == 2);
  CHECK(got[mono_of(4, {2, 3})] == Rational(1));
  CHECK(got[mono_of(4, {3})] == Rational(1, 2));

  // and the reversed word e^2 e^1 = sigma(e^1e^2) - (1/2)[e^1,e^2]
  auto lin2 = A.word_to_basis({3, 2});
  std::map<Mono, Rational> got2(lin2.begin(), lin2.end());
  CHECK(got2[mono_of(4, {2, 3})] == Rational(1));
  CHECK(got2[mono_of(4, {3})] == Rational(-1, 2));

  CHECK(A.symmetrize_sigma(mono_of(4, {2, 3}), 4).terms.size() == 1);
  CHECK(A.symmetrize_sigma(mono_unit(4), 4).terms ==
        element_of(A, mono_unit(4), 4).terms);
  CHECK(A.symmetrize_sigma(mono_of(4, {2}), 4).terms ==
        element_of(A, mono_of(4, {2}), 4).terms);
}

TEST_CASE("f0_projection kills positive star degree") {
  EnvelopingAlgebra A = f1_double_algebra(1);
  UElement mixed = A.u_element(4);
  mixed.add(mono_of(4, {0, 1}), HSeries::one(1));   // e1 e2
  mixed.add(mono_of(4, {0, 2}), HSeries::one(1));   // e1 sigma(e^1)
  mixed.add(mono_of(4, {2}), HSeries::one(1));      // e^1
  UElement proj = A.f0_projection(mixed);
  UElement expect = A.u_element(4);
  expect.add(mono_of(4, {0, 1}), HSeries::one(1));
  CHECK(proj.terms == expect.terms);

  // straighten-then-project consistency: f0(e^2 e_2) = f0(e_2 e^2 - e^1) = 0
  UElement estar2 = element_of(A, mono_of(4, {3}), 4);
  UElement e2 = element_of(A, mono_of(4, {1}), 4);
  CHECK(A.f0_projection(A.u_multiply(estar2, e2)).is_zero());
}

TEST_CASE("u_multiply respects the filtration") {
  EnvelopingAlgebra A = f1_double_algebra(1);
  for (int trial = 0; trial < 40; ++trial) {
    Mono ma = random_mono(4, 2), mb = random_mono(4, 2);
    for (const auto& [m, c] : A.mono_product(ma, mb))
      CHECK(mono_degree(m) <= mono_degree(ma) + mono_degree(mb));
  }
}

TEST_CASE("tensor permute and insert") {
  EnvelopingAlgebra A = f1_double_algebra(2);
  UTensor t = A.u_tensor(2, 4);
  t.add({mono_of(4, {0}), mono_of(4, {1})}, HSeries::one(2));
  UTensor t21 = A.permute(t, "21");
  UTensor expect = A.u_tensor(2, 4);
  expect.add({mono_of(4, {1}), mono_of(4, {0})}, HSeries::one(2));
  CHECK(t21.terms == expect.terms);

  UTensor t13 = A.insert(t, 1, 3, 3);
  UTensor e13 = A.u_tensor(3, 4);
  e13.add({mono_of(4, {0}), mono_unit(4), mono_of(4, {1})}, HSeries::one(2));
  CHECK(t13.terms == e13.terms);
}

TEST_CASE("tensor inverse and exp") {
  EnvelopingAlgebra A = f1_double_algebra(3);
  UTensor t = A.unit_tensor(2, 4);
  UTensor x = A.u_tensor(2, 4);
  x.add({mono_of(4, {0}), mono_of(4, {1})}, HSeries::monomial(3, 1, Rational(1)));
  t += x;
  UTensor inv = A.inverse(t);
  CHECK(A.multiply(t, inv).terms == A.unit_tensor(2, 4).terms);
  CHECK(A.multiply(inv, t).terms == A.unit_tensor(2, 4).terms);

  UTensor ex = A.exp(x);
  UTensor exm = A.exp(-x);
  CHECK(A.multiply(ex, exm).terms == A.unit_tensor(2, 4).terms);

  UTensor bad = A.unit_tensor(2, 4);
  bad.scale(Rational(2));
  CHECK_THROWS_AS(A.inverse(bad), NotInvertible);
}
