#include <doctest.h>

#include "qlb/associator.hpp"
#include "qlb/fixtures.hpp"

using namespace qlb;

TEST_CASE("rational associator has no degree-1 terms and is group-like") {
  FreeSeries s1 = rational_associator(1);
  CHECK(s1.terms.size() == 1);
  CHECK(s1.coeff("") == Rational(1));
  CHECK(is_group_like(s1));

  FreeSeries s2 = rational_associator(2);
  CHECK(s2.coeff("XY") == Rational(1, 24));
  CHECK(s2.coeff("YX") == Rational(-1, 24));
  CHECK(is_group_like(s2));

  CHECK_THROWS_AS(rational_associator(3), UnsupportedDegree);
}

TEST_CASE("degree-2 coefficient pinned by the Alt oracle on sl2") {
  // For symmetric invariant t, [t12,t23] is totally antisymmetric, so
  // Alt(c [t12,t23]) = 6c [t12,t23]; matching phi = (1/4)[t12,t23] forces
  // c = 1/24. Verify antisymmetry by brute force on sl2, then the identity.
  LieAlgebra sl2 = fixtures::sl2();
  SparseTensor cas = fixtures::sl2_casimir(1);
  SparseTensor t12 = insert_legs(cas, 1, 2, 3);
  SparseTensor t23 = insert_legs(cas, 2, 3, 3);
  SparseTensor bracket = tensor_commutator(sl2, t12, t23);
  SparseTensor renorm = alt(bracket);
  renorm.scale(Rational(1, 6));
  CHECK(renorm == bracket);
  Rational c = rational_associator(2).coeff("XY");
  CHECK(c * Rational(6) == Rational(1, 4));
}

TEST_CASE("user coefficient tables are validated") {
  std::map<std::string, Rational> bad{{"X", Rational(1)}};
  CHECK_THROWS_AS(associator_from_table(2, bad), InputError);
  std::map<std::string, Rational> notgl{{"XY", Rational(1, 24)}};
  CHECK_THROWS_AS(associator_from_table(2, notgl), InputError);
  std::map<std::string, Rational> ok{{"XY", Rational(1, 24)}, {"YX", Rational(-1, 24)}};
  FreeSeries s = associator_from_table(2, ok);
  CHECK(is_group_like(s));
}

TEST_CASE("substitute on trivial inputs") {
  DoubleData D = build_double(fixtures::f1(3));
  auto A = std::make_shared<EnvelopingAlgebra>(D.p, 2, 3);
  FreeSeries phi = rational_associator(2);

  SparseTensor zero(2, 2, 3);
  CHECK(substitute(*A, phi, zero, 4).terms == A->unit_tensor(3, 4).terms);

  DoubleData Dab = build_double(fixtures::f0(3));
  EnvelopingAlgebra Aab(Dab.p, 2, 3);
  CHECK(substitute(Aab, phi, Dab.omega, 4).terms == Aab.unit_tensor(3, 4).terms);
}

TEST_CASE("substitute against an independently built bracket") {
  // Phi_p = 1 + (h^2/24) [t12, t23] for the degree-2 associator.
  DoubleData D = build_double(fixtures::f1(3));
  auto A = std::make_shared<EnvelopingAlgebra>(D.p, 2, 3);
  UTensor phi_p = substitute(*A, rational_associator(2), D.omega, 4);

  UTensor t12 = A->insert(A->from_sparse(D.omega, 4), 1, 2, 3);
  UTensor t23 = A->insert(A->from_sparse(D.omega, 4), 2, 3, 3);
  UTensor br = A->multiply(t12, t23) - A->multiply(t23, t12);
  br.scale(HSeries::monomial(3, 2, Rational(1, 24)));
  UTensor expect = A->unit_tensor(3, 4) + br;
  CHECK(phi_p.terms == expect.terms);
  CHECK_FALSE((phi_p - A->unit_tensor(3, 4)).is_zero());
}

TEST_CASE("r_matrix truncations") {
  DoubleData D = build_double(fixtures::f1(3));
  EnvelopingAlgebra A(D.p, 2, 3);

  SparseTensor zero(2, 2, 3);
  CHECK(r_matrix(A, zero, 4).terms == A.unit_tensor(2, 4).terms);

  // mod h^2: 1 + (h/2) t
  {
    DoubleData D2 = build_double(fixtures::f1(2));
    EnvelopingAlgebra A2(D2.p, 2, 2);
    UTensor r = r_matrix(A2, D2.omega, 4);
    UTensor expect = A2.unit_tensor(2, 4);
    UTensor ht = A2.from_sparse(D2.omega, 4);
    ht.scale(HSeries::monomial(2, 1, Rational(1, 2)));
    expect += ht;
    CHECK(r.terms == expect.terms);
  }

  // mod h^3: 1 + (h/2) t + (h^2/8) t t
  {
    UTensor r = r_matrix(A, D.omega, 4);
    UTensor expect = A.unit_tensor(2, 4);
    UTensor ht = A.from_sparse(D.omega, 4);
    UTensor tt = A.multiply(ht, ht);
    ht.scale(HSeries::monomial(3, 1, Rational(1, 2)));
    tt.scale(HSeries::monomial(3, 2, Rational(1, 8)));
    expect += ht;
    expect += tt;
    CHECK(r.terms == expect.terms);
  }
}

TEST_CASE("drinfeld_quantize passes the axioms mod h^3 on the F1 double") {
  DoubleData D = build_double(fixtures::f1(3));
  auto A = std::make_shared<EnvelopingAlgebra>(D.p, 2, 3);
  QuasiBialgebra B = drinfeld_quantize(A, D.omega, 4, 2, rational_associator(2));
  CHECK(check_axioms(B).passed());
  CHECK(check_quasitriangular(B).passed());

  // abelian double: undeformed
  DoubleData Dab = build_double(fixtures::f0(3));
  auto Aab = std::make_shared<EnvelopingAlgebra>(Dab.p, 2, 3);
  QuasiBialgebra Bab = drinfeld_quantize(Aab, Dab.omega, 4, 2, rational_associator(2));
  CHECK((Bab.phi - Aab->unit_tensor(3, 4)).is_zero());
  CHECK(check_axioms(Bab).passed());
}

TEST_CASE("classical limit of the Drinfeld quantization is the associated pair") {
  DoubleData D = build_double(fixtures::f1(3));
  auto A = std::make_shared<EnvelopingAlgebra>(D.p, 2, 3);
  QuasiBialgebra B = drinfeld_quantize(A, D.omega, 4, 2, rational_associator(2));
  QuasiLieBialgebra limit = classical_limit(B);
  QuasiLieBialgebra assoc = from_invariant_pair(D.p, D.omega, 2);
  CHECK(limit.delta == assoc.delta);
  CHECK(limit.phi == assoc.phi);
  CHECK(check_quasi_lie(limit).passed());
}

TEST_CASE("B4 holds exactly for the quantization") {
  DoubleData D = build_double(fixtures::f2(3));
  auto A = std::make_shared<EnvelopingAlgebra>(D.p, 2, 3);
  QuasiBialgebra B = drinfeld_quantize(A, D.omega, 4, 2, rational_associator(2));
  UTensor capped = A->counit_leg(B.phi, 2);
  CHECK((capped - A->unit_tensor(2, 4)).is_zero());
}
