#pragma once

#include <map>
#include <string>

#include "qlb/quasibialg.hpp"

namespace qlb {

/// Truncated series in the free algebra on two primitive letters X, Y.
struct FreeSeries {
  int max_degree = 0;
  std::map<std::string, Rational> terms;  // "" is the empty word

  Rational coeff(const std::string& w) const;
  void add(const std::string& w, const Rational& c);
};

/// Group-likeness Delta(Phi) = Phi (x) Phi (X, Y primitive) up to max_degree.
bool is_group_like(const FreeSeries& s);

/// The degree <= 2 rational associator 1 + (1/24)(XY - YX). Higher degrees
/// need user-supplied coefficients (the degree-3 terms are irrational).
FreeSeries rational_associator(int max_degree);

/// Build from a user coefficient table; validates group-likeness.
FreeSeries associator_from_table(int max_degree,
                                 const std::map<std::string, Rational>& table);

/// Phi(h t_12, h t_23) in U(p)^(x)3.
UTensor substitute(const EnvelopingAlgebra& A, const FreeSeries& phi,
                   const SparseTensor& t, int deg_cap);

/// exp(h t / 2) in U(p)^(x)2.
UTensor r_matrix(const EnvelopingAlgebra& A, const SparseTensor& t, int deg_cap);

/// The quasi-triangular quasi-bialgebra (U(p), Delta_0, eps, Phi_p, R_p).
QuasiBialgebra drinfeld_quantize(std::shared_ptr<const EnvelopingAlgebra> A,
                                 const SparseTensor& t, int deg_cap, int tensor_dim,
                                 const FreeSeries& phi_series);

}  // namespace qlb
