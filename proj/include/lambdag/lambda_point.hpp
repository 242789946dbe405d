#pragma once

#include <vector>

#include "lambdag/rational.hpp"

namespace lambdag {

// <tau_{2g-2} lambda_g>_g; b_0 = 1. Computed through the DR route, memoized.
Rational b_g(int g);

// multinomial(2g-3+n; a_1..a_n) * b_g when sum(a_i) = 2g-3+n, else 0.
Rational lambda_theorem_value(int g, const std::vector<int>& exponents);

// One Taylor-coefficient query against the point-target constraint series:
// apply d/dt_r for each element of derivs, then set t = 0.
struct PointThetaQuery {
  int g = 0;
  int n = 0;  // >= -1
  int m = 0;
  std::vector<long> derivs;
};

// The lambda_g constraint Theta_{g,n,m} at the point target. Every value
// is conjecturally (provenly, for the point) zero; the function computes
// the four displayed sums honestly and returns their total. When
// nonzero_terms is given it receives the count of nonzero intermediate
// contributions (zero means the cancellation was vacuous).
Rational theta_point(const PointThetaQuery& q, long* nonzero_terms = nullptr);

// The auxiliary constraint Psi_{g,n} at the point, g <= 1 only (higher g
// needs lambda_{g-1} integrals outside the DR route): throws
// UnsupportedGenus for g >= 2.
Rational psi_point(int g, int n, const std::vector<long>& derivs);

}  // namespace lambdag
