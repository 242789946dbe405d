#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lambdag/rational.hpp"

namespace lambdag {

// Dense univariate polynomial in r over the rationals. Trailing zeros are
// trimmed on construction, so degree() is well-defined (-1 for the zero
// polynomial).
class RPolynomial {
 public:
  RPolynomial() = default;
  explicit RPolynomial(std::vector<Rational> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  Rational coeff(int k) const;
  Rational constant_term() const { return coeff(0); }
  Rational eval(const Rational& x) const;

  RPolynomial& operator+=(const RPolynomial& o);
  friend RPolynomial operator+(RPolynomial a, const RPolynomial& b) { return a += b; }
  RPolynomial scaled(const Rational& c) const;

  friend bool operator==(const RPolynomial& a, const RPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

  std::string str() const;

 private:
  std::vector<Rational> coeffs_;
  void trim();
};

// e_k of the given values; e_0 = 1, e_k = 0 for k > size.
Rational elem_sym(int k, const std::vector<Rational>& values);

// (sum parts)! / prod(parts_i!).
Rational multinomial(const std::vector<int>& parts);

// Unique polynomial of degree <= degree_bound through the first
// degree_bound+1 samples. Every remaining sample must lie on it exactly;
// a deviation throws ConsistencyError (the degree bound or the minimum-r
// threshold was too small). Sample r-values must be pairwise distinct and
// there must be at least degree_bound+1 of them.
RPolynomial interpolate(const std::vector<std::pair<long, Rational>>& samples,
                        int degree_bound);

Rational constant_term(const RPolynomial& p);

}  // namespace lambdag
