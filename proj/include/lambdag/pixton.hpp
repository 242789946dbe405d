#pragma once

#include <vector>

#include "lambdag/graphs.hpp"
#include "lambdag/poly.hpp"
#include "lambdag/rational.hpp"

namespace lambdag {

// Weighting mod r: one weight in [0, r-1] per half-edge, satisfying
//   (i)   legs:     w(h_i) = a_i mod r
//   (ii)  edges:    w(h) + w(h') = 0 mod r
//   (iii) vertices: sum of weights at v = 0 mod r.
struct WeightingModR {
  long r = 1;
  std::vector<long> w;  // indexed by half-edge id
};

// All weightings of gr mod r for ramification data A (sum must be 0 for the
// count to be r^{h1}). Throws InvalidModulus when r < 1.
std::vector<WeightingModR> weightings(const StableGraph& gr, const std::vector<long>& A,
                                      long r);

// Integral over Mbar_{g,n} of prod psi_i^{ambient_i} times the degree-d part
// of Pixton's class P_g^{d,r}(A), evaluated for finitely many r and
// interpolated; returns the r = 0 constant term. Zero when
// sum(ambient) + d != 3g-3+n. Throws UnstableInput for unstable (g,n) and
// ConsistencyError when the sample polynomial never stabilizes.
Rational pixton_pairing(int g, int d, const std::vector<long>& A,
                        const std::vector<int>& ambient);

// 2^{-g} P_g^g(A) paired as above.
Rational dr_pairing(int g, const std::vector<long>& A, const std::vector<int>& ambient);

// Integral of prod psi_i^{a_i} lambda_g, through the DR route:
// (-1)^g 2^{-g} P_g^g(0,...,0). Memoized under HODGE keys.
Rational hodge_integral(int g, const std::vector<int>& ambient);

// Diagnostic used by the stabilization checks: the fitted r-polynomial for
// the pairing, computed with `extra` additional samples beyond the policy's
// 2d+3.
RPolynomial pixton_poly(int g, int d, const std::vector<long>& A,
                        const std::vector<int>& ambient, int extra);

}  // namespace lambdag
