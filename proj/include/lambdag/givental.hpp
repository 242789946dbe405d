#pragma once

#include <string>
#include <vector>

#include "lambdag/rational.hpp"

namespace lambdag {

using RMatrix = std::vector<std::vector<Rational>>;

// Semisimple input data in the canonical idempotent basis e_1..e_N with
// <e_i, e_j> = delta_ij / Delta_i and identity 1 = sum e_i. R holds the
// series coefficients R_0 = Id, R_1, ..., R_Z (truncation order Z).
struct SemisimpleData {
  int N = 1;
  std::vector<Rational> delta;
  std::vector<RMatrix> R;

  int order() const { return static_cast<int>(R.size()) - 1; }
};

struct Violation {
  int order = -1;  // series order where the check failed; -1 structural
  std::string what;
};

// Structural checks (shapes, nonzero Delta, R_0 = Id) plus the symplectic
// condition R(z) R*(-z) = Id through order Z, with * the pairing adjoint.
// Empty result means ok; failing orders are reported lowest first.
std::vector<Violation> validate(const SemisimpleData& data);

// Coefficients B_k of R(z)^{-1} through order Z (B_0 = Id).
std::vector<RMatrix> r_inverse(const SemisimpleData& data);

// The edge bivector numerator
//   E(z,w)_{ij} = Delta_i delta_ij - sum_k Delta_k Binv(z)_{ik} Binv(w)_{jk}
// divided exactly by (z + w), computed through total order Z - 1:
// result[a][b] is the N x N coefficient of z^a w^b (a + b <= Z - 1).
// Throws ValidationError if the division leaves a remainder.
std::vector<std::vector<RMatrix>> edge_table(const SemisimpleData& data);

// One leg: a finite combination sum_c v_c psi^c with v_c expanded in the
// idempotent basis; psi_coeff[c] is v_c (empty vectors allowed, read as 0).
struct LegInput {
  std::vector<std::vector<Rational>> psi_coeff;
};

struct TreeQuery {
  int g = 0;
  std::vector<LegInput> legs;
};

// Stable-tree graph sum: over trees with total genus g carrying the marked
// legs, vertex markings into {1..N} and half-edge heights, of 1/|Aut| times
// leg factors [z^a] <Rinv(z) t(z), e^i>, edge factors from edge_table, and
// vertex factors Delta_i^{g(v)-1} sum_k 1/k! (prod of dilaton-leaf T
// coefficients) times lambda_{g(v)} psi integrals. Series reads beyond the
// truncation order are zero; when min_order is given it receives the highest
// order the query consumed, so the caller can tell whether Z sufficed.
Rational tree_sum(const SemisimpleData& data, const TreeQuery& q, int* min_order = nullptr);

// Parse SemisimpleData from JSON text; rationals are strings ("-7/5760").
// Schema: {"n": int, "delta": [str...], "r": [[[str...]...]...]} where r
// lists R_0..R_Z row-major. Throws std::invalid_argument on malformed input.
SemisimpleData semisimple_from_json(const std::string& text);

}  // namespace lambdag
